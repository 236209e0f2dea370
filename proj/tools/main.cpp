/**
 * Copyright 2026 The denfg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// denfgperm: permanents of complex matrices via exact computation, the
// sum-product algorithm on the double-edge graph, and degree-2 cover
// analysis. Subcommands: spa-sweep, cover-sweep, closed-form, perm, verify.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "denfg/covers.hpp"
#include "denfg/errors.hpp"
#include "denfg/harness.hpp"
#include "denfg/permanent.hpp"
#include "denfg/version.hpp"

namespace {

using namespace denfg;

constexpr double kPi = 3.14159265358979323846;

// "21" -> 21 equally spaced values in [0, pi]; "0,1.5708,3.14159" -> that
// explicit list.
std::vector<double> parse_alphas(const std::string& text) {
    if (text.find(',') == std::string::npos &&
        text.find('.') == std::string::npos) {
        const long count = std::stol(text);
        if (count < 1) throw domain_error("--alphas: count must be >= 1");
        return equally_spaced_alphas(static_cast<std::size_t>(count));
    }
    std::vector<double> alphas;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        alphas.push_back(std::stod(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return alphas;
}

InitMode parse_init(const std::string& name) {
    if (name == "random-psd-rank2") return InitMode::RandomPsdRank2;
    if (name == "rank1") return InitMode::Rank1;
    if (name == "diagonal") return InitMode::Diagonal;
    throw domain_error("--init: expected random-psd-rank2, rank1 or diagonal");
}

ComplexMatrix matrix_from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw domain_error("cannot open matrix file " + path);
    const auto j = nlohmann::json::parse(f);
    const auto& rows = j.is_object() ? j.at("matrix") : j;
    const std::size_t n = rows.size();
    if (n == 0) throw domain_error("matrix file: empty matrix");
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw domain_error("matrix file: not square");
        for (std::size_t k = 0; k < n; ++k) {
            const auto& cell = rows[i][k];
            if (cell.is_array())
                m(i, k) = cplx{cell.at(0).get<double>(), cell.at(1).get<double>()};
            else
                m(i, k) = cplx{cell.get<double>(), 0.0};
        }
    }
    return m;
}

struct SweepCli {
    SweepConfig config;
    std::string alphas_text;
    std::string init_text = "random-psd-rank2";
    bool exhaustive = false;
    bool resume = false;

    void attach_common(CLI::App* cmd) {
        cmd->add_option("--n", config.n, "matrix dimension")->required();
        cmd->add_option("--alphas", alphas_text,
                        "count of equally spaced angles, or a comma list");
        cmd->add_option("--trials", config.trials, "trials per angle");
        cmd->add_option("--seed", config.seed, "sweep seed");
        cmd->add_option("--threads", config.threads, "worker threads");
        cmd->add_option("--out", config.out_prefix,
                        "output prefix for records/summary/manifest");
        cmd->add_option("--format", config.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_flag("--resume", resume, "resume from the manifest");
    }

    void attach_spa(CLI::App* cmd) {
        cmd->add_option("--damping", config.spa.damping,
                        "fresh-message blend weight (0.5 = midpoint)");
        cmd->add_option("--max-iters", config.spa.max_iters, "iteration cap");
        cmd->add_option("--tol", config.spa.conv_tol, "convergence tolerance");
        cmd->add_option("--init", init_text,
                        "random-psd-rank2 | rank1 | diagonal");
    }

    void attach_cover(CLI::App* cmd) {
        cmd->add_option("--cover-samples", config.cover_samples,
                        "Monte Carlo cover samples per trial");
        cmd->add_flag("--exhaustive", exhaustive,
                      "enumerate all covers (n <= 4)");
    }

    SweepConfig finalize(SweepMode mode) {
        config.mode = mode;
        if (!alphas_text.empty()) config.alphas = parse_alphas(alphas_text);
        config.spa.init_mode = parse_init(init_text);
        if (mode == SweepMode::CoverSweep)
            config.cover_exhaustive = exhaustive || config.cover_samples == 0;
        return config;
    }
};

void print_summary(const SweepResult& res) {
    std::cout << summary_to_csv(res.summary);
    std::cout << "# wall_ms=" << res.wall_ms << "\n";
}

int run_cli(int argc, char** argv) {
    CLI::App app{"permanents of complex matrices: exact values, SPA-based "
                 "approximation, double-cover analysis"};
    app.set_version_flag("--version", std::string(DENFG_VERSION_STRING));
    app.require_subcommand(1);

    SweepCli spa_cli;
    auto* spa_cmd = app.add_subcommand(
        "spa-sweep", "sum-product runs over the sector ensembles");
    spa_cli.attach_common(spa_cmd);
    spa_cli.attach_spa(spa_cmd);

    SweepCli cover_cli;
    auto* cover_cmd = app.add_subcommand(
        "cover-sweep", "degree-2 cover analysis over the sector ensembles");
    cover_cli.attach_common(cover_cmd);
    cover_cli.attach_cover(cover_cmd);

    auto* table_cmd =
        app.add_subcommand("closed-form", "exact and asymptotic value table");
    std::size_t table_n_max = 20;
    double table_alpha = kPi;
    std::string table_out;
    table_cmd->add_option("--n", table_n_max, "largest dimension");
    table_cmd->add_option("--alpha", table_alpha,
                          "ensemble angle for the moment columns (needs a "
                          "zero-mean ensemble, i.e. alpha = pi)");
    table_cmd->add_option("--out", table_out, "output CSV path");

    auto* perm_cmd = app.add_subcommand("perm", "exact permanent of a matrix");
    std::string perm_in, perm_method = "ryser", perm_format = "text";
    bool perm_random = false;
    std::size_t perm_n = 4, perm_index = 0;
    double perm_alpha = kPi;
    std::uint64_t perm_seed = 0;
    perm_cmd->add_option("--in", perm_in,
                         "JSON matrix file (rows of numbers or [re,im])");
    perm_cmd->add_flag("--random", perm_random, "sample a matrix instead");
    perm_cmd->add_option("--n", perm_n, "dimension for --random");
    perm_cmd->add_option("--alpha", perm_alpha, "sector angle for --random");
    perm_cmd->add_option("--seed", perm_seed, "seed for --random");
    perm_cmd->add_option("--index", perm_index, "trial index for --random");
    perm_cmd->add_option("--method", perm_method, "ryser or naive")
        ->check(CLI::IsMember({"ryser", "naive"}));
    perm_cmd->add_option("--format", perm_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* verify_cmd =
        app.add_subcommand("verify", "cross-module oracle suites");
    std::string verify_suite = "fast", verify_out;
    verify_cmd->add_option("suite", verify_suite, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}));
    verify_cmd->add_option("--out", verify_out, "JSON report path");

    CLI11_PARSE(app, argc, argv);

    if (*spa_cmd) {
        const SweepConfig cfg = spa_cli.finalize(SweepMode::SpaSweep);
        print_summary(run_sweep(cfg, spa_cli.resume));
        return 0;
    }
    if (*cover_cmd) {
        const SweepConfig cfg = cover_cli.finalize(SweepMode::CoverSweep);
        print_summary(run_sweep(cfg, cover_cli.resume));
        return 0;
    }
    if (*table_cmd) {
        const auto table =
            closed_form_table(table_n_max, MomentTable::from_alpha(table_alpha));
        const std::string csv = closed_form_table_to_csv(table);
        if (table_out.empty()) {
            std::cout << csv;
        } else {
            std::ofstream f(table_out, std::ios::binary);
            f << csv;
        }
        return 0;
    }
    if (*perm_cmd) {
        ComplexMatrix m(1);
        if (perm_random) {
            EnsembleSpec es;
            es.alpha = perm_alpha;
            es.n = perm_n;
            es.seed = perm_seed;
            es.count = perm_index + 1;
            m = sample_matrix(es, perm_index);
        } else if (!perm_in.empty()) {
            m = matrix_from_json_file(perm_in);
        } else {
            throw domain_error("perm: need --in or --random");
        }
        const cplx p = perm_method == "naive" ? perm_naive(m) : perm_ryser(m);
        if (perm_format == "json") {
            nlohmann::json j{{"n", m.n()},
                             {"method", perm_method},
                             {"perm", {p.real(), p.imag()}},
                             {"abs2", std::norm(p)}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "perm = " << p.real() << (p.imag() < 0 ? " - " : " + ")
                      << std::abs(p.imag()) << "i\n|perm|^2 = " << std::norm(p)
                      << "\n";
        }
        return 0;
    }
    if (*verify_cmd) {
        const VerifyReport report = verify(verify_suite);
        for (const VerifyCheck& c : report.checks)
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                      << " (measured " << c.measured << ", tolerance "
                      << c.tolerance << ")\n";
        if (!verify_out.empty()) {
            std::ofstream f(verify_out, std::ios::binary);
            f << verify_report_to_json(report);
        }
        return report.all_pass ? 0 : 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const denfg::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const denfg::size_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const denfg::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const denfg::unsupported_moment_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
