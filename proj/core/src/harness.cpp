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

#include "denfg/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "denfg/covers.hpp"
#include "denfg/errors.hpp"
#include "denfg/permanent.hpp"
#include "denfg/version.hpp"

namespace denfg {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;

// Stream tags separating the independent random uses of one sweep seed.
constexpr std::uint64_t kTagMatrix = 0x6d617472;
constexpr std::uint64_t kTagSpa = 0x73706121;
constexpr std::uint64_t kTagCover = 0x636f7672;

// Shortest round-trip decimal form; reproducible across runs and locales.
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{})
        throw domain_error("records_from_csv: bad number '" + std::string(s) +
                           "'");
    return v;
}

template <typename Fn>
void run_parallel(std::size_t total, unsigned threads, Fn&& fn) {
    if (threads <= 1 || total <= 1) {
        for (std::size_t k = 0; k < total; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    const unsigned workers =
        std::min<std::size_t>(threads, total);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t k = next.fetch_add(1); k < total;
                 k = next.fetch_add(1)) {
                if (failed.load()) return;
                try {
                    fn(k);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
}

RecordClass to_record_class(Degeneracy d) {
    switch (d) {
        case Degeneracy::Rank1: return RecordClass::Rank1;
        case Degeneracy::Diagonal: return RecordClass::Diagonal;
        case Degeneracy::Generic: return RecordClass::Generic;
    }
    return RecordClass::Generic;
}

TrialRecord spa_trial(const SweepConfig& cfg, const std::vector<double>& alphas,
                      std::size_t ai, std::size_t t) {
    EnsembleSpec es;
    es.alpha = alphas[ai];
    es.n = cfg.n;
    es.seed = derive_key(cfg.seed, kTagMatrix, ai);
    es.count = cfg.trials;
    const ComplexMatrix theta = sample_matrix(es, t);

    TrialRecord rec;
    rec.alpha = alphas[ai];
    rec.trial = t;
    rec.z = perm_abs2(theta);
    rec.log_z = std::log(rec.z);

    SpaConfig sc = cfg.spa;
    sc.seed = derive_key(cfg.seed, kTagSpa, ai, t);
    const SpaResult res = run_spa(build_denfg(theta), sc);
    rec.zb = res.zb_spa;
    rec.log_zb = res.log_zb_spa;
    rec.converged = res.converged;
    rec.degeneracy = to_record_class(res.degeneracy);
    rec.iterations = res.iterations;
    return rec;
}

TrialRecord cover_trial(const SweepConfig& cfg,
                        const std::vector<double>& alphas, std::size_t ai,
                        std::size_t t) {
    EnsembleSpec es;
    es.alpha = alphas[ai];
    es.n = cfg.n;
    es.seed = derive_key(cfg.seed, kTagMatrix, ai);
    es.count = cfg.trials;
    const ComplexMatrix theta = sample_matrix(es, t);

    TrialRecord rec;
    rec.alpha = alphas[ai];
    rec.trial = t;
    rec.z = perm_abs2(theta);
    rec.log_z = std::log(rec.z);
    if (cfg.cover_exhaustive) {
        rec.zb = zb2_denfg_exact(theta);
    } else {
        Rng rng(derive_key(cfg.seed, kTagCover, ai, t));
        rec.zb = zb2_denfg_sampled(theta, cfg.cover_samples, rng).estimate;
    }
    rec.log_zb = std::log(rec.zb);
    rec.converged = true;
    rec.degeneracy = RecordClass::None;
    rec.iterations = 0;
    return rec;
}

std::vector<TrialRecord> compute_bucket(const SweepConfig& cfg,
                                        const std::vector<double>& alphas,
                                        std::size_t ai) {
    std::vector<TrialRecord> bucket(cfg.trials);
    run_parallel(cfg.trials, cfg.threads, [&](std::size_t t) {
        bucket[t] = (cfg.mode == SweepMode::SpaSweep)
                        ? spa_trial(cfg, alphas, ai, t)
                        : cover_trial(cfg, alphas, ai, t);
    });
    return bucket;
}

void attach_references(const SweepConfig& cfg, const std::vector<double>& alphas,
                       SweepResult& res) {
    if (cfg.mode == SweepMode::SpaSweep) {
        // Candidate dashed-line values for ln(E[Z]/E[Z_B]): the squared
        // all-ones-style ratio at alpha = 0 and the unsquared zero-mean
        // ratio at alpha = pi. Interpretation is the analyst's call.
        const double nd = static_cast<double>(cfg.n);
        res.ref_line_squared = std::log(kPi * nd / kE);
        res.ref_line_unsquared = 0.5 * std::log((nd + 1.0) / kE);
        return;
    }
    for (double alpha : alphas) {
        if (std::abs(alpha - kPi) < 1e-9) {
            const double lnr = 0.5 * (psi_log(cfg.n, 2.0, 1.0, 2.0, 0.0) -
                                      psi_log(cfg.n, 2.0, 1.0, 1.0, 0.0));
            res.overlays.push_back({alpha, lnr, "closed_form"});
        } else if (cfg.n <= 3) {
            const MomentTable m = MomentTable::from_alpha(alpha);
            const double lnr = 0.5 * (std::log(expected_z2_bruteforce(cfg.n, m)) -
                                      std::log(expected_zb2_sq_bruteforce(cfg.n, m)));
            res.overlays.push_back({alpha, lnr, "moment_bruteforce"});
        }
    }
}

std::string config_fingerprint(const SweepConfig& cfg,
                               const std::vector<double>& alphas) {
    std::string fp = cfg.mode == SweepMode::SpaSweep ? "spa" : "cover";
    fp += ";n=" + std::to_string(cfg.n) + ";trials=" + std::to_string(cfg.trials) +
          ";seed=" + std::to_string(cfg.seed) + ";alphas=";
    for (double a : alphas) fp += fmt(a) + ",";
    fp += ";damping=" + fmt(cfg.spa.damping) +
          ";tol=" + fmt(cfg.spa.conv_tol) +
          ";max_iters=" + std::to_string(cfg.spa.max_iters) +
          ";init=" + std::to_string(static_cast<int>(cfg.spa.init_mode)) +
          ";cover=" +
          (cfg.cover_exhaustive ? std::string("exhaustive")
                                : std::to_string(cfg.cover_samples));
    return fp;
}

} // namespace

void SweepConfig::validate() const {
    if (n < 1) throw domain_error("sweep: n >= 1 required");
    if (trials < 1) throw domain_error("sweep: trials >= 1 required");
    for (double a : alphas)
        if (!(a >= 0.0 && a <= kPi))
            throw domain_error("sweep: alphas must lie in [0, pi]");
    if (mode == SweepMode::SpaSweep && n > 20)
        throw size_limit_error("spa sweep: n <= 20 (exact Z required)");
    if (mode == SweepMode::CoverSweep && cover_exhaustive && n > 4)
        throw size_limit_error("cover sweep: exhaustive mode needs n <= 4");
    if (mode == SweepMode::CoverSweep && !cover_exhaustive && cover_samples < 2)
        throw domain_error("cover sweep: cover_samples >= 2");
    if (format != "csv" && format != "json")
        throw domain_error("sweep: format must be csv or json");
    spa.validate();
}

std::vector<double> equally_spaced_alphas(std::size_t count) {
    if (count == 0) throw domain_error("alphas count must be >= 1");
    if (count == 1) return {0.0};
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = kPi * static_cast<double>(k) / static_cast<double>(count - 1);
    return out;
}

SummaryRow summarize_bucket(SweepMode mode, double alpha,
                            const std::vector<TrialRecord>& bucket) {
    SummaryRow row;
    row.alpha = alpha;
    const double nt = static_cast<double>(bucket.size());

    double sum_z = 0.0, sum_zb = 0.0, sum_z2 = 0.0, sum_zb2 = 0.0;
    double sum_ratio = 0.0, sum_logr = 0.0;
    std::size_t conv = 0, n_rank1 = 0, n_diag = 0, n_gen = 0;
    for (const TrialRecord& r : bucket) {
        sum_z += r.z;
        sum_zb += r.zb;
        sum_z2 += r.z * r.z;
        sum_zb2 += r.zb * r.zb;
        sum_ratio += r.z / r.zb;
        sum_logr += r.log_z - r.log_zb;
        conv += r.converged ? 1 : 0;
        n_rank1 += r.degeneracy == RecordClass::Rank1 ? 1 : 0;
        n_diag += r.degeneracy == RecordClass::Diagonal ? 1 : 0;
        n_gen += r.degeneracy == RecordClass::Generic ? 1 : 0;
    }
    row.ln_ratio_of_means =
        (mode == SweepMode::SpaSweep)
            ? std::log(sum_z / sum_zb)
            : 0.5 * std::log(sum_z2 / sum_zb2);
    row.ln_mean_ratio = std::log(sum_ratio / nt);
    row.mean_log_ratio = sum_logr / nt;

    double ss = 0.0;
    for (const TrialRecord& r : bucket) {
        const double d = (r.log_z - r.log_zb) - row.mean_log_ratio;
        ss += d * d;
    }
    row.std_log_ratio = bucket.size() > 1 ? std::sqrt(ss / (nt - 1.0)) : 0.0;
    row.convergence_rate = static_cast<double>(conv) / nt;
    row.frac_rank1 = static_cast<double>(n_rank1) / nt;
    row.frac_diagonal = static_cast<double>(n_diag) / nt;
    row.frac_generic = static_cast<double>(n_gen) / nt;
    return row;
}

namespace {

SweepResult run_in_memory(const SweepConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> alphas =
        cfg.alphas.empty() ? equally_spaced_alphas(21) : cfg.alphas;

    SweepResult res;
    res.records.reserve(alphas.size() * cfg.trials);
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        const auto bucket = compute_bucket(cfg, alphas, ai);
        res.summary.push_back(summarize_bucket(cfg.mode, alphas[ai], bucket));
        res.records.insert(res.records.end(), bucket.begin(), bucket.end());
    }
    attach_references(cfg, alphas, res);
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return res;
}

} // namespace

SweepResult spa_sweep(const SweepConfig& config) {
    SweepConfig cfg = config;
    cfg.mode = SweepMode::SpaSweep;
    cfg.validate();
    return run_in_memory(cfg);
}

SweepResult cover_sweep(const SweepConfig& config) {
    SweepConfig cfg = config;
    cfg.mode = SweepMode::CoverSweep;
    cfg.validate();
    return run_in_memory(cfg);
}

const char* record_class_name(RecordClass c) {
    switch (c) {
        case RecordClass::Rank1: return "rank1";
        case RecordClass::Diagonal: return "diagonal";
        case RecordClass::Generic: return "generic";
        case RecordClass::None: return "none";
    }
    return "none";
}

namespace {

RecordClass record_class_from_name(std::string_view s) {
    if (s == "rank1") return RecordClass::Rank1;
    if (s == "diagonal") return RecordClass::Diagonal;
    if (s == "generic") return RecordClass::Generic;
    if (s == "none") return RecordClass::None;
    throw domain_error("unknown degeneracy label '" + std::string(s) + "'");
}

constexpr const char* kRecordsHeader =
    "alpha,trial,z,zb,log_z,log_zb,converged,degeneracy,iterations";
constexpr const char* kSummaryHeader =
    "alpha,ln_ratio_of_means,ln_mean_ratio,mean_log_ratio,std_log_ratio,"
    "convergence_rate,frac_rank1,frac_diagonal,frac_generic";

std::string record_to_line(const TrialRecord& r) {
    return fmt(r.alpha) + "," + std::to_string(r.trial) + "," + fmt(r.z) + "," +
           fmt(r.zb) + "," + fmt(r.log_z) + "," + fmt(r.log_zb) + "," +
           (r.converged ? "1" : "0") + "," + record_class_name(r.degeneracy) +
           "," + std::to_string(r.iterations);
}

} // namespace

std::string records_to_csv(const std::vector<TrialRecord>& records) {
    std::string out = kRecordsHeader;
    out += '\n';
    for (const TrialRecord& r : records) {
        out += record_to_line(r);
        out += '\n';
    }
    return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::string out = kSummaryHeader;
    out += '\n';
    for (const SummaryRow& s : rows) {
        out += fmt(s.alpha) + "," + fmt(s.ln_ratio_of_means) + "," +
               fmt(s.ln_mean_ratio) + "," + fmt(s.mean_log_ratio) + "," +
               fmt(s.std_log_ratio) + "," + fmt(s.convergence_rate) + "," +
               fmt(s.frac_rank1) + "," + fmt(s.frac_diagonal) + "," +
               fmt(s.frac_generic) + "\n";
    }
    return out;
}

std::vector<TrialRecord> records_from_csv(const std::string& text) {
    std::vector<TrialRecord> out;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string_view line(text.data() + pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        if (first) {
            if (line != kRecordsHeader)
                throw domain_error("records_from_csv: unexpected header");
            first = false;
            continue;
        }
        std::vector<std::string_view> cols;
        std::size_t c = 0;
        while (true) {
            std::size_t comma = line.find(',', c);
            if (comma == std::string_view::npos) {
                cols.push_back(line.substr(c));
                break;
            }
            cols.push_back(line.substr(c, comma - c));
            c = comma + 1;
        }
        if (cols.size() != 9)
            throw domain_error("records_from_csv: bad column count");
        TrialRecord r;
        r.alpha = parse_double(cols[0]);
        r.trial = static_cast<std::size_t>(parse_double(cols[1]));
        r.z = parse_double(cols[2]);
        r.zb = parse_double(cols[3]);
        r.log_z = parse_double(cols[4]);
        r.log_zb = parse_double(cols[5]);
        r.converged = cols[6] == "1";
        r.degeneracy = record_class_from_name(cols[7]);
        r.iterations = static_cast<int>(parse_double(cols[8]));
        out.push_back(r);
    }
    return out;
}

namespace {

nlohmann::json record_to_json_obj(const TrialRecord& r) {
    return nlohmann::json{{"alpha", r.alpha},
                          {"trial", r.trial},
                          {"z", r.z},
                          {"zb", r.zb},
                          {"log_z", r.log_z},
                          {"log_zb", r.log_zb},
                          {"converged", r.converged},
                          {"degeneracy", record_class_name(r.degeneracy)},
                          {"iterations", r.iterations}};
}

} // namespace

std::string records_to_json(const std::vector<TrialRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const TrialRecord& r : records) arr.push_back(record_to_json_obj(r));
    return arr.dump(2) + "\n";
}

std::string summary_to_json(const std::vector<SummaryRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SummaryRow& s : rows)
        arr.push_back(nlohmann::json{{"alpha", s.alpha},
                                     {"ln_ratio_of_means", s.ln_ratio_of_means},
                                     {"ln_mean_ratio", s.ln_mean_ratio},
                                     {"mean_log_ratio", s.mean_log_ratio},
                                     {"std_log_ratio", s.std_log_ratio},
                                     {"convergence_rate", s.convergence_rate},
                                     {"frac_rank1", s.frac_rank1},
                                     {"frac_diagonal", s.frac_diagonal},
                                     {"frac_generic", s.frac_generic}});
    return arr.dump(2) + "\n";
}

std::string manifest_to_json(const SweepConfig& config, const SweepResult& res,
                             const std::vector<std::size_t>& completed_buckets) {
    const std::vector<double> alphas =
        config.alphas.empty() ? equally_spaced_alphas(21) : config.alphas;
    nlohmann::json j;
    j["version"] = DENFG_VERSION_STRING;
    j["mode"] = config.mode == SweepMode::SpaSweep ? "spa-sweep" : "cover-sweep";
    j["fingerprint"] = config_fingerprint(config, alphas);
    j["config"] = {
        {"n", config.n},
        {"alphas", alphas},
        {"trials", config.trials},
        {"seed", config.seed},
        {"threads", config.threads},
        {"format", config.format},
        {"damping", config.spa.damping},
        {"conv_tol", config.spa.conv_tol},
        {"max_iters", config.spa.max_iters},
        {"init", static_cast<int>(config.spa.init_mode)},
        {"cover_exhaustive", config.cover_exhaustive},
        {"cover_samples", config.cover_samples},
    };
    j["wall_ms"] = res.wall_ms;
    j["completed_buckets"] = completed_buckets;
    nlohmann::json per_alpha = nlohmann::json::array();
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        const bool done = std::find(completed_buckets.begin(),
                                    completed_buckets.end(),
                                    ai) != completed_buckets.end();
        per_alpha.push_back({{"alpha", alphas[ai]},
                             {"trials", config.trials},
                             {"completed", done}});
    }
    j["per_alpha"] = per_alpha;
    if (res.ref_line_squared)
        j["reference_lines"] = {
            {"candidate_alpha0_squared", *res.ref_line_squared},
            {"candidate_pi_unsquared", *res.ref_line_unsquared}};
    if (!res.overlays.empty()) {
        nlohmann::json ov = nlohmann::json::array();
        for (const AlphaOverlay& o : res.overlays)
            ov.push_back({{"alpha", o.alpha},
                          {"ln_sqrt_ratio", o.ln_sqrt_ratio},
                          {"source", o.source}});
        j["analytic_overlays"] = ov;
    }
    return j.dump(2) + "\n";
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw numeric_error("cannot open output file " + path);
    f << content;
}

void append_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::app);
    if (!f) throw numeric_error("cannot open output file " + path);
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw numeric_error("cannot read file " + path);
    return std::string(std::istreambuf_iterator<char>(f),
                       std::istreambuf_iterator<char>());
}

} // namespace

SweepResult run_sweep(const SweepConfig& config, bool resume) {
    SweepConfig cfg = config;
    cfg.validate();
    const std::vector<double> alphas =
        cfg.alphas.empty() ? equally_spaced_alphas(21) : cfg.alphas;
    const auto t0 = std::chrono::steady_clock::now();

    const bool to_files = !cfg.out_prefix.empty();
    const std::string records_path =
        cfg.out_prefix + "_records." + cfg.format;
    const std::string summary_path =
        cfg.out_prefix + "_summary." + cfg.format;
    const std::string manifest_path = cfg.out_prefix + "_manifest.json";

    SweepResult res;
    std::vector<std::size_t> completed;
    std::vector<std::vector<TrialRecord>> buckets(alphas.size());

    if (resume) {
        if (!to_files) throw domain_error("run_sweep: resume needs out_prefix");
        if (cfg.format != "csv")
            throw domain_error("run_sweep: resume supports csv format");
        const auto manifest = nlohmann::json::parse(read_file(manifest_path));
        if (manifest["fingerprint"].get<std::string>() !=
            config_fingerprint(cfg, alphas))
            throw domain_error("run_sweep: manifest does not match config");
        const auto prior = records_from_csv(read_file(records_path));
        completed =
            manifest["completed_buckets"].get<std::vector<std::size_t>>();
        std::size_t cursor = 0;
        for (std::size_t ai : completed) {
            if (cursor + cfg.trials > prior.size())
                throw domain_error("run_sweep: records file truncated");
            buckets[ai].assign(prior.begin() + cursor,
                               prior.begin() + cursor + cfg.trials);
            cursor += cfg.trials;
        }
    } else if (to_files) {
        if (cfg.format == "csv")
            write_file(records_path, std::string(kRecordsHeader) + "\n");
    }

    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        if (std::find(completed.begin(), completed.end(), ai) !=
            completed.end())
            continue;
        buckets[ai] = compute_bucket(cfg, alphas, ai);
        completed.push_back(ai);
        if (to_files && cfg.format == "csv") {
            std::string chunk;
            for (const TrialRecord& r : buckets[ai])
                chunk += record_to_line(r) + "\n";
            append_file(records_path, chunk);
            write_file(manifest_path, manifest_to_json(cfg, res, completed));
        }
    }

    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        res.summary.push_back(
            summarize_bucket(cfg.mode, alphas[ai], buckets[ai]));
        res.records.insert(res.records.end(), buckets[ai].begin(),
                           buckets[ai].end());
    }
    attach_references(cfg, alphas, res);
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();

    if (to_files) {
        if (cfg.format == "csv") {
            // Rewrite the records file in bucket order: identical whether or
            // not the run was resumed.
            write_file(records_path, records_to_csv(res.records));
            write_file(summary_path, summary_to_csv(res.summary));
        } else {
            write_file(records_path, records_to_json(res.records));
            write_file(summary_path, summary_to_json(res.summary));
        }
        write_file(manifest_path, manifest_to_json(cfg, res, completed));
    }
    return res;
}

ClosedFormTable closed_form_table(std::size_t n_max,
                                  const MomentTable& moments) {
    if (n_max < 1 || n_max > 500)
        throw size_limit_error("closed_form_table: need 1 <= n_max <= 500");

    ClosedFormTable table;
    if (!moments.zero_mean())
        throw domain_error("closed_form_table: moments must have mu_{1,0} = 0");
    const double mu11 = moments(1, 1).real();
    const double mu20 = std::abs(moments(2, 0));
    table.line_support_case = mu20 > 0.0 && std::abs(mu11 - mu20) <= 1e-12;

    AsymptoticParams ap;
    ap.moments = moments;

    for (std::size_t n = 1; n <= n_max; ++n) {
        ClosedFormRow row;
        row.n = n;
        row.ln_z2_all_ones =
            4.0 * std::lgamma(static_cast<double>(n) + 1.0);
        row.ln_zb2_sq_all_ones = zb2_sq_all_ones_log(n);
        row.ratio_all_ones =
            std::exp(0.5 * (row.ln_z2_all_ones - row.ln_zb2_sq_all_ones));
        row.ratio_all_ones_asym =
            asymptotic_value(AsymptoticKind::AllOnesRatio, n, ap);
        row.gap_all_ones = row.ratio_all_ones / row.ratio_all_ones_asym - 1.0;

        const double a = moments(2, 2).real();
        const double b = mu11 * mu11;
        if (table.line_support_case) {
            row.ln_ez2 = Psi_log(n, a, b, 3.0);
            row.ln_ezb2_sq = Psi_log(n, a, b, 2.0);
            row.ratio_asym =
                asymptotic_value(AsymptoticKind::LineSupportRatio, n, ap);
        } else {
            const double c = mu20 * mu20;
            if (!(mu20 < mu11))
                throw domain_error("closed_form_table: |mu_{2,0}| < mu_{1,1}");
            row.ln_ez2 = psi_log(n, a, b, 2.0, c);
            row.ln_ezb2_sq = psi_log(n, a, b, 1.0, c);
            row.ratio_asym =
                asymptotic_value(AsymptoticKind::ZeroMeanRatio, n, ap);
        }
        row.ratio = std::exp(0.5 * (row.ln_ez2 - row.ln_ezb2_sq));
        row.gap = row.ratio / row.ratio_asym - 1.0;
        table.rows.push_back(row);
    }
    return table;
}

std::string closed_form_table_to_csv(const ClosedFormTable& table) {
    std::string out =
        "n,ln_z2_all_ones,ln_zb2_sq_all_ones,ratio_all_ones,"
        "ratio_all_ones_asym,gap_all_ones,ln_ez2,ln_ezb2_sq,ratio,ratio_asym,"
        "gap\n";
    for (const ClosedFormRow& r : table.rows) {
        out += std::to_string(r.n) + "," + fmt(r.ln_z2_all_ones) + "," +
               fmt(r.ln_zb2_sq_all_ones) + "," + fmt(r.ratio_all_ones) + "," +
               fmt(r.ratio_all_ones_asym) + "," + fmt(r.gap_all_ones) + "," +
               fmt(r.ln_ez2) + "," + fmt(r.ln_ezb2_sq) + "," + fmt(r.ratio) +
               "," + fmt(r.ratio_asym) + "," + fmt(r.gap) + "\n";
    }
    return out;
}

std::string verify_report_to_json(const VerifyReport& report) {
    nlohmann::json arr = nlohmann::json::array();
    for (const VerifyCheck& c : report.checks)
        arr.push_back(nlohmann::json{{"name", c.name},
                                     {"tolerance", c.tolerance},
                                     {"measured", c.measured},
                                     {"pass", c.pass}});
    nlohmann::json j{{"all_pass", report.all_pass}, {"checks", arr}};
    return j.dump(2) + "\n";
}

} // namespace denfg
