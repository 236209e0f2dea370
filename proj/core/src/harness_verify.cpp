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

#include <cmath>

#include "denfg/covers.hpp"
#include "denfg/errors.hpp"
#include "denfg/harness.hpp"
#include "denfg/permanent.hpp"

namespace denfg {

namespace {

constexpr double kPi = 3.14159265358979323846;

ComplexMatrix random_gaussian_matrix(std::size_t n, std::uint64_t seed) {
    EnsembleSpec es;
    es.alpha = kPi;
    es.n = n;
    es.seed = seed;
    es.count = 1;
    return sample_matrix(es, 0);
}

double rel_err(double got, double want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
}

double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
}

struct Suite {
    VerifyReport report;

    void check(const std::string& name, double measured, double tolerance) {
        const bool pass = measured < tolerance;
        report.checks.push_back({name, tolerance, measured, pass});
        report.all_pass = report.all_pass && pass;
    }
};

void fast_checks(Suite& s) {
    // Permanent oracle agreement on random complex matrices.
    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 6; ++n)
            for (std::size_t t = 0; t < 34; ++t) {
                const auto m = random_gaussian_matrix(n, 100 * n + t);
                worst = std::max(worst, rel_err(perm_ryser(m), perm_naive(m)));
            }
        s.check("permanent: inclusion-exclusion vs permutation sum", worst,
                1e-10);
    }
    // Partition-sum identities of the two permanent graphs.
    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 4; ++n)
            for (std::size_t t = 0; t < 8; ++t) {
                const auto m = random_gaussian_matrix(n, 200 * n + t);
                worst = std::max(
                    worst, rel_err(partition_sum_nfg_bruteforce(m), perm_naive(m)));
            }
        s.check("single-edge graph: Z = perm", worst, 1e-12);
    }
    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 3; ++n)
            for (std::size_t t = 0; t < 12; ++t) {
                const auto m = random_gaussian_matrix(n, 300 * n + t);
                const double z = partition_sum_denfg_bruteforce(build_denfg(m));
                worst = std::max(worst, rel_err(z, perm_abs2(m)));
            }
        s.check("double-edge graph: Z = |perm|^2", worst, 1e-11);
    }
    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 3; ++n)
            for (std::size_t t = 0; t < 12; ++t) {
                const auto eps = random_gaussian_matrix(n, 400 * n + t).abs2();
                const double z = partition_sum_denfg_bruteforce(
                    build_denfg(ComplexMatrix::zero(n), eps));
                worst =
                    std::max(worst, rel_err(z, perm_naive(eps).real()));
            }
        s.check("double-edge graph: Z(0, eps) = perm(eps)", worst, 1e-11);
    }
    // Ensemble moments: quadrature vs closed forms.
    {
        double worst = 0.0;
        const int supported[][2] = {{0, 0}, {1, 0}, {1, 1}, {2, 0},
                                    {2, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
        for (int k = 0; k <= 10; ++k) {
            const double alpha = kPi * k / 10.0;
            for (const auto& pq : supported)
                worst = std::max(
                    worst, std::abs(moment_quadrature(pq[0], pq[1], alpha) -
                                    moment_closed_form(pq[0], pq[1], alpha)));
        }
        s.check("ensemble moments: quadrature vs closed form", worst, 1e-8);
    }
    // Cycle index: recurrence vs explicit enumeration.
    {
        double worst = 0.0;
        Rng rng(17);
        for (std::size_t n = 1; n <= 6; ++n)
            for (int t = 0; t < 5; ++t) {
                CycleIndexSpec spec;
                spec.n = n;
                for (std::size_t k = 0; k < n; ++k)
                    spec.z.push_back(rng.uniform(-2.0, 2.0));
                worst = std::max(worst,
                                 rel_err(cycle_index_eval(spec),
                                         cycle_index_eval_enumerated(spec)));
            }
        s.check("cycle index: recurrence vs enumeration", worst, 1e-12);
    }
    // psi reduces to Psi at c = 0.
    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 50; ++n)
            worst = std::max(
                worst, rel_err(psi(n, 2.0, 1.0, 2.0, 0.0), Psi(n, 2.0, 1.0, 2.0)));
        s.check("psi(a,b,m,0) = Psi(a,b,m)", worst, 1e-12);
    }
    // Small double-cover identities.
    {
        const double v = zb2_denfg_exact(ComplexMatrix::all_ones(2));
        s.check("all-ones n=2: cover enumeration gives sqrt(10)",
                rel_err(v * v, 10.0), 1e-10);
    }
    {
        double worst = 0.0;
        for (std::uint64_t mask = 0; mask < 16; ++mask) {
            const auto cover = CoverAssignment::from_mask(2, mask);
            const auto m = random_gaussian_matrix(2, 500 + mask);
            worst = std::max(worst, rel_err(z_cover_transformed(m, cover),
                                            perm_ryser(lift_matrix(m, cover))));
        }
        s.check("transformed cover evaluation preserves Z (n=2)", worst, 1e-10);
    }
    // n=1 exactness of the SPA value.
    {
        const ComplexMatrix theta{{cplx{1.3, -0.7}}};
        SpaConfig sc;
        sc.seed = 11;
        const SpaResult r = run_spa(build_denfg(theta), sc);
        s.check("SPA n=1 exactness", rel_err(r.zb_spa, std::norm(theta(0, 0))),
                1e-9);
    }
}

void full_checks(Suite& s) {
    // All-ones closed form against cover enumeration.
    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 4; ++n) {
            const double enumd = zb2_denfg_exact(ComplexMatrix::all_ones(n), 4);
            worst = std::max(worst,
                             rel_err(enumd * enumd, zb2_sq_all_ones(n)));
        }
        s.check("all-ones closed form vs cover enumeration (n<=4)", worst,
                1e-9);
    }
    // Cycle sum equals the cover average of lifted permanents.
    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 3; ++n)
            for (std::size_t t = 0; t < 6; ++t) {
                const auto m = random_gaussian_matrix(n, 600 * n + t);
                worst = std::max(worst, rel_err(permB2_nfg_cyclesum(m),
                                                cover_average_perm_lift(m)));
            }
        const auto m4 = random_gaussian_matrix(4, 777);
        worst = std::max(worst, rel_err(permB2_nfg_cyclesum(m4),
                                        cover_average_perm_lift(m4, 4)));
        s.check("cycle sum vs cover average of perm(lift)", worst, 1e-10);
    }
    // Transform preservation across all covers at n=3.
    {
        double worst = 0.0;
        const auto m = random_gaussian_matrix(3, 808);
        for (std::uint64_t mask = 0; mask < 512; ++mask) {
            const auto cover = CoverAssignment::from_mask(3, mask);
            worst = std::max(worst, rel_err(z_cover_transformed(m, cover),
                                            perm_ryser(lift_matrix(m, cover))));
        }
        s.check("transformed cover evaluation preserves Z (n=3, all covers)",
                worst, 1e-10);
    }
    // Moment brute force against the zero-mean closed forms (Gaussian).
    {
        const MomentTable g = MomentTable::gaussian();
        double worst = 0.0;
        for (std::size_t n = 1; n <= 4; ++n)
            worst = std::max(worst, rel_err(expected_z2_bruteforce(n, g),
                                            zero_mean_expectations(n, g).ez2));
        for (std::size_t n = 1; n <= 3; ++n)
            worst = std::max(worst,
                             rel_err(expected_zb2_sq_bruteforce(n, g),
                                     zero_mean_expectations(n, g).ezb2_sq));
        s.check("moment brute force vs closed forms", worst, 1e-10);
    }
    // All-ones moments reproduce the all-ones closed form.
    {
        const MomentTable ones = MomentTable::all_ones();
        double worst = 0.0;
        for (std::size_t n = 1; n <= 3; ++n)
            worst = std::max(worst, rel_err(expected_zb2_sq_bruteforce(n, ones),
                                            zb2_sq_all_ones(n)));
        s.check("deterministic moments vs all-ones closed form", worst, 1e-10);
    }
    // Asymptotic gates.
    {
        AsymptoticParams ap;
        const double exact = std::exp(
            0.5 * (4.0 * std::lgamma(101.0) - zb2_sq_all_ones_log(100)));
        const double asym = asymptotic_value(AsymptoticKind::AllOnesRatio, 100, ap);
        s.check("all-ones ratio asymptotics at n=100",
                std::abs(exact / asym - 1.0), 0.03);
    }
    {
        const double exact = std::exp(0.5 * (psi_log(60, 2, 1, 2, 0) -
                                             psi_log(60, 2, 1, 1, 0)));
        AsymptoticParams ap;
        ap.moments = MomentTable::gaussian();
        const double asym =
            asymptotic_value(AsymptoticKind::ZeroMeanRatio, 60, ap);
        s.check("zero-mean ratio asymptotics at n=60 (Gaussian)",
                std::abs(exact / asym - 1.0), 0.03);
    }
    {
        double worst = 0.0;
        const double abm[][3] = {{1, 1, 0.5}, {2, 1, 1}, {2, 1, 2}};
        for (const auto& p : abm) {
            const double exact = Psi_log(40, p[0], p[1], p[2]);
            const double lead = psi_leading_log(40, p[0], p[1], p[2]);
            worst = std::max(worst, std::abs(std::exp(exact - lead) - 1.0));
        }
        s.check("leading-term approximation at n=40", worst, 0.05);
    }
    // Scalar SPA against the rank-1-initialized double-edge run.
    {
        const auto m = random_gaussian_matrix(4, 909).abs2();
        SpaConfig sc;
        sc.seed = 3;
        const ScalarSpaResult scalar = spa_nfg_scalar(m, sc);
        sc.init_mode = InitMode::Rank1;
        const SpaResult de = run_spa(build_denfg(m), sc);
        s.check("rank-1 double-edge run matches squared scalar value",
                rel_err(de.zb_spa, std::norm(scalar.perm_b)), 1e-6);
    }
}

} // namespace

VerifyReport verify(const std::string& suite) {
    if (suite != "fast" && suite != "full")
        throw domain_error("verify: suite must be 'fast' or 'full'");
    Suite s;
    fast_checks(s);
    if (suite == "full") full_checks(s);
    return s.report;
}

} // namespace denfg
