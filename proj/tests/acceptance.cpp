// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the oracle-equivalence, double-cover, expectation,
// SPA-behavior, asymptotics and determinism gates at their stated
// tolerances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "denfg/combinatorics.hpp"
#include "denfg/covers.hpp"
#include "denfg/ensembles.hpp"
#include "denfg/factorgraph.hpp"
#include "denfg/harness.hpp"
#include "denfg/permanent.hpp"
#include "denfg/spa.hpp"

using namespace denfg;

namespace {

constexpr double kPi = 3.14159265358979323846;
int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %s (%s)\n", pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed,
                            double alpha = kPi) {
    EnsembleSpec es;
    es.alpha = alpha;
    es.n = n;
    es.seed = seed;
    es.count = 1;
    return sample_matrix(es, 0);
}

double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
}

struct MeanAccumulator {
    double sum = 0.0, sumsq = 0.0;
    std::size_t count = 0;

    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++count;
    }
    double mean() const { return sum / static_cast<double>(count); }
    double std_error() const {
        const double n = static_cast<double>(count);
        const double var = (sumsq / n - mean() * mean()) * n / (n - 1.0);
        return std::sqrt(var / n);
    }
    double sigmas_from(double target) const {
        return std::abs(mean() - target) / std_error();
    }
};

// ---- criterion 1: oracle equivalence ----

void criterion_oracles() {
    double worst = 0.0;
    std::size_t trials = 0;
    for (std::size_t n = 1; n <= 7; ++n)
        for (std::uint64_t t = 0; t < 143 && trials < 1000; ++t, ++trials) {
            const auto m = random_matrix(n, 10000 * n + t);
            worst = std::max(worst, rel_err(perm_ryser(m), perm_naive(m)));
        }
    report("1a permanents: Ryser vs permutation sum, 1000 matrices",
           worst < 1e-10, "max rel err " + std::to_string(worst));

    double worst_sq = 0.0, worst_eps = 0.0;
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::uint64_t t = 0; t < 17; ++t) {
            const auto theta = random_matrix(n, 20000 * n + t);
            worst_sq = std::max(
                worst_sq,
                rel_err(partition_sum_denfg_bruteforce(build_denfg(theta)),
                        std::norm(perm_naive(theta))));
            const auto eps = random_matrix(n, 30000 * n + t).abs2();
            worst_eps = std::max(
                worst_eps, rel_err(partition_sum_denfg_bruteforce(build_denfg(
                                       ComplexMatrix::zero(n), eps)),
                                   perm_naive(eps)));
        }
    report("1b double-edge partition sum = |perm|^2", worst_sq < 1e-11,
           "max rel err " + std::to_string(worst_sq));
    report("1c double-edge partition sum at theta=0 = perm(eps)",
           worst_eps < 1e-11, "max rel err " + std::to_string(worst_eps));
}

// ---- criterion 2: double-cover identities ----

void criterion_covers() {
    {
        const double v2 = zb2_denfg_exact(ComplexMatrix::all_ones(2));
        report("2a degree-2 value of the 2x2 all-ones matrix squares to 10",
               rel_err(v2 * v2, 10.0) < 1e-9,
               "value " + std::to_string(v2 * v2));
        double worst = 0.0;
        for (std::size_t n = 1; n <= 4; ++n) {
            const double v = zb2_denfg_exact(ComplexMatrix::all_ones(n), 8);
            worst = std::max(worst, rel_err(v * v, zb2_sq_all_ones(n)));
        }
        report("2a all-ones closed form vs cover enumeration, n = 1..4",
               worst < 1e-9, "max rel err " + std::to_string(worst));
    }
    {
        double worst = 0.0;
        std::size_t done = 0;
        const std::size_t per_n[5] = {0, 30, 30, 30, 10};
        for (std::size_t n = 1; n <= 4; ++n)
            for (std::uint64_t t = 0; t < per_n[n]; ++t, ++done) {
                const auto m = random_matrix(n, 40000 * n + t);
                worst = std::max(worst, rel_err(permB2_nfg_cyclesum(m),
                                                cover_average_perm_lift(m, 8)));
            }
        report("2b cycle sum = cover average of perm(lift), 100 matrices",
               worst < 1e-10 && done == 100,
               "max rel err " + std::to_string(worst));
    }
    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 3; ++n) {
            const auto m = random_matrix(n, 50000 + n);
            const std::uint64_t covers = std::uint64_t{1} << (n * n);
            for (std::uint64_t mask = 0; mask < covers; ++mask) {
                const auto cover = CoverAssignment::from_mask(n, mask);
                worst = std::max(worst,
                                 rel_err(z_cover_transformed(m, cover),
                                         perm_ryser(lift_matrix(m, cover))));
            }
        }
        report("2c transformed covers preserve Z for all covers, n <= 3",
               worst < 1e-10, "max rel err " + std::to_string(worst));
    }
}

// ---- criterion 3: expectation identities, Monte Carlo ----

void criterion_expectations() {
    {
        EnsembleSpec es;
        es.alpha = kPi;
        es.n = 2;
        es.seed = 60001;
        es.count = 1000000;
        MeanAccumulator z2, zb2;
        for (std::size_t t = 0; t < es.count; ++t) {
            const auto theta = sample_matrix(es, t);
            const double z = perm_abs2(theta);
            z2.add(z * z);
            const double v = zb2_denfg_exact(theta);
            zb2.add(v * v);
        }
        report("3a n=2 Gaussian: mean Z^2 within 3 sigma of 12",
               z2.sigmas_from(12.0) < 3.0,
               "mean " + std::to_string(z2.mean()) + ", " +
                   std::to_string(z2.sigmas_from(12.0)) + " sigma");
        report("3a n=2 Gaussian: mean Z_B2^2 within 3 sigma of 10",
               zb2.sigmas_from(10.0) < 3.0,
               "mean " + std::to_string(zb2.mean()) + ", " +
                   std::to_string(zb2.sigmas_from(10.0)) + " sigma");
    }
    for (double alpha : {kPi / 2, kPi}) {
        const double predicted =
            expected_z2_bruteforce(3, MomentTable::from_alpha(alpha));
        EnsembleSpec es;
        es.alpha = alpha;
        es.n = 3;
        es.seed = 70000 + static_cast<std::uint64_t>(alpha * 1e4);
        es.count = 400000;
        MeanAccumulator z2;
        for (std::size_t t = 0; t < es.count; ++t) {
            const double z = perm_abs2(sample_matrix(es, t));
            z2.add(z * z);
        }
        report("3b n=3 alpha=" + std::to_string(alpha) +
                   ": mean Z^2 within 3 sigma of the moment oracle",
               z2.sigmas_from(predicted) < 3.0,
               "mean " + std::to_string(z2.mean()) + " vs " +
                   std::to_string(predicted) + ", " +
                   std::to_string(z2.sigmas_from(predicted)) + " sigma");
    }
}

// ---- criterion 4: SPA regimes at n = 10 ----

void criterion_spa() {
    const std::size_t n = 10, trials = 200;

    SweepConfig cfg;
    cfg.mode = SweepMode::SpaSweep;
    cfg.n = n;
    cfg.alphas = {0.0, kPi};
    cfg.trials = trials;
    cfg.seed = 424242;
    cfg.threads = 8;
    const SweepResult sweep = spa_sweep(cfg);

    // alpha = 0 bucket.
    {
        std::size_t converged = 0, rank1 = 0;
        double worst_ratio = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const TrialRecord& rec = sweep.records[t];
            if (!rec.converged) continue;
            ++converged;
            if (rec.degeneracy != RecordClass::Rank1) continue;
            ++rank1;
        }
        report("4a alpha=0: >= 95% of converged runs are rank-1",
               converged > 0 && rank1 >= 95 * converged / 100,
               std::to_string(rank1) + "/" + std::to_string(converged) +
                   " converged runs rank-1");

        // Rank-1 fixed points square the scalar value; recompute the same
        // trials through both paths.
        EnsembleSpec es;
        es.alpha = 0.0;
        es.n = n;
        es.seed = derive_key(cfg.seed, 0x6d617472, 0);
        es.count = trials;
        std::size_t checked = 0;
        for (std::size_t t = 0; t < trials && checked < 50; ++t) {
            const TrialRecord& rec = sweep.records[t];
            if (!rec.converged || rec.degeneracy != RecordClass::Rank1)
                continue;
            const auto theta = sample_matrix(es, t);
            SpaConfig sc = cfg.spa;
            sc.seed = derive_key(cfg.seed, 0x73706121, 0, t);
            const ScalarSpaResult scalar = spa_nfg_scalar(theta, sc);
            if (!scalar.converged) continue;
            worst_ratio = std::max(
                worst_ratio,
                std::abs(rec.zb / std::norm(scalar.perm_b) - 1.0));
            ++checked;
        }
        report("4a alpha=0: rank-1 value = |scalar value|^2 within 1e-6",
               checked > 0 && worst_ratio < 1e-6,
               "max rel err " + std::to_string(worst_ratio) + " over " +
                   std::to_string(checked) + " runs");
    }

    // alpha = pi bucket.
    {
        const SummaryRow& row_pi = sweep.summary[1];
        const bool modal = row_pi.frac_diagonal > row_pi.frac_rank1 &&
                           row_pi.frac_diagonal > row_pi.frac_generic;
        report("4b alpha=pi: diagonal is the modal degeneracy class", modal,
               "fractions rank1/diagonal/generic = " +
                   std::to_string(row_pi.frac_rank1) + "/" +
                   std::to_string(row_pi.frac_diagonal) + "/" +
                   std::to_string(row_pi.frac_generic));

        EnsembleSpec es;
        es.alpha = kPi;
        es.n = n;
        es.seed = derive_key(cfg.seed, 0x6d617472, 1);
        es.count = trials;
        double worst = 0.0;
        std::size_t checked = 0;
        for (std::size_t t = 0; t < trials && checked < 25; ++t) {
            const TrialRecord& rec = sweep.records[trials + t];
            if (!rec.converged || rec.degeneracy != RecordClass::Diagonal)
                continue;
            const auto theta = sample_matrix(es, t);
            SpaConfig sc = cfg.spa;
            sc.seed = derive_key(cfg.seed, 0x73706121, 1, t);
            const SpaResult modsq = run_spa(
                build_denfg(ComplexMatrix::zero(n), theta.abs2()), sc);
            if (!modsq.converged) continue;
            worst = std::max(worst, std::abs(rec.zb / modsq.zb_spa - 1.0));
            ++checked;
        }
        report("4b alpha=pi: diagonal runs approximate perm(|theta|^2) within "
               "1e-3",
               checked > 0 && worst < 1e-3,
               "max rel err " + std::to_string(worst) + " over " +
                   std::to_string(checked) + " runs");

        report("4c log-ratio spread grows from alpha=0 to alpha=pi",
               row_pi.std_log_ratio > sweep.summary[0].std_log_ratio,
               "std " + std::to_string(sweep.summary[0].std_log_ratio) +
                   " -> " + std::to_string(row_pi.std_log_ratio));
    }

    // n = 1 exactness across the angle range.
    {
        double worst = 0.0;
        for (double alpha : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi})
            for (std::uint64_t t = 0; t < 4; ++t) {
                const auto theta = random_matrix(1, 80000 + t, alpha);
                SpaConfig sc;
                sc.seed = 17 + t;
                const SpaResult res = run_spa(build_denfg(theta), sc);
                worst = std::max(
                    worst, std::abs(res.zb_spa / perm_abs2(theta) - 1.0));
            }
        report("4d n=1: SPA value equals Z exactly for all alphas",
               worst < 1e-8, "max rel err " + std::to_string(worst));
    }
}

// ---- criterion 5: asymptotics ----

void criterion_asymptotics() {
    AsymptoticParams ap;
    {
        double prev = 1e9;
        bool decreasing = true;
        double final_gap = 0.0;
        for (std::size_t n : {25, 50, 100}) {
            const double exact = std::exp(
                0.5 * (4.0 * std::lgamma(n + 1.0) - zb2_sq_all_ones_log(n)));
            const double gap = std::abs(
                exact / asymptotic_value(AsymptoticKind::AllOnesRatio, n, ap) -
                1.0);
            decreasing = decreasing && gap < prev;
            prev = gap;
            final_gap = gap;
        }
        report("5a all-ones ratio vs sqrt(pi n / e): 3% at n=100, decreasing",
               final_gap < 0.03 && decreasing,
               "gap at n=100: " + std::to_string(final_gap));
    }
    {
        ap.moments = MomentTable::gaussian();
        const double exact = std::exp(
            0.5 * (psi_log(60, 2, 1, 2, 0) - psi_log(60, 2, 1, 1, 0)));
        const double gap = std::abs(
            exact / asymptotic_value(AsymptoticKind::ZeroMeanRatio, 60, ap) -
            1.0);
        report("5b Gaussian ratio vs sqrt((n+1)/e) at n=60", gap < 0.03,
               "gap " + std::to_string(gap));
    }
    {
        const double abm[][3] = {{1, 1, 0.5}, {2, 1, 1}, {2, 1, 2}};
        double worst = 0.0;
        for (const auto& p : abm)
            worst = std::max(
                worst, std::abs(std::exp(Psi_log(40, p[0], p[1], p[2]) -
                                         psi_leading_log(40, p[0], p[1], p[2])) -
                                1.0));
        report("5c leading term of Psi within 5% at n=40", worst < 0.05,
               "max gap " + std::to_string(worst));
    }
}

// ---- criterion 6: determinism across thread counts ----

void criterion_determinism() {
    {
        SweepConfig cfg;
        cfg.mode = SweepMode::SpaSweep;
        cfg.n = 4;
        cfg.alphas = {0.0, kPi / 2, kPi};
        cfg.trials = 8;
        cfg.seed = 31415;
        cfg.threads = 1;
        const auto res1 = spa_sweep(cfg);
        cfg.threads = 8;
        const auto res8 = spa_sweep(cfg);
        const bool same =
            records_to_csv(res1.records) == records_to_csv(res8.records) &&
            summary_to_csv(res1.summary) == summary_to_csv(res8.summary);
        report("6a spa-sweep CSV identical for 1 and 8 threads", same,
               same ? "byte-identical" : "outputs differ");
    }
    {
        SweepConfig cfg;
        cfg.mode = SweepMode::CoverSweep;
        cfg.n = 3;
        cfg.alphas = {0.0, kPi};
        cfg.trials = 6;
        cfg.seed = 2718;
        cfg.cover_exhaustive = true;
        cfg.threads = 1;
        const auto res1 = cover_sweep(cfg);
        cfg.threads = 8;
        const auto res8 = cover_sweep(cfg);
        const bool same =
            records_to_csv(res1.records) == records_to_csv(res8.records) &&
            summary_to_csv(res1.summary) == summary_to_csv(res8.summary);
        report("6b cover-sweep CSV identical for 1 and 8 threads", same,
               same ? "byte-identical" : "outputs differ");
    }
}

template <typename Fn>
void timed(const char* label, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    std::printf("# %s finished in %.1f s\n", label, secs);
    std::fflush(stdout);
}

} // namespace

int main() {
    timed("criterion 1 (oracle equivalence)", criterion_oracles);
    timed("criterion 2 (double-cover identities)", criterion_covers);
    timed("criterion 3 (expectation identities)", criterion_expectations);
    timed("criterion 4 (SPA regimes)", criterion_spa);
    timed("criterion 5 (asymptotics)", criterion_asymptotics);
    timed("criterion 6 (determinism)", criterion_determinism);

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion checks FAILED\n", g_failures);
    return 1;
}
