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

#ifndef DENFG_HARNESS_HPP
#define DENFG_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "denfg/combinatorics.hpp"
#include "denfg/ensembles.hpp"
#include "denfg/spa.hpp"

namespace denfg {

enum class SweepMode { SpaSweep, CoverSweep };

/// Sweep driver configuration. Trials derive their random streams from
/// (seed, alpha index, trial index), so results are independent of thread
/// count.
struct SweepConfig {
    SweepMode mode = SweepMode::SpaSweep;
    std::size_t n = 4;
    std::vector<double> alphas;      // defaults to 21 equally spaced in [0, pi]
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    SpaConfig spa;
    std::size_t cover_samples = 0;   // ignored when cover_exhaustive
    bool cover_exhaustive = true;
    unsigned threads = 1;
    std::string out_prefix;          // empty: no files written
    std::string format = "csv";      // csv | json

    void validate() const;
};

std::vector<double> equally_spaced_alphas(std::size_t count);

/// Per-trial degeneracy label; None for modes without an SPA run.
enum class RecordClass { Rank1, Diagonal, Generic, None };

struct TrialRecord {
    double alpha = 0.0;
    std::size_t trial = 0;
    double z = 0.0;       // |perm(theta)|^2
    double zb = 0.0;      // Z_{B,SPA} or Z_{B,2} depending on mode
    double log_z = 0.0;
    double log_zb = 0.0;
    bool converged = false;
    RecordClass degeneracy = RecordClass::None;
    int iterations = 0;
};

struct SummaryRow {
    double alpha = 0.0;
    /// SPA mode: ln(E[Z]/E[Z_B]); cover mode: ln sqrt(E[Z^2]/E[Z_B^2]).
    double ln_ratio_of_means = 0.0;
    double ln_mean_ratio = 0.0;   // ln E[Z/Z_B]
    double mean_log_ratio = 0.0;  // E[ln(Z/Z_B)]
    double std_log_ratio = 0.0;
    double convergence_rate = 0.0;
    double frac_rank1 = 0.0;
    double frac_diagonal = 0.0;
    double frac_generic = 0.0;
};

/// Analytic overlay attached to an alpha bucket where a closed form or
/// brute-force expectation exists.
struct AlphaOverlay {
    double alpha = 0.0;
    double ln_sqrt_ratio = 0.0;
    std::string source;  // "closed_form" | "moment_bruteforce"
};

struct SweepResult {
    std::vector<TrialRecord> records;
    std::vector<SummaryRow> summary;
    std::vector<AlphaOverlay> overlays;          // cover mode
    std::optional<double> ref_line_squared;      // spa mode, alpha = 0 candidate
    std::optional<double> ref_line_unsquared;    // spa mode, alpha = pi candidate
    double wall_ms = 0.0;
};

SweepResult spa_sweep(const SweepConfig& config);
SweepResult cover_sweep(const SweepConfig& config);

/// Recomputes one summary row from its records (fixed iteration order);
/// the sweeps use exactly this function.
SummaryRow summarize_bucket(SweepMode mode, double alpha,
                            const std::vector<TrialRecord>& bucket);

/// Runs the configured sweep, writing records/summary/manifest under
/// config.out_prefix as it completes each alpha bucket. With `resume`, a
/// matching manifest is loaded and completed buckets are skipped; the final
/// outputs are identical to an uninterrupted run.
SweepResult run_sweep(const SweepConfig& config, bool resume = false);

// ---- serialization ----

std::string records_to_csv(const std::vector<TrialRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);
std::string records_to_json(const std::vector<TrialRecord>& records);
std::string summary_to_json(const std::vector<SummaryRow>& rows);
std::string manifest_to_json(const SweepConfig& config, const SweepResult& res,
                             const std::vector<std::size_t>& completed_buckets);
std::vector<TrialRecord> records_from_csv(const std::string& text);

const char* record_class_name(RecordClass c);

// ---- closed-form table ----

struct ClosedFormRow {
    std::size_t n = 0;
    double ln_z2_all_ones = 0.0;      // ln (n!)^4
    double ln_zb2_sq_all_ones = 0.0;
    double ratio_all_ones = 0.0;      // Z / Z_{B,2}
    double ratio_all_ones_asym = 0.0;
    double gap_all_ones = 0.0;        // relative gap exact vs asymptotic
    double ln_ez2 = 0.0;              // moment ensemble columns
    double ln_ezb2_sq = 0.0;
    double ratio = 0.0;               // sqrt(E[Z^2]/E[Z^2_{B,2}])
    double ratio_asym = 0.0;
    double gap = 0.0;
};

struct ClosedFormTable {
    bool line_support_case = false;
    std::vector<ClosedFormRow> rows;
};

/// Exact and asymptotic values side by side, n = 1..n_max (log columns for
/// the factorially large quantities). Uses the zero-mean closed forms, or
/// the line-support pair when mu11 = |mu20|.
ClosedFormTable closed_form_table(std::size_t n_max, const MomentTable& moments);

std::string closed_form_table_to_csv(const ClosedFormTable& table);

// ---- verification suites ----

struct VerifyCheck {
    std::string name;
    double tolerance = 0.0;
    double measured = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass = true;
};

/// Cross-module oracle suites; suite is "fast" or "full".
VerifyReport verify(const std::string& suite);

std::string verify_report_to_json(const VerifyReport& report);

} // namespace denfg

#endif
