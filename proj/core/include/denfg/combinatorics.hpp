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

#ifndef DENFG_COMBINATORICS_HPP
#define DENFG_COMBINATORICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "denfg/ensembles.hpp"

namespace denfg {

/// Cycle type of a permutation: counts[k-1] = number of length-k cycles,
/// sum of k*counts[k-1] = n.
struct CycleType {
    std::vector<std::size_t> counts;

    std::size_t n() const;
    /// Number of cycles of length >= 2.
    std::size_t nontrivial() const;
    /// Number of permutations with this cycle type: n! / prod(k^c_k * c_k!).
    std::uint64_t permutation_count() const;
};

/// Cycle decomposition of a 0-based permutation; throws on non-bijections.
CycleType cycle_counts(std::span<const std::size_t> sigma);

/// Calls fn for every cycle type of S_n (every partition of n).
void for_each_cycle_type(std::size_t n,
                         const std::function<void(const CycleType&)>& fn);

/// Indeterminate assignment for the symmetric-group cycle index
/// Z_n = (1/n!) sum_sigma prod_k z_k^{c_k(sigma)}.
struct CycleIndexSpec {
    std::size_t n = 0;
    std::vector<double> z;  // z[k-1] for k in [n]

    double zk(std::size_t k) const { return z.at(k - 1); }
};

/// Z_n via the generating-function recurrence n*Z_n = sum_k z_k Z_{n-k},
/// O(n^2); certified against explicit S_n enumeration. n <= 500.
double cycle_index_eval(const CycleIndexSpec& spec);

/// Z_n by explicit summation over S_n; enumeration oracle, n <= 8.
double cycle_index_eval_enumerated(const CycleIndexSpec& spec);

/// Scaled series Y_k = Z_k / scale^k for k = 0..n, same recurrence. Keeps
/// intermediate values polynomially bounded for geometric z assignments.
std::vector<double> cycle_index_series_scaled(
    std::size_t n, const std::function<double(std::size_t)>& zk, double scale);

/// psi_n(a,b,m,c) = (n!)^2 Z_n with z_1 = a, z_k = m b^k + c^k for k >= 2;
/// Psi_n(a,b,m) is the c = 0 case. Closed forms for expected squared
/// partition sums of the double-edge permanent graph.
double psi(std::size_t n, double a, double b, double m, double c);
double Psi(std::size_t n, double a, double b, double m);

/// ln psi_n / ln Psi_n, valid up to n ~ 500; -inf when the value is 0.
double psi_log(std::size_t n, double a, double b, double m, double c);
double Psi_log(std::size_t n, double a, double b, double m);

/// Squared degree-2 Bethe partition sum of the all-ones matrix:
///   sum_{k=0..n} C(n,k)^2 Psi_k(0,1,1/2) Psi_{n-k}^2(1,1,1/2).
/// The companion exact value is Z^2 = (n!)^4. Integer-valued; checked
/// against the exact rational path for n <= 12.
double zb2_sq_all_ones(std::size_t n);
double zb2_sq_all_ones_log(std::size_t n);

struct ExpectationPair {
    double ez2 = 0.0;      // E[Z^2]
    double ezb2_sq = 0.0;  // E[Z^2_{B,2}]
};

/// Closed-form expectations for zero-mean i.i.d. entries
/// (mu10 = 0, |mu20| < mu11, mu22 finite):
///   E[Z^2]       = psi_n(mu22, mu11^2, 2, |mu20|^2)
///   E[Z^2_{B,2}] = psi_n(mu22, mu11^2, 1, |mu20|^2).
ExpectationPair zero_mean_expectations(std::size_t n, const MomentTable& m);

/// Same pair for the boundary case mu11 = |mu20| > 0 (entries supported on
/// a line through the origin): Psi_n(mu22, mu11^2, 3) and
/// Psi_n(mu22, mu11^2, 2).
ExpectationPair line_support_expectations(std::size_t n, const MomentTable& m);

/// E[Z^2] by direct moment expansion over S_n^4; valid for arbitrary
/// (including nonzero) mean. n <= 4.
double expected_z2_bruteforce(std::size_t n, const MomentTable& m);

/// E[Z^2_{B,2}] by enumerating covers and pairs of perfect matchings of
/// each lifted graph; arbitrary mean. n <= 3.
double expected_zb2_sq_bruteforce(std::size_t n, const MomentTable& m);

enum class AsymptoticKind {
    PsiLeading,       // Psi_n(a,b,m) ~ (n!)^2 b^n e^{a/b-m} n^{m-1}/Gamma(m)
    AllOnesRatio,     // Z/Z_{B,2} ~ sqrt(pi n / e) for theta = 1_n
    ZeroMeanRatio,    // sqrt(E[Z^2]/E[Z^2_{B,2}]) ~ sqrt((n+1+C)/e)
    LineSupportRatio, // mu11 = |mu20| boundary case
};

struct AsymptoticParams {
    double a = 0.0, b = 1.0, m = 1.0;  // PsiLeading
    MomentTable moments;               // ZeroMeanRatio / LineSupportRatio
};

/// n -> infinity approximations; not exact values.
double asymptotic_value(AsymptoticKind kind, std::size_t n,
                        const AsymptoticParams& params);

/// ln of the PsiLeading approximation (usable beyond double overflow).
double psi_leading_log(std::size_t n, double a, double b, double m);

/// The moment constant in the zero-mean ratio asymptotics:
///   C = -(mu22 - 2 mu11^2 - |mu20|^2)/mu11^2 - |mu20|^2/(mu11^2 - |mu20|^2).
double zero_mean_ratio_constant(const MomentTable& m);

} // namespace denfg

#endif
