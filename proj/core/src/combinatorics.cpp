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

#include "denfg/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "denfg/combinatorics_exact.hpp"
#include "denfg/errors.hpp"

namespace denfg {

namespace {

constexpr double kE = 2.71828182845904523536;
constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& xs) {
    double mx = kNegInf;
    for (double x : xs) mx = std::max(mx, x);
    if (mx == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : xs)
        if (x != kNegInf) s += std::exp(x - mx);
    return mx + std::log(s);
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do {
        out.push_back(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

} // namespace

std::size_t CycleType::n() const {
    std::size_t total = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) total += (k + 1) * counts[k];
    return total;
}

std::size_t CycleType::nontrivial() const {
    std::size_t c = 0;
    for (std::size_t k = 1; k < counts.size(); ++k) c += counts[k];
    return c;
}

std::uint64_t CycleType::permutation_count() const {
    // n! / prod(k^{c_k} c_k!), exact in 64-bit for n <= 20.
    const std::size_t nn = n();
    std::uint64_t num = 1;
    for (std::size_t v = 2; v <= nn; ++v) num *= v;
    std::uint64_t den = 1;
    for (std::size_t k = 1; k <= counts.size(); ++k) {
        for (std::size_t r = 0; r < counts[k - 1]; ++r) den *= k;
        for (std::size_t r = 2; r <= counts[k - 1]; ++r) den *= r;
    }
    return num / den;
}

CycleType cycle_counts(std::span<const std::size_t> sigma) {
    const std::size_t n = sigma.size();
    std::vector<bool> hit(n, false);
    for (std::size_t v : sigma) {
        if (v >= n || hit[v]) throw domain_error("cycle_counts: not a bijection");
        hit[v] = true;
    }

    CycleType type;
    type.counts.assign(n, 0);
    std::vector<bool> seen(n, false);
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::size_t len = 0;
        for (std::size_t v = start; !seen[v]; v = sigma[v]) {
            seen[v] = true;
            ++len;
        }
        ++type.counts[len - 1];
    }
    return type;
}

void for_each_cycle_type(std::size_t n,
                         const std::function<void(const CycleType&)>& fn) {
    CycleType type;
    type.counts.assign(n, 0);
    // Partition n into parts <= maxpart, largest part first.
    std::function<void(std::size_t, std::size_t)> rec =
        [&](std::size_t rest, std::size_t maxpart) {
            if (rest == 0) {
                fn(type);
                return;
            }
            for (std::size_t k = std::min(rest, maxpart); k >= 1; --k) {
                ++type.counts[k - 1];
                rec(rest - k, k);
                --type.counts[k - 1];
            }
        };
    rec(n, n);
}

double cycle_index_eval(const CycleIndexSpec& spec) {
    if (spec.n > 500) throw size_limit_error("cycle_index_eval: n > 500");
    if (spec.z.size() < spec.n)
        throw domain_error("cycle_index_eval: z shorter than n");

    std::vector<double> zvals(spec.n + 1, 0.0);
    for (std::size_t k = 1; k <= spec.n; ++k) zvals[k] = spec.zk(k);

    std::vector<double> zn(spec.n + 1, 0.0);
    zn[0] = 1.0;
    for (std::size_t m = 1; m <= spec.n; ++m) {
        double acc = 0.0;
        for (std::size_t k = 1; k <= m; ++k) acc += zvals[k] * zn[m - k];
        zn[m] = acc / static_cast<double>(m);
        if (!std::isfinite(zn[m]))
            throw numeric_error(
                "cycle_index_eval overflowed; use the scaled series");
    }
    return zn[spec.n];
}

double cycle_index_eval_enumerated(const CycleIndexSpec& spec) {
    if (spec.n > 8) throw size_limit_error("cycle_index_eval_enumerated: n > 8");
    if (spec.n == 0) return 1.0;
    double sum = 0.0;
    for (const auto& sigma : all_permutations(spec.n)) {
        const CycleType type = cycle_counts(sigma);
        double prod = 1.0;
        for (std::size_t k = 1; k <= spec.n; ++k)
            for (std::size_t r = 0; r < type.counts[k - 1]; ++r)
                prod *= spec.zk(k);
        sum += prod;
    }
    double fact = 1.0;
    for (std::size_t v = 2; v <= spec.n; ++v) fact *= static_cast<double>(v);
    return sum / fact;
}

std::vector<double> cycle_index_series_scaled(
    std::size_t n, const std::function<double(std::size_t)>& zk, double scale) {
    if (scale <= 0.0) throw domain_error("cycle_index_series_scaled: scale <= 0");
    std::vector<double> zs(n + 1, 0.0);
    double sk = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        sk *= scale;
        zs[k] = zk(k) / sk;
    }
    std::vector<double> y(n + 1, 0.0);
    y[0] = 1.0;
    for (std::size_t m = 1; m <= n; ++m) {
        double acc = 0.0;
        for (std::size_t k = 1; k <= m; ++k) acc += zs[k] * y[m - k];
        y[m] = acc / static_cast<double>(m);
    }
    return y;
}

namespace {

void check_psi_args(double a, double b, double m, double c) {
    if (a < 0.0 || b < 0.0 || m < 0.0 || c < 0.0)
        throw domain_error("psi: arguments must be non-negative");
}

double psi_zk(std::size_t k, double a, double b, double m, double c) {
    if (k == 1) return a;
    return m * std::pow(b, static_cast<double>(k)) +
           std::pow(c, static_cast<double>(k));
}

} // namespace

double psi_log(std::size_t n, double a, double b, double m, double c) {
    check_psi_args(a, b, m, c);
    if (n == 0) return 0.0;  // (0!)^2 * Z_0 = 1
    double s = std::max(b, c);
    if (s == 0.0) s = 1.0;
    const auto y = cycle_index_series_scaled(
        n, [&](std::size_t k) { return psi_zk(k, a, b, m, c); }, s);
    if (y[n] == 0.0) return kNegInf;
    return 2.0 * std::lgamma(static_cast<double>(n) + 1.0) +
           static_cast<double>(n) * std::log(s) + std::log(y[n]);
}

double Psi_log(std::size_t n, double a, double b, double m) {
    return psi_log(n, a, b, m, 0.0);
}

double psi(std::size_t n, double a, double b, double m, double c) {
    return std::exp(psi_log(n, a, b, m, c));
}

double Psi(std::size_t n, double a, double b, double m) {
    return psi(n, a, b, m, 0.0);
}

double zb2_sq_all_ones_log(std::size_t n) {
    // Two cycle-index series with geometric weight 1/2: one picks only
    // nontrivial cycles (z1 = 0), the other includes fixed points (z1 = 1).
    const auto za = cycle_index_series_scaled(
        n, [](std::size_t k) { return k == 1 ? 0.0 : 0.5; }, 1.0);
    const auto zb = cycle_index_series_scaled(
        n, [](std::size_t k) { return k == 1 ? 1.0 : 0.5; }, 1.0);

    const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
    std::vector<double> terms;
    terms.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        if (za[k] == 0.0) continue;
        const double lg_k = std::lgamma(static_cast<double>(k) + 1.0);
        const double lg_nk = std::lgamma(static_cast<double>(n - k) + 1.0);
        const double log_binom = lg_n - lg_k - lg_nk;
        // C(n,k)^2 * (k!)^2 Za_k * ((n-k)!)^4 Zb_{n-k}^2
        terms.push_back(2.0 * log_binom + 2.0 * lg_k + std::log(za[k]) +
                        4.0 * lg_nk + 2.0 * std::log(zb[n - k]));
    }
    return log_sum_exp(terms);
}

double zb2_sq_all_ones(std::size_t n) {
    if (n < 1) throw domain_error("zb2_sq_all_ones: n must be >= 1");
    const double v = std::exp(zb2_sq_all_ones_log(n));
    if (n <= 12) {
        const bigint exact = exact_zb2_sq_all_ones(n);
        const double exact_d = static_cast<double>(exact);
        if (std::abs(v - exact_d) > 1e-6 * (1.0 + std::abs(exact_d)))
            throw numeric_error("zb2_sq_all_ones: drifted from integer value");
    }
    return v;
}

namespace {

void require_zero_mean_assumptions(const MomentTable& m) {
    if (std::abs(m(1, 0)) > 1e-12)
        throw domain_error("zero-mean expectations: mu_{1,0} = 0 violated");
    if (!(std::abs(m(2, 0)) < m(1, 1).real()))
        throw domain_error(
            "zero-mean expectations: |mu_{2,0}| < mu_{1,1} violated "
            "(for |mu_{2,0}| = mu_{1,1} use line_support_expectations)");
    if (!std::isfinite(m(2, 2).real()))
        throw domain_error("zero-mean expectations: mu_{2,2} < inf violated");
}

} // namespace

ExpectationPair zero_mean_expectations(std::size_t n, const MomentTable& m) {
    require_zero_mean_assumptions(m);
    const double a = m(2, 2).real();
    const double b = m(1, 1).real() * m(1, 1).real();
    const double c = std::norm(m(2, 0));
    return {psi(n, a, b, 2.0, c), psi(n, a, b, 1.0, c)};
}

ExpectationPair line_support_expectations(std::size_t n, const MomentTable& m) {
    if (std::abs(m(1, 0)) > 1e-12)
        throw domain_error("line_support_expectations: mu_{1,0} = 0 violated");
    const double mu11 = m(1, 1).real();
    const double mu20 = std::abs(m(2, 0));
    if (!(mu20 > 0.0) || std::abs(mu11 - mu20) > 1e-12)
        throw domain_error(
            "line_support_expectations: needs mu_{1,1} = |mu_{2,0}| > 0; "
            "use zero_mean_expectations otherwise");
    const double a = m(2, 2).real();
    const double b = mu11 * mu11;
    return {Psi(n, a, b, 3.0), Psi(n, a, b, 2.0)};
}

double expected_z2_bruteforce(std::size_t n, const MomentTable& m) {
    if (n > 4) throw size_limit_error("expected_z2_bruteforce: n > 4");
    const auto perms = all_permutations(n);
    const std::size_t np = perms.size();

    cplx total{0.0, 0.0};
    for (std::size_t s1 = 0; s1 < np; ++s1)
        for (std::size_t s2 = 0; s2 < np; ++s2)
            for (std::size_t t1 = 0; t1 < np; ++t1)
                for (std::size_t t2 = 0; t2 < np; ++t2) {
                    cplx prod{1.0, 0.0};
                    for (std::size_t i = 0; i < n && prod != cplx{}; ++i) {
                        // Per-row factor keyed by per-column exponents.
                        std::size_t cols[4];
                        int p[4] = {0, 0, 0, 0}, q[4] = {0, 0, 0, 0};
                        std::size_t used = 0;
                        auto slot = [&](std::size_t col) -> std::size_t {
                            for (std::size_t u = 0; u < used; ++u)
                                if (cols[u] == col) return u;
                            cols[used] = col;
                            return used++;
                        };
                        ++p[slot(perms[s1][i])];
                        ++p[slot(perms[s2][i])];
                        ++q[slot(perms[t1][i])];
                        ++q[slot(perms[t2][i])];
                        for (std::size_t u = 0; u < used; ++u)
                            prod *= m(p[u], q[u]);
                    }
                    total += prod;
                }
    if (std::abs(total.imag()) > 1e-9 * (1.0 + std::abs(total)))
        throw numeric_error("expected_z2_bruteforce: imaginary residue");
    return total.real();
}

namespace {

// Perfect matchings of a 2-cover of the complete bipartite base graph,
// reported as per-base-cell usage counts (0, 1 or 2 lifted copies used).
std::vector<std::vector<std::uint8_t>> cover_matchings(std::size_t n,
                                                       std::uint32_t bits) {
    const std::size_t nn = 2 * n;
    // support[I][J] for lifted rows I = c*n + i, lifted cols J = d*n + j
    std::vector<std::vector<bool>> support(nn, std::vector<bool>(nn, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const bool crossed = (bits >> (i * n + j)) & 1u;
            for (std::size_t c = 0; c < 2; ++c) {
                const std::size_t d = crossed ? 1 - c : c;
                support[c * n + i][d * n + j] = true;
            }
        }

    std::vector<std::vector<std::uint8_t>> matchings;
    std::vector<std::size_t> match(nn);
    std::vector<bool> col_used(nn, false);
    std::function<void(std::size_t)> rec = [&](std::size_t row) {
        if (row == nn) {
            std::vector<std::uint8_t> usage(n * n, 0);
            for (std::size_t I = 0; I < nn; ++I)
                ++usage[(I % n) * n + (match[I] % n)];
            matchings.push_back(std::move(usage));
            return;
        }
        for (std::size_t J = 0; J < nn; ++J) {
            if (col_used[J] || !support[row][J]) continue;
            col_used[J] = true;
            match[row] = J;
            rec(row + 1);
            col_used[J] = false;
        }
    };
    rec(0);
    return matchings;
}

} // namespace

double expected_zb2_sq_bruteforce(std::size_t n, const MomentTable& m) {
    if (n > 3) throw size_limit_error("expected_zb2_sq_bruteforce: n > 3");
    const std::size_t cells = n * n;
    const std::uint32_t covers = 1u << cells;

    cplx total{0.0, 0.0};
    for (std::uint32_t bits = 0; bits < covers; ++bits) {
        const auto matchings = cover_matchings(n, bits);
        // E|perm(lift)|^2 = sum over matching pairs of the cell-factorized
        // mixed moments.
        cplx cover_sum{0.0, 0.0};
        for (const auto& m1 : matchings)
            for (const auto& m2 : matchings) {
                cplx prod{1.0, 0.0};
                for (std::size_t c = 0; c < cells; ++c) {
                    if (m1[c] == 0 && m2[c] == 0) continue;
                    prod *= m(m1[c], m2[c]);
                }
                cover_sum += prod;
            }
        total += cover_sum;
    }
    total /= static_cast<double>(covers);
    if (std::abs(total.imag()) > 1e-9 * (1.0 + std::abs(total)))
        throw numeric_error("expected_zb2_sq_bruteforce: imaginary residue");
    return total.real();
}

double psi_leading_log(std::size_t n, double a, double b, double m) {
    if (b <= 0.0) throw domain_error("psi_leading_log: b > 0 required");
    const double nd = static_cast<double>(n);
    return 2.0 * std::lgamma(nd + 1.0) + nd * std::log(b) + (a / b - m) +
           (m - 1.0) * std::log(nd) - std::lgamma(m);
}

double zero_mean_ratio_constant(const MomentTable& mom) {
    const double a = mom(2, 2).real();
    const double b = mom(1, 1).real() * mom(1, 1).real();
    const double c = std::norm(mom(2, 0));
    if (!(b > c)) throw domain_error("zero_mean_ratio_constant: b > c required");
    return -(a - 2.0 * b - c) / b - c / (b - c);
}

double asymptotic_value(AsymptoticKind kind, std::size_t n,
                        const AsymptoticParams& params) {
    switch (kind) {
        case AsymptoticKind::PsiLeading:
            return std::exp(psi_leading_log(n, params.a, params.b, params.m));
        case AsymptoticKind::AllOnesRatio:
            return std::sqrt(kPi * static_cast<double>(n) / kE);
        case AsymptoticKind::ZeroMeanRatio: {
            const double c0 = zero_mean_ratio_constant(params.moments);
            return std::sqrt((static_cast<double>(n) + 1.0 + c0) / kE);
        }
        case AsymptoticKind::LineSupportRatio: {
            const MomentTable& mom = params.moments;
            const double a = mom(2, 2).real();
            const double b = mom(1, 1).real() * mom(1, 1).real();
            if (b <= 0.0)
                throw domain_error("LineSupportRatio: mu_{1,1} > 0 required");
            const double nd = static_cast<double>(n);
            const double num = 0.5 * (nd + 2.0) * (nd + 1.0) -
                               (a - 3.0 * b) * (nd + 1.0) / b +
                               (a - 3.0 * b) * (a - 3.0 * b) / (2.0 * b * b);
            const double den = (nd + 1.0) - (a - 2.0 * b) / b;
            return std::sqrt(num / den / kE);
        }
    }
    throw domain_error("asymptotic_value: unknown kind");
}

// ---- exact rational cross-check mode ----

rational exact_cycle_index(std::size_t n, const std::vector<rational>& z) {
    if (n > 20) throw size_limit_error("exact_cycle_index: n > 20");
    if (z.size() < n) throw domain_error("exact_cycle_index: z shorter than n");
    std::vector<rational> zn(n + 1);
    zn[0] = 1;
    for (std::size_t m = 1; m <= n; ++m) {
        rational acc = 0;
        for (std::size_t k = 1; k <= m; ++k) acc += z[k - 1] * zn[m - k];
        zn[m] = acc / static_cast<int>(m);
    }
    return zn[n];
}

rational exact_psi(std::size_t n, const rational& a, const rational& b,
                   const rational& m, const rational& c) {
    std::vector<rational> z(n);
    for (std::size_t k = 1; k <= n; ++k) {
        if (k == 1) {
            z[0] = a;
        } else {
            rational bk = 1, ck = 1;
            for (std::size_t r = 0; r < k; ++r) {
                bk *= b;
                ck *= c;
            }
            z[k - 1] = m * bk + ck;
        }
    }
    rational fact2 = 1;
    for (std::size_t v = 2; v <= n; ++v) fact2 *= static_cast<int>(v * v);
    return fact2 * exact_cycle_index(n, z);
}

bigint exact_zb2_sq_all_ones(std::size_t n) {
    const rational half(1, 2);
    rational sum = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        const rational psi_k = exact_psi(k, 0, 1, half, 0);
        const rational psi_nk = exact_psi(n - k, 1, 1, half, 0);
        bigint binom = 1;
        for (std::size_t r = 0; r < k; ++r) {
            binom *= static_cast<int>(n - r);
            binom /= static_cast<int>(r + 1);
        }
        sum += rational(binom * binom) * psi_k * psi_nk * psi_nk;
    }
    if (boost::multiprecision::denominator(sum) != 1)
        throw numeric_error("exact_zb2_sq_all_ones: non-integer result");
    return boost::multiprecision::numerator(sum);
}

} // namespace denfg
