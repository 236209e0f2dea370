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

#include "denfg/covers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "denfg/errors.hpp"
#include "denfg/permanent.hpp"

namespace denfg {

namespace {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do {
        out.push_back(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

// Nontrivial cycles of sigma2^{-1} o sigma1 acting on rows, ordered by
// minimal element. Rows fixed by the composition carry coinciding matchings.
std::vector<std::vector<std::size_t>> alternating_cycles(
    const std::vector<std::size_t>& sigma1, const std::vector<std::size_t>& sigma2) {
    const std::size_t n = sigma1.size();
    std::vector<std::size_t> inv2(n);
    for (std::size_t i = 0; i < n; ++i) inv2[sigma2[i]] = i;

    std::vector<std::vector<std::size_t>> cycles;
    std::vector<bool> seen(n, false);
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<std::size_t> cyc;
        std::size_t v = start;
        do {
            seen[v] = true;
            cyc.push_back(v);
            v = inv2[sigma1[v]];
        } while (v != start);
        if (cyc.size() >= 2) cycles.push_back(std::move(cyc));
    }
    return cycles;
}

// Runs fn(chunk_index) over a fixed chunk grid; chunk results are combined
// by the caller in index order, so values are thread-count independent.
template <typename Fn>
void run_chunks(std::size_t chunks, unsigned threads, Fn&& fn) {
    if (threads <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned workers = std::min<unsigned>(threads, chunks);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t c = next.fetch_add(1); c < chunks;
                 c = next.fetch_add(1))
                fn(c);
        });
    for (auto& t : pool) t.join();
}

} // namespace

CoverAssignment CoverAssignment::from_mask(std::size_t n, std::uint64_t mask) {
    CoverAssignment c;
    c.n = n;
    c.bits.resize(n * n);
    for (std::size_t k = 0; k < n * n; ++k)
        c.bits[k] = static_cast<std::uint8_t>((mask >> k) & 1u);
    return c;
}

std::uint64_t CoverAssignment::to_mask() const {
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < bits.size(); ++k)
        if (bits[k]) mask |= std::uint64_t{1} << k;
    return mask;
}

ComplexMatrix lift_matrix(const ComplexMatrix& theta,
                          const CoverAssignment& cover) {
    const std::size_t n = theta.n();
    if (cover.n != n || cover.bits.size() != n * n)
        throw domain_error("lift_matrix: cover dimension mismatch");
    ComplexMatrix lift(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < 2; ++c) {
                const std::size_t d = cover.crossed(i, j) ? 1 - c : c;
                lift(c * n + i, d * n + j) = theta(i, j);
            }
    return lift;
}

double zb2_denfg_exact(const ComplexMatrix& theta, unsigned threads) {
    const std::size_t n = theta.n();
    if (n > 4) throw size_limit_error("zb2_denfg_exact: n > 4");

    const std::uint64_t covers = std::uint64_t{1} << (n * n);
    const std::size_t chunks = std::min<std::uint64_t>(covers, 64);
    std::vector<double> partial(chunks, 0.0);

    run_chunks(chunks, threads, [&](std::size_t c) {
        const std::uint64_t lo = covers * c / chunks;
        const std::uint64_t hi = covers * (c + 1) / chunks;
        KahanSum acc;
        for (std::uint64_t mask = lo; mask < hi; ++mask)
            acc.add(perm_abs2(lift_matrix(theta, CoverAssignment::from_mask(n, mask))));
        partial[c] = acc.sum;
    });

    KahanSum total;
    for (double p : partial) total.add(p);
    return std::sqrt(total.sum / static_cast<double>(covers));
}

SampledEstimate zb2_denfg_sampled(const ComplexMatrix& theta,
                                  std::size_t samples, Rng& rng,
                                  bool exhaustive) {
    const std::size_t n = theta.n();
    if (exhaustive) return {zb2_denfg_exact(theta), 0.0};
    if (samples < 2) throw domain_error("zb2_denfg_sampled: samples >= 2");

    KahanSum sum, sumsq;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        std::uint64_t mask = 0;
        for (std::size_t k = 0; k < n * n; ++k)
            mask |= (rng.next_u64() & 1u) << k;
        const double x =
            perm_abs2(lift_matrix(theta, CoverAssignment::from_mask(n, mask)));
        sum.add(x);
        sumsq.add(x * x);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (lo == hi) return {std::sqrt(lo), 0.0};  // degenerate, e.g. n = 1
    const double ns = static_cast<double>(samples);
    const double mean = sum.sum / ns;
    const double var = std::max(0.0, (sumsq.sum / ns - mean * mean)) *
                       ns / std::max(1.0, ns - 1.0);
    const double se_mean = std::sqrt(var / ns);
    const double est = std::sqrt(mean);
    const double se = (mean > 0.0) ? se_mean / (2.0 * est) : 0.0;
    return {est, se};
}

cplx cover_average_perm_lift(const ComplexMatrix& theta, unsigned threads) {
    const std::size_t n = theta.n();
    if (n > 4) throw size_limit_error("cover_average_perm_lift: n > 4");

    const std::uint64_t covers = std::uint64_t{1} << (n * n);
    const std::size_t chunks = std::min<std::uint64_t>(covers, 64);
    std::vector<cplx> partial(chunks, cplx{0.0, 0.0});

    run_chunks(chunks, threads, [&](std::size_t c) {
        const std::uint64_t lo = covers * c / chunks;
        const std::uint64_t hi = covers * (c + 1) / chunks;
        KahanSum re, im;
        for (std::uint64_t mask = lo; mask < hi; ++mask) {
            const cplx z =
                perm_ryser(lift_matrix(theta, CoverAssignment::from_mask(n, mask)));
            re.add(z.real());
            im.add(z.imag());
        }
        partial[c] = cplx{re.sum, im.sum};
    });

    cplx total{0.0, 0.0};
    for (const cplx& p : partial) total += p;
    return total / static_cast<double>(covers);
}

cplx permB2_nfg_cyclesum(const ComplexMatrix& theta) {
    const std::size_t n = theta.n();
    if (n > 6) throw size_limit_error("permB2_nfg_cyclesum: n > 6");

    const auto perms = all_permutations(n);
    cplx total{0.0, 0.0};
    for (const auto& s1 : perms)
        for (const auto& s2 : perms) {
            cplx prod{1.0, 0.0};
            for (std::size_t i = 0; i < n; ++i)
                prod *= theta(i, s1[i]) * theta(i, s2[i]);
            const std::size_t c = alternating_cycles(s1, s2).size();
            total += prod * std::ldexp(1.0, -static_cast<int>(c));
        }
    return total;
}

cplx z_cover_transformed(const ComplexMatrix& theta,
                         const CoverAssignment& cover,
                         bool reverse_cycle_order) {
    const std::size_t n = theta.n();
    if (n > 5) throw size_limit_error("z_cover_transformed: n > 5");
    if (cover.n != n) throw domain_error("z_cover_transformed: cover mismatch");

    const auto perms = all_permutations(n);
    cplx total{0.0, 0.0};

    for (const auto& s1 : perms)
        for (const auto& s2 : perms) {
            auto cycles = alternating_cycles(s1, s2);
            if (reverse_cycle_order) std::reverse(cycles.begin(), cycles.end());
            const std::size_t c = cycles.size();

            // Doubled edges at coinciding matchings: diagonal weight t^2,
            // both check endpoints contribute +1.
            cplx base{1.0, 0.0};
            for (std::size_t i = 0; i < n; ++i)
                if (s1[i] == s2[i]) base *= theta(i, s1[i]) * theta(i, s1[i]);

            // Each cycle carries an orientation bit; the two orientations
            // correspond to the two signed diagonal slots of the edge
            // weights. Each configuration is produced by 2^c permutation
            // pairs, hence the 2^{-c} weight.
            for (std::uint64_t b = 0; b < (std::uint64_t{1} << c); ++b) {
                cplx g = base;
                double sign = 1.0;
                for (std::size_t k = 0; k < c; ++k) {
                    const bool oriented = (b >> k) & 1u;  // the signed slot
                    for (std::size_t idx = 0; idx < cycles[k].size(); ++idx) {
                        const std::size_t i = cycles[k][idx];
                        g *= theta(i, s1[i]) * theta(i, s2[i]);
                        if (oriented) {
                            // Signed slot: -t on crossed edges, and the
                            // check-node convention adds -1 per incident
                            // node (an even count around any cycle).
                            if (cover.crossed(i, s1[i])) sign = -sign;
                            if (cover.crossed(i, s2[i])) sign = -sign;
                            sign = -sign;  // left check node i
                            sign = -sign;  // right check node of the cycle
                        }
                    }
                }
                total += std::ldexp(1.0, -static_cast<int>(c)) * sign * g;
            }
        }
    return total;
}

} // namespace denfg
