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
#include <limits>
#include <vector>

#include "denfg/errors.hpp"
#include "denfg/spa.hpp"

namespace denfg {

namespace {

// Scalar message on a binary edge: unnormalized values at x = 0 and x = 1,
// kept at |p0| + |p1| = 1. Pair form instead of the ratio p1/p0, which is
// infinite at n = 1.
struct Pair {
    cplx p0{0.5, 0.0}, p1{0.5, 0.0};
};

void normalize_pair(Pair& m) {
    const double s = std::abs(m.p0) + std::abs(m.p1);
    if (s == 0.0) throw numeric_error("spa_nfg_scalar: vanishing message");
    m.p0 /= s;
    m.p1 /= s;
}

void damp_pair(Pair& stored, Pair fresh, double damping) {
    normalize_pair(fresh);
    const double keep = 1.0 - damping;
    stored.p0 = damping * fresh.p0 + keep * stored.p0;
    stored.p1 = damping * fresh.p1 + keep * stored.p1;
    normalize_pair(stored);
}

double pair_distance(const Pair& a, const Pair& b) {
    return std::max(std::abs(a.p0 - b.p0), std::abs(a.p1 - b.p1));
}

// Exclusion-sum check-node outputs over one node of the given degree.
void scalar_check_update(const std::vector<Pair>& incoming,
                         const std::size_t* indices, std::size_t degree,
                         std::vector<Pair>& fresh) {
    cplx ratios[32];
    cplx total{0.0, 0.0};
    for (std::size_t k = 0; k < degree; ++k) {
        const Pair& in = incoming[indices[k]];
        if (std::abs(in.p0) < 1e-300)
            throw numeric_error("spa_nfg_scalar: degenerate message ratio");
        ratios[k] = in.p1 / in.p0;
        total += ratios[k];
    }
    for (std::size_t k = 0; k < degree; ++k)
        fresh[indices[k]] = Pair{total - ratios[k], cplx{1.0, 0.0}};
}

cplx entropy(const std::vector<cplx>& p) {
    cplx h{0.0, 0.0};
    for (const cplx& v : p)
        if (std::abs(v) > 0.0) h -= v * std::log(v);
    return h;
}

} // namespace

ScalarSpaResult spa_nfg_scalar(const ComplexMatrix& theta,
                               const SpaConfig& config) {
    config.validate();
    const std::size_t n = theta.n();
    if (n > 32) throw size_limit_error("spa_nfg_scalar: n > 32");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(theta(i, j)) == 0.0)
                throw domain_error("spa_nfg_scalar: zero theta entry");

    const std::size_t cells = n * n;
    std::vector<Pair> edge_to_lcheck(cells), lcheck_to_edge(cells),
        rcheck_to_edge(cells), edge_to_rcheck(cells);

    auto edge_apply = [&](const Pair& in, std::size_t i, std::size_t j) {
        return Pair{in.p0, theta(i, j) * in.p1};
    };

    std::size_t indices[32];
    int it = 0;
    double metric = std::numeric_limits<double>::infinity();
    while (it < config.max_iters) {
        const auto prev_e2l = edge_to_lcheck;
        const auto prev_l2e = lcheck_to_edge;
        const auto prev_r2e = rcheck_to_edge;
        const auto prev_e2r = edge_to_rcheck;

        std::vector<Pair> fresh_l2e(cells), fresh_r2e(cells);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) indices[j] = i * n + j;
            scalar_check_update(prev_e2l, indices, n, fresh_l2e);
        }
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) indices[i] = i * n + j;
            scalar_check_update(prev_e2r, indices, n, fresh_r2e);
        }
        for (std::size_t e = 0; e < cells; ++e) {
            damp_pair(lcheck_to_edge[e], fresh_l2e[e], config.damping);
            damp_pair(rcheck_to_edge[e], fresh_r2e[e], config.damping);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t e = i * n + j;
                damp_pair(edge_to_lcheck[e], edge_apply(rcheck_to_edge[e], i, j),
                          config.damping);
                damp_pair(edge_to_rcheck[e], edge_apply(lcheck_to_edge[e], i, j),
                          config.damping);
            }
        ++it;

        metric = 0.0;
        for (std::size_t e = 0; e < cells; ++e) {
            metric = std::max(metric, pair_distance(edge_to_lcheck[e], prev_e2l[e]));
            metric = std::max(metric, pair_distance(lcheck_to_edge[e], prev_l2e[e]));
            metric = std::max(metric, pair_distance(rcheck_to_edge[e], prev_r2e[e]));
            metric = std::max(metric, pair_distance(edge_to_rcheck[e], prev_e2r[e]));
        }
        if (metric < config.conv_tol) break;
    }

    // Beliefs at the reached state.
    cplx u{0.0, 0.0}, h{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<cplx> bl(n);
        cplx sum{0.0, 0.0};
        for (std::size_t l = 0; l < n; ++l) {
            cplx prod{1.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
                const Pair& m = edge_to_lcheck[i * n + j];
                prod *= (j == l) ? m.p1 : m.p0;
            }
            bl[l] = prod;
            sum += prod;
        }
        if (std::abs(sum) == 0.0)
            throw numeric_error("spa_nfg_scalar: all-zero node belief");
        for (auto& v : bl) v /= sum;
        h += entropy(bl);
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<cplx> br(n);
        cplx sum{0.0, 0.0};
        for (std::size_t l = 0; l < n; ++l) {
            cplx prod{1.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                const Pair& m = edge_to_rcheck[i * n + j];
                prod *= (i == l) ? m.p1 : m.p0;
            }
            br[l] = prod;
            sum += prod;
        }
        if (std::abs(sum) == 0.0)
            throw numeric_error("spa_nfg_scalar: all-zero node belief");
        for (auto& v : br) v /= sum;
        h += entropy(br);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t e = i * n + j;
            std::vector<cplx> be{
                lcheck_to_edge[e].p0 * rcheck_to_edge[e].p0,
                theta(i, j) * lcheck_to_edge[e].p1 * rcheck_to_edge[e].p1};
            const cplx sum = be[0] + be[1];
            if (std::abs(sum) == 0.0)
                throw numeric_error("spa_nfg_scalar: all-zero edge belief");
            be[0] /= sum;
            be[1] /= sum;
            h -= entropy(be);
            if (std::abs(be[1]) > 0.0) u -= be[1] * std::log(theta(i, j));
        }

    ScalarSpaResult res;
    res.converged = metric < config.conv_tol;
    res.iterations = it;
    res.log_perm_b = -(u - h);
    res.perm_b = std::exp(res.log_perm_b);
    return res;
}

} // namespace denfg
