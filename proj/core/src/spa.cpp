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

#include "denfg/spa.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "denfg/errors.hpp"

namespace denfg {

namespace {

constexpr double kM00FallbackTol = 1e-12;
constexpr double kRatioGuard = 1e-300;

void scale_message(Message& m, cplx s) {
    if (std::abs(s) == 0.0)
        throw numeric_error("normalize_message: vanishing message");
    m.m00 /= s;
    m.m01 /= s;
    m.m10 /= s;
    m.m11 /= s;
    m.delta /= s * s;
}

// Divide by m00, or by the trace when m00 is negligible against it.
void normalize_message(Message& m) {
    const cplx trace = m.m00 + m.m11;
    cplx s = m.m00;
    if (std::abs(s) < kM00FallbackTol * std::abs(trace)) s = trace;
    scale_message(m, s);
}

// Midpoint (and general) damping blends scale representatives, so both
// operands are put on the trace scale first; the trace never vanishes for
// PSD messages, unlike m00, which dies at concentrated fixed points.
void damp_into(Message& stored, Message fresh, double damping) {
    scale_message(fresh, fresh.m00 + fresh.m11);
    Message old_scaled = stored;
    scale_message(old_scaled, old_scaled.m00 + old_scaled.m11);
    const double keep = 1.0 - damping;
    stored.m00 = damping * fresh.m00 + keep * old_scaled.m00;
    stored.m01 = damping * fresh.m01 + keep * old_scaled.m01;
    stored.m10 = damping * fresh.m10 + keep * old_scaled.m10;
    stored.m11 = damping * fresh.m11 + keep * old_scaled.m11;
    stored.delta = damping * fresh.delta + keep * old_scaled.delta;
    normalize_message(stored);
}

// Entry-wise product with the edge weight; delta by the propagation
// identity delta' = (|t|^2 + eps) * delta + eps * m01 * m10, exact and free
// of the m11 reconstruction. eps comes from the model, so a rank-1 weight
// keeps deltas at hard zero.
Message edge_update(const Message& in, const Mat2& w, double eps) {
    Message out;
    out.m00 = w.a00 * in.m00;
    out.m01 = w.a01 * in.m01;
    out.m10 = w.a10 * in.m10;
    out.m11 = w.a11 * in.m11;
    out.delta = w.a11.real() * in.delta + eps * (in.m01 * in.m10);
    return out;
}

// Check-node outputs for one node: incoming messages at the given strided
// positions, outputs written to fresh[]. Uses exclusion sums of the ratio
// variables, O(n) per node after the shared pass.
void check_node_update(const std::vector<Message>& incoming,
                       const std::size_t* indices, std::size_t degree,
                       std::vector<Message>& fresh, const char* side) {
    if (degree == 1) {
        // All mass on the selected slot; no ratios involved.
        fresh[indices[0]] = Message{cplx{0.0, 0.0}, cplx{0.0, 0.0},
                                    cplx{0.0, 0.0}, cplx{1.0, 0.0},
                                    cplx{0.0, 0.0}};
        return;
    }
    cplx sr{0.0, 0.0}, ss{0.0, 0.0}, sd{0.0, 0.0};
    cplx r[32], s[32], d[32];
    for (std::size_t k = 0; k < degree; ++k) {
        const Message& in = incoming[indices[k]];
        if (std::abs(in.m00) < kRatioGuard)
            throw numeric_error(std::string("spa_step: degenerate ") + side +
                                " message (m00 underflow) at slot " +
                                std::to_string(indices[k]));
        r[k] = in.m10 / in.m00;
        s[k] = in.m01 / in.m00;
        d[k] = (in.delta / in.m00) / in.m00;  // two divisions: m00^2 underflows
        sr += r[k];
        ss += s[k];
        sd += d[k];
    }
    for (std::size_t k = 0; k < degree; ++k) {
        const cplx er = sr - r[k];
        const cplx es = ss - s[k];
        const cplx ed = sd - d[k];
        Message& out = fresh[indices[k]];
        out.m11 = cplx{1.0, 0.0};
        out.m01 = er;
        out.m10 = es;
        out.m00 = ed + er * es;
        out.delta = ed;
    }
}

Message random_init_message(InitMode mode, Rng& rng) {
    // Eigenvalues first, then the frame, so every mode consumes the same
    // random words.
    const double d0 = rng.exponential();
    const double d1 = (mode == InitMode::Rank1) ? 0.0 : rng.exponential();

    cplx u00{1.0, 0.0}, u01{0.0, 0.0}, u10{0.0, 0.0}, u11{1.0, 0.0};
    if (mode != InitMode::Diagonal) {
        // Haar unitary from a complex Ginibre matrix via Gram-Schmidt with
        // positive-diagonal phase fix.
        cplx g00 = rng.complex_normal(), g01 = rng.complex_normal();
        cplx g10 = rng.complex_normal(), g11 = rng.complex_normal();
        const double n0 = std::sqrt(std::norm(g00) + std::norm(g10));
        u00 = g00 / n0;
        u10 = g10 / n0;
        const cplx proj = std::conj(u00) * g01 + std::conj(u10) * g11;
        cplx v01 = g01 - proj * u00;
        cplx v11 = g11 - proj * u10;
        const double n1 = std::sqrt(std::norm(v01) + std::norm(v11));
        u01 = v01 / n1;
        u11 = v11 / n1;
    }

    // Hermitian by construction: exactly real diagonal, exactly conjugate
    // off-diagonal pair (plain products leave +-1 ulp imaginary residue
    // under fp contraction). det(U diag(d) U^H) = d0*d1, so rank-1 deltas
    // start at hard zero.
    const double p00 = d0 * std::norm(u00) + d1 * std::norm(u01);
    const double p11 = d0 * std::norm(u10) + d1 * std::norm(u11);
    const cplx p10 = d0 * u10 * std::conj(u00) + d1 * u11 * std::conj(u01);

    Message m;
    // Normalize by the (0,0) entry (real positive), trace fallback; real
    // scalar division keeps the imaginary parts exact.
    const double s =
        (p00 >= kM00FallbackTol * (p00 + p11)) ? p00 : (p00 + p11);
    m.m00 = cplx{p00 / s, 0.0};
    m.m10 = p10 / s;
    m.m01 = std::conj(m.m10);
    m.m11 = cplx{p11 / s, 0.0};
    m.delta = cplx{d0 * d1 / (s * s), 0.0};
    return m;
}

} // namespace

double Message::frobenius_sq() const {
    return std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11);
}

double Message::normalized_distance(const Message& a, const Message& b) {
    const cplx ta = a.m00 + a.m11;
    const cplx tb = b.m00 + b.m11;
    if (std::abs(ta) == 0.0 || std::abs(tb) == 0.0)
        return std::numeric_limits<double>::infinity();
    const cplx d00 = a.m00 / ta - b.m00 / tb;
    const cplx d01 = a.m01 / ta - b.m01 / tb;
    const cplx d10 = a.m10 / ta - b.m10 / tb;
    const cplx d11 = a.m11 / ta - b.m11 / tb;
    return std::sqrt(std::norm(d00) + std::norm(d01) + std::norm(d10) +
                     std::norm(d11));
}

void SpaConfig::validate() const {
    if (damping < 0.0 || damping > 1.0)
        throw domain_error("SpaConfig: damping must lie in [0,1]");
    if (!(conv_tol > 0.0)) throw domain_error("SpaConfig: conv_tol > 0");
    if (max_iters < 1) throw domain_error("SpaConfig: max_iters >= 1");
}

MessageState init_messages(const DenfgModel& model, const SpaConfig& config,
                           Rng& rng) {
    config.validate();
    const std::size_t n = model.n();
    if (n > 32) throw size_limit_error("init_messages: n > 32");
    MessageState st;
    st.n = n;
    st.iteration = 0;
    st.edge_to_lcheck.resize(n * n);
    st.lcheck_to_edge.resize(n * n);
    st.rcheck_to_edge.resize(n * n);
    st.edge_to_rcheck.resize(n * n);

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t e = st.idx(i, j);
            const Message a = random_init_message(config.init_mode, rng);
            const Message b = random_init_message(config.init_mode, rng);
            st.edge_to_lcheck[e] = a;
            st.lcheck_to_edge[e] = a;  // through value until the first round
            st.rcheck_to_edge[e] = b;
            Message derived =
                edge_update(a, model.weight(i, j), model.epsilon(i, j).real());
            normalize_message(derived);
            st.edge_to_rcheck[e] = derived;
        }
    return st;
}

double spa_step(MessageState& state, const DenfgModel& model,
                const SpaConfig& config) {
    const std::size_t n = state.n;
    const MessageState before = state;

    std::vector<Message> fresh_l2e(n * n), fresh_r2e(n * n);
    std::size_t indices[32];

    // Phase 1: check nodes read the previous round's edge outputs.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) indices[j] = state.idx(i, j);
        check_node_update(before.edge_to_lcheck, indices, n, fresh_l2e, "left");
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) indices[i] = state.idx(i, j);
        check_node_update(before.edge_to_rcheck, indices, n, fresh_r2e, "right");
    }
    for (std::size_t e = 0; e < n * n; ++e) {
        damp_into(state.lcheck_to_edge[e], fresh_l2e[e], config.damping);
        damp_into(state.rcheck_to_edge[e], fresh_r2e[e], config.damping);
    }

    // Phase 2: edge nodes read this round's check outputs.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t e = state.idx(i, j);
            const Mat2& w = model.weight(i, j);
            const double eps = model.epsilon(i, j).real();
            damp_into(state.edge_to_lcheck[e],
                      edge_update(state.rcheck_to_edge[e], w, eps),
                      config.damping);
            damp_into(state.edge_to_rcheck[e],
                      edge_update(state.lcheck_to_edge[e], w, eps),
                      config.damping);
        }

    ++state.iteration;

    auto finite = [](const Message& m) {
        auto ok = [](cplx v) {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        };
        return ok(m.m00) && ok(m.m01) && ok(m.m10) && ok(m.m11) && ok(m.delta);
    };
    for (std::size_t e = 0; e < n * n; ++e)
        if (!finite(state.edge_to_lcheck[e]) || !finite(state.lcheck_to_edge[e]) ||
            !finite(state.rcheck_to_edge[e]) || !finite(state.edge_to_rcheck[e]))
            throw numeric_error("spa_step: non-finite message at edge (" +
                                std::to_string(e / n) + "," +
                                std::to_string(e % n) + ")");

    double metric = 0.0;
    auto track = [&metric](double d) {
        // NaN must force non-convergence, never slip past the max.
        if (!(d == d)) d = std::numeric_limits<double>::infinity();
        metric = std::max(metric, d);
    };
    for (std::size_t e = 0; e < n * n; ++e) {
        track(Message::normalized_distance(state.edge_to_lcheck[e],
                                           before.edge_to_lcheck[e]));
        track(Message::normalized_distance(state.lcheck_to_edge[e],
                                           before.lcheck_to_edge[e]));
        track(Message::normalized_distance(state.rcheck_to_edge[e],
                                           before.rcheck_to_edge[e]));
        track(Message::normalized_distance(state.edge_to_rcheck[e],
                                           before.edge_to_rcheck[e]));
    }
    return metric;
}

namespace {

// Unnormalized n x n belief at a check node from its incoming messages.
// Entry (l,k) multiplies the (1,0) slot at l, the (0,1) slot at k and the
// (0,0) slots elsewhere; l = k picks the (1,1) slot once.
std::vector<cplx> node_belief(const std::vector<Message>& incoming,
                              const std::size_t* indices, std::size_t degree) {
    std::vector<cplx> b(degree * degree);
    for (std::size_t l = 0; l < degree; ++l)
        for (std::size_t k = 0; k < degree; ++k) {
            cplx prod{1.0, 0.0};
            for (std::size_t j = 0; j < degree; ++j) {
                const Message& m = incoming[indices[j]];
                if (j == l && j == k)
                    prod *= m.m11;
                else if (j == l)
                    prod *= m.m10;
                else if (j == k)
                    prod *= m.m01;
                else
                    prod *= m.m00;
            }
            b[l * degree + k] = prod;
        }
    return b;
}

void normalize_belief(std::vector<cplx>& b) {
    cplx sum{0.0, 0.0};
    for (const cplx& v : b) sum += v;
    if (std::abs(sum) == 0.0)
        throw numeric_error("beliefs_from_messages: all-zero belief");
    for (cplx& v : b) v /= sum;
}

double belief_max_abs(const std::vector<cplx>& b) {
    double mx = 0.0;
    for (const cplx& v : b) mx = std::max(mx, std::abs(v));
    return mx;
}

double belief_herm_defect(const std::vector<cplx>& b, std::size_t n) {
    double mx = 0.0;
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = l; k < n; ++k)
            mx = std::max(mx,
                          std::abs(b[l * n + k] - std::conj(b[k * n + l])));
    return mx;
}

// PSD within tol <=> the Hermitian part shifted by tol*I admits a Cholesky
// factorization.
bool belief_psd_within(const std::vector<cplx>& b, std::size_t n, double tol) {
    std::vector<cplx> a(n * n);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = 0; k < n; ++k)
            a[l * n + k] = 0.5 * (b[l * n + k] + std::conj(b[k * n + l]));
    for (std::size_t l = 0; l < n; ++l) a[l * n + l] += tol;

    for (std::size_t c = 0; c < n; ++c) {
        cplx diag = a[c * n + c];
        for (std::size_t k = 0; k < c; ++k) diag -= a[c * n + k] * std::conj(a[c * n + k]);
        if (diag.real() <= 0.0) return false;
        const double root = std::sqrt(diag.real());
        a[c * n + c] = root;
        for (std::size_t r = c + 1; r < n; ++r) {
            cplx v = a[r * n + c];
            for (std::size_t k = 0; k < c; ++k)
                v -= a[r * n + k] * std::conj(a[c * n + k]);
            a[r * n + c] = v / root;
        }
    }
    return true;
}

void assert_belief_invariants(const std::vector<cplx>& b, std::size_t n,
                              const char* which) {
    const double scale = 1.0 + belief_max_abs(b);
    if (belief_herm_defect(b, n) > 1e-6 * scale)
        throw numeric_error(std::string("belief not Hermitian: ") + which);
    if (!belief_psd_within(b, n, 1e-6 * scale))
        throw numeric_error(std::string("belief not PSD: ") + which);
}

} // namespace

Beliefs beliefs_from_messages(const MessageState& state,
                              const DenfgModel& model) {
    const std::size_t n = state.n;
    Beliefs out;
    out.n = n;
    out.left.resize(n);
    out.right.resize(n);
    out.edge.resize(n * n);

    std::size_t indices[32];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) indices[j] = state.idx(i, j);
        out.left[i] = node_belief(state.edge_to_lcheck, indices, n);
        normalize_belief(out.left[i]);
        assert_belief_invariants(out.left[i], n, "left node");
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) indices[i] = state.idx(i, j);
        out.right[j] = node_belief(state.edge_to_rcheck, indices, n);
        normalize_belief(out.right[j]);
        assert_belief_invariants(out.right[j], n, "right node");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t e = state.idx(i, j);
            const Mat2 prod = hadamard(
                hadamard(model.weight(i, j), state.lcheck_to_edge[e].as_mat2()),
                state.rcheck_to_edge[e].as_mat2());
            std::vector<cplx> b{prod.a00, prod.a01, prod.a10, prod.a11};
            normalize_belief(b);
            assert_belief_invariants(b, 2, "edge");
            out.edge[e] = Mat2{b[0], b[1], b[2], b[3]};
        }
    return out;
}

namespace {

// -x ln x for the real diagonal mass; 0 ln 0 = 0.
double diag_entropy_term(const cplx& x, double& residue) {
    residue += std::abs(x.imag());
    const double xr = x.real();
    if (xr <= 0.0) return 0.0;
    return -xr * std::log(xr);
}

// Conjugate pair contribution -2 Re(b ln b) of one representative.
double pair_entropy_term(const cplx& b) {
    if (std::abs(b) == 0.0) return 0.0;
    return -2.0 * (b * std::log(b)).real();
}

double matrix_entropy(const std::vector<cplx>& b, std::size_t n,
                      double& residue) {
    double h = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        h += diag_entropy_term(b[l * n + l], residue);
        for (std::size_t k = l + 1; k < n; ++k)
            h += pair_entropy_term(b[l * n + k]);
    }
    return h;
}

} // namespace

EnergyTerms bethe_free_energy(const Beliefs& beliefs, const DenfgModel& model) {
    const std::size_t n = beliefs.n;
    EnergyTerms out;
    double residue = 0.0;

    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Mat2& be = beliefs.edge[i * n + j];
            const Mat2& w = model.weight(i, j);
            // W00 = 1 contributes nothing.
            auto diag_term = [&](const cplx& b, const cplx& wv) {
                if (std::abs(b) <= 1e-12) return 0.0;
                if (std::abs(wv) == 0.0)
                    throw numeric_error(
                        "bethe_free_energy: belief mass on a zero weight");
                residue += std::abs(b.imag()) * std::abs(std::log(std::abs(wv)));
                return -b.real() * std::log(std::abs(wv));
            };
            u += diag_term(be.a00, w.a00);
            u += diag_term(be.a11, w.a11);
            if (std::abs(be.a10) > 0.0) {
                if (std::abs(w.a10) == 0.0)
                    throw numeric_error(
                        "bethe_free_energy: belief mass on a zero weight");
                u += -2.0 * (be.a10 * std::log(w.a10)).real();
            }
        }

    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        h += matrix_entropy(beliefs.left[i], n, residue);
    for (std::size_t j = 0; j < n; ++j)
        h += matrix_entropy(beliefs.right[j], n, residue);
    for (std::size_t e = 0; e < n * n; ++e) {
        const Mat2& be = beliefs.edge[e];
        std::vector<cplx> b{be.a00, be.a01, be.a10, be.a11};
        h -= matrix_entropy(b, 2, residue);
    }

    out.average_energy = u;
    out.entropy = h;
    out.free_energy = u - h;
    out.imag_residue = residue;
    out.branch_cut_warning =
        residue > 1e-7 * (1.0 + std::abs(out.free_energy));
    return out;
}

Degeneracy classify_degeneracy(const MessageState& state, double tol) {
    bool rank1 = true, diagonal = true;
    auto scan = [&](const std::vector<Message>& family) {
        for (const Message& m : family) {
            const double f2 = m.frobenius_sq();
            if (f2 == 0.0) continue;
            if (std::abs(m.delta) / f2 >= tol) rank1 = false;
            const double off =
                std::sqrt(std::norm(m.m01) + std::norm(m.m10));
            if (off / std::sqrt(f2) >= tol) diagonal = false;
        }
    };
    scan(state.edge_to_lcheck);
    scan(state.lcheck_to_edge);
    scan(state.rcheck_to_edge);
    scan(state.edge_to_rcheck);
    if (rank1) return Degeneracy::Rank1;  // tie-break: rank-1 first
    if (diagonal) return Degeneracy::Diagonal;
    return Degeneracy::Generic;
}

double edge_consistency_residual(const Beliefs& beliefs) {
    const std::size_t n = beliefs.n;
    double worst = 0.0;

    auto marginal = [n](const std::vector<cplx>& b, std::size_t slot) {
        Mat2 m;
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t k = 0; k < n; ++k) {
                const cplx v = b[l * n + k];
                if (l == slot && k == slot)
                    m.a11 += v;
                else if (l == slot)
                    m.a10 += v;
                else if (k == slot)
                    m.a01 += v;
                else
                    m.a00 += v;
            }
        return m;
    };
    auto max_diff = [](const Mat2& a, const Mat2& b) {
        double d = std::abs(a.a00 - b.a00);
        d = std::max(d, std::abs(a.a01 - b.a01));
        d = std::max(d, std::abs(a.a10 - b.a10));
        d = std::max(d, std::abs(a.a11 - b.a11));
        return d;
    };

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Mat2& be = beliefs.edge[i * n + j];
            worst = std::max(worst, max_diff(marginal(beliefs.left[i], j), be));
            worst = std::max(worst, max_diff(marginal(beliefs.right[j], i), be));
        }
    return worst;
}

const char* degeneracy_name(Degeneracy d) {
    switch (d) {
        case Degeneracy::Rank1: return "rank1";
        case Degeneracy::Diagonal: return "diagonal";
        case Degeneracy::Generic: return "generic";
    }
    return "generic";
}

SpaResult run_spa(const DenfgModel& model, const SpaConfig& config) {
    config.validate();
    const std::size_t n = model.n();

    const DenfgModel* active = &model;
    DenfgModel perturbed;
    bool needs_perturb = false;
    for (std::size_t i = 0; i < n && !needs_perturb; ++i)
        for (std::size_t j = 0; j < n && !needs_perturb; ++j)
            if (std::abs(model.theta(i, j)) == 0.0 &&
                model.epsilon(i, j).real() <= 0.0)
                needs_perturb = true;
    if (needs_perturb) {
        if (!config.zero_perturb)
            throw domain_error(
                "run_spa: zero theta entry with zero epsilon; enable "
                "zero_perturb to run on a perturbed model");
        ComplexMatrix t = model.theta;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (std::abs(t(i, j)) == 0.0 && model.epsilon(i, j).real() <= 0.0)
                    t(i, j) = cplx{1e-12, 0.0};
        perturbed = build_denfg(t, model.epsilon);
        active = &perturbed;
    }

    Rng rng(derive_key(config.seed, 0x5bd1e995u));
    MessageState state = init_messages(*active, config, rng);

    SpaResult res;
    double metric = std::numeric_limits<double>::infinity();
    int it = 0;
    while (it < config.max_iters) {
        metric = spa_step(state, *active, config);
        ++it;
        if (metric < config.conv_tol) break;
    }
    res.converged = metric < config.conv_tol;
    res.iterations = it;
    res.degeneracy = classify_degeneracy(state, config.degeneracy_tol);
    res.beliefs = beliefs_from_messages(state, *active);
    res.energy = bethe_free_energy(res.beliefs, *active);
    res.log_zb_spa = -res.energy.free_energy;
    res.zb_spa = std::exp(res.log_zb_spa);
    res.consistency_residual = edge_consistency_residual(res.beliefs);
    return res;
}

} // namespace denfg
