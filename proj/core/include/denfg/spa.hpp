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

#ifndef DENFG_SPA_HPP
#define DENFG_SPA_HPP

#include <cstdint>
#include <vector>

#include "denfg/factorgraph.hpp"
#include "denfg/rng.hpp"

namespace denfg {

/// Directed SPA message on a double edge. The update rules work on the
/// tuple (m00, m01, m10, delta); delta is the determinant propagated by its
/// own rule (never recomputed mid-update, which would cancel
/// catastrophically). m11 is carried alongside for trace normalization and
/// beliefs; it equals (delta + m01*m10)/m00 whenever m00 != 0 and the tuple
/// is self-consistent (always at fixed points).
struct Message {
    cplx m00{1.0, 0.0}, m01{0.0, 0.0}, m10{0.0, 0.0}, m11{0.0, 0.0};
    cplx delta{0.0, 0.0};

    Mat2 as_mat2() const { return Mat2{m00, m01, m10, m11}; }
    double frobenius_sq() const;
    /// Frobenius distance of the trace-normalized matrices.
    static double normalized_distance(const Message& a, const Message& b);
};

/// All four directed message families, indexed row-major by (i,j).
/// The left edge of pair (i,j) carries edge_to_lcheck / lcheck_to_edge,
/// the right edge carries rcheck_to_edge / edge_to_rcheck.
struct MessageState {
    std::size_t n = 0;
    int iteration = 0;
    std::vector<Message> edge_to_lcheck;   // left-going on the left edge
    std::vector<Message> lcheck_to_edge;   // right-going on the left edge
    std::vector<Message> rcheck_to_edge;   // left-going on the right edge
    std::vector<Message> edge_to_rcheck;   // right-going on the right edge

    std::size_t idx(std::size_t i, std::size_t j) const { return i * n + j; }
};

enum class InitMode {
    RandomPsdRank2,  // Haar-rotated diag(Exp(1), Exp(1))
    Rank1,           // second eigenvalue zero
    Diagonal,        // no rotation
};

enum class Degeneracy { Rank1, Diagonal, Generic };

struct SpaConfig {
    int max_iters = 2000;
    double conv_tol = 1e-10;
    /// Blend weight of the fresh update: mu_t = damping * f + (1-damping) *
    /// mu_{t-1}. 0.5 is the midpoint rule; 1 is the undamped SPA.
    double damping = 0.5;
    InitMode init_mode = InitMode::RandomPsdRank2;
    std::uint64_t seed = 0;
    /// Replace zero theta entries by a 1e-12 perturbation instead of
    /// rejecting them (changes the model).
    bool zero_perturb = false;
    /// Relative threshold separating the degeneracy classes.
    double degeneracy_tol = 1e-6;

    void validate() const;
};

/// Node beliefs: one n x n matrix per left/right check node (row-major),
/// one 2 x 2 matrix per edge pair. Every matrix sums to 1.
struct Beliefs {
    std::size_t n = 0;
    std::vector<std::vector<cplx>> left;   // n matrices of n*n entries
    std::vector<std::vector<cplx>> right;
    std::vector<Mat2> edge;                // n*n entries
};

struct EnergyTerms {
    double average_energy = 0.0;  // U_B
    double entropy = 0.0;         // H_B
    double free_energy = 0.0;     // F_B = U_B - H_B
    double imag_residue = 0.0;
    bool branch_cut_warning = false;
};

struct SpaResult {
    double zb_spa = 0.0;      // exp(-F_B)
    double log_zb_spa = 0.0;  // -F_B
    bool converged = false;
    int iterations = 0;
    Degeneracy degeneracy = Degeneracy::Generic;
    Beliefs beliefs;
    EnergyTerms energy;
    double consistency_residual = 0.0;
};

/// Draws the left-going families i.i.d. per the init mode (normalized by
/// the (0,0) entry) and derives the right-going ones by one edge-node
/// update.
MessageState init_messages(const DenfgModel& model, const SpaConfig& config,
                           Rng& rng);

/// One flooding round: all check-node outputs from the previous iteration's
/// edge outputs, then all edge-node updates; every fresh message is damped
/// against its predecessor and renormalized. Returns the maximum Frobenius
/// movement of the trace-normalized messages.
double spa_step(MessageState& state, const DenfgModel& model,
                const SpaConfig& config);

/// Iterates to the fixed point (or max_iters), then extracts beliefs,
/// Bethe free energy, the degree-of-degeneracy class and the edge
/// consistency residual. Non-convergence is reported, not thrown.
SpaResult run_spa(const DenfgModel& model, const SpaConfig& config);

Beliefs beliefs_from_messages(const MessageState& state,
                              const DenfgModel& model);

/// U_B, H_B, F_B with the principal complex logarithm, 0 ln 0 = 0, and
/// conjugate off-diagonal pairs evaluated as 2 Re(b ln b).
EnergyTerms bethe_free_energy(const Beliefs& beliefs, const DenfgModel& model);

Degeneracy classify_degeneracy(const MessageState& state, double tol = 1e-6);

/// Largest violation of the marginalization constraints tying node beliefs
/// to edge beliefs.
double edge_consistency_residual(const Beliefs& beliefs);

const char* degeneracy_name(Degeneracy d);

// ---- scalar SPA on the single-edge permanent graph ----

struct ScalarSpaResult {
    cplx perm_b = {0.0, 0.0};  // exp(-F_B); complex for complex theta
    cplx log_perm_b = {0.0, 0.0};
    bool converged = false;
    int iterations = 0;
};

/// Sum-product on the single-edge graph of theta with the same flooding
/// schedule and damping; for non-negative real theta this is the classical
/// Bethe permanent estimate. Requires nonzero entries.
ScalarSpaResult spa_nfg_scalar(const ComplexMatrix& theta,
                               const SpaConfig& config);

} // namespace denfg

#endif
