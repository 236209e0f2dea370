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

#ifndef DENFG_ENSEMBLES_HPP
#define DENFG_ENSEMBLES_HPP

#include <cstdint>

#include "denfg/complex_matrix.hpp"
#include "denfg/rng.hpp"

namespace denfg {

/// Entry-wise i.i.d. complex ensemble on the sector
/// { r e^{i phi} : r >= 0, |phi| <= alpha }: Rayleigh-type radius with
/// density 2 r exp(-r^2), phase uniform on [-alpha, alpha]. alpha = 0 is the
/// non-negative real case, alpha = pi the standard complex Gaussian.
struct EnsembleSpec {
    double alpha = 0.0;       // sector half-angle in [0, pi]
    std::size_t n = 1;        // matrix dimension
    std::uint64_t seed = 0;
    std::size_t count = 1;    // number of matrices in the sweep

    void validate() const;
};

/// Mixed moments mu[p][q] = E[theta^p conj(theta)^q] for 0 <= p,q <= 2.
/// Accepts arbitrary tables (e.g. the deterministic all-ones "ensemble");
/// factories cover the sector ensembles.
struct MomentTable {
    cplx mu[3][3] = {};

    MomentTable();

    static MomentTable from_alpha(double alpha);
    static MomentTable gaussian();   // alpha = pi
    static MomentTable all_ones();   // deterministic theta = 1

    cplx operator()(int p, int q) const;

    bool zero_mean(double tol = 1e-12) const;
    /// Cauchy-Schwarz: mu11 >= |mu20| whenever finite.
    bool cauchy_schwarz_ok(double tol = 1e-12) const;
};

/// One draw r e^{i phi}; radius by inverse CDF r = sqrt(-ln(1-U)), phase
/// uniform. Consumes exactly two random words per entry.
cplx sample_entry(double alpha, Rng& rng);

/// n x n matrix of i.i.d. draws for trial `index`. Every entry has its own
/// counter-derived stream, so results do not depend on evaluation order or
/// thread count.
ComplexMatrix sample_matrix(const EnsembleSpec& spec, std::size_t index);

/// Closed-form moments of the sector ensemble. Supported (p,q): (0,0),
/// (1,0), (0,1), (1,1), (2,0), (0,2), (2,1), (1,2), (2,2); all real.
cplx moment_closed_form(int p, int q, double alpha);

/// Numerical-integration oracle for moment_closed_form: radial integral on
/// [0, 8] (tail mass < 1e-27) to 1e-10 absolute, angular factor exact.
/// Valid for p, q >= 0 with p + q <= 6.
cplx moment_quadrature(int p, int q, double alpha);

} // namespace denfg

#endif
