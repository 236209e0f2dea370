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

#ifndef DENFG_COVERS_HPP
#define DENFG_COVERS_HPP

#include <cstdint>
#include <vector>

#include "denfg/complex_matrix.hpp"
#include "denfg/rng.hpp"

namespace denfg {

/// Double-cover edge choice per base edge: bit 0 = parallel, 1 = crossed.
struct CoverAssignment {
    std::size_t n = 0;
    std::vector<std::uint8_t> bits;  // row-major n*n

    static CoverAssignment from_mask(std::size_t n, std::uint64_t mask);
    std::uint64_t to_mask() const;

    bool crossed(std::size_t i, std::size_t j) const { return bits[i * n + j]; }
};

/// 2n x 2n lifted matrix: parallel bits keep both copies of theta_ij on the
/// same layer, crossed bits swap layers. perm(lift) is the partition sum of
/// the corresponding 2-cover of the permanent graph.
ComplexMatrix lift_matrix(const ComplexMatrix& theta,
                          const CoverAssignment& cover);

/// Degree-2 Bethe partition sum of the double-edge permanent graph:
/// sqrt of the uniform average of |perm(lift)|^2 over all 2^{n^2} covers.
/// Kahan-compensated accumulation, deterministic little-endian counter
/// order; the enumeration is chunked so thread count never changes the
/// result. n <= 4.
double zb2_denfg_exact(const ComplexMatrix& theta, unsigned threads = 1);

struct SampledEstimate {
    double estimate = 0.0;
    double std_error = 0.0;  // delta-method error of the square root
};

/// Monte Carlo estimate over uniform i.i.d. covers (unbiased for the
/// squared quantity; the square root is biased O(1/samples)). With
/// `exhaustive` set, enumerates all covers instead (n <= 4, std_error 0).
SampledEstimate zb2_denfg_sampled(const ComplexMatrix& theta,
                                  std::size_t samples, Rng& rng,
                                  bool exhaustive = false);

/// Uniform cover average of perm(lift); equals the cycle-sum value below.
/// n <= 4.
cplx cover_average_perm_lift(const ComplexMatrix& theta, unsigned threads = 1);

/// Squared degree-2 Bethe permanent of the single-edge graph via the cycle
/// sum over permutation pairs weighted by 2^{-#nontrivial cycles}. n <= 6.
cplx permB2_nfg_cyclesum(const ComplexMatrix& theta);

/// Partition sum of one 2-cover evaluated through the diagonalizing
/// transform: signed check nodes plus diagonal edge weights
/// diag(1, t, +/-t, t^2), enumerated over the permutation-pair
/// parametrization of valid configurations. Must equal perm(lift). n <= 5.
/// `reverse_cycle_order` reverses the cycle labelling (result-invariant).
cplx z_cover_transformed(const ComplexMatrix& theta,
                         const CoverAssignment& cover,
                         bool reverse_cycle_order = false);

} // namespace denfg

#endif
