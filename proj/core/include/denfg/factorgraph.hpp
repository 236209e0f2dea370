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

#ifndef DENFG_FACTORGRAPH_HPP
#define DENFG_FACTORGRAPH_HPP

#include <vector>

#include "denfg/complex_matrix.hpp"

namespace denfg {

/// 2x2 complex matrix indexed by the pair alphabet {0,1}^2.
struct Mat2 {
    cplx a00{0.0, 0.0}, a01{0.0, 0.0}, a10{0.0, 0.0}, a11{0.0, 0.0};

    cplx det() const { return a00 * a11 - a01 * a10; }
    cplx trace() const { return a00 + a11; }
    cplx sum() const { return a00 + a01 + a10 + a11; }
    double frobenius() const;
    double herm_defect() const;    // || M - M^H ||_max
    double min_eig_herm() const;   // smallest eigenvalue of (M + M^H)/2
};

Mat2 hadamard(const Mat2& a, const Mat2& b);

/// The double-edge graph for |perm(theta)|^2: per pair (i,j) the edge
/// weight matrix W_ij = [[1, conj(t)], [t, |t|^2 + eps]], Hermitian PSD with
/// det(W_ij) = eps_ij; rank one iff eps_ij = 0.
struct DenfgModel {
    ComplexMatrix theta;
    ComplexMatrix epsilon;       // real non-negative entries
    std::vector<Mat2> w;         // row-major, n*n entries

    std::size_t n() const { return theta.n(); }
    const Mat2& weight(std::size_t i, std::size_t j) const {
        return w[i * n() + j];
    }
};

/// Validates epsilon (real, >= 0) and assembles the edge weight matrices.
DenfgModel build_denfg(const ComplexMatrix& theta, const ComplexMatrix& epsilon);

DenfgModel build_denfg(const ComplexMatrix& theta);  // epsilon = 0

/// Partition sum of the single-edge graph by enumerating all 2^{n^2}
/// assignments of the collapsed edge variables; equals perm(theta). n <= 4.
cplx partition_sum_nfg_bruteforce(const ComplexMatrix& theta);

/// Partition sum of the double-edge graph by enumerating all 4^{n^2}
/// collapsed assignments; equals |perm(theta)|^2 at eps = 0 and perm(eps) at
/// theta = 0. Imaginary residue below 1e-9*(1+|Z|) is asserted and dropped.
/// n <= 3.
double partition_sum_denfg_bruteforce(const DenfgModel& model);

} // namespace denfg

#endif
