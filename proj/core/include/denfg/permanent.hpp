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

#ifndef DENFG_PERMANENT_HPP
#define DENFG_PERMANENT_HPP

#include "denfg/complex_matrix.hpp"

namespace denfg {

/// Exact permanent by summing over all n! permutations in lexicographic
/// order. Ground-truth oracle; n <= 10.
cplx perm_naive(const ComplexMatrix& a);

/// Exact permanent via Ryser inclusion-exclusion with Gray-code subset
/// iteration, O(2^n * n). Deterministic summation order; n <= 30.
cplx perm_ryser(const ComplexMatrix& a);

/// |perm(a)|^2, i.e. the DE-NFG partition sum of the matrix.
double perm_abs2(const ComplexMatrix& a);

} // namespace denfg

#endif
