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

#ifndef DENFG_COMBINATORICS_EXACT_HPP
#define DENFG_COMBINATORICS_EXACT_HPP

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace denfg {

using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

/// Exact-rational cycle index via the same recurrence; cross-check mode for
/// the floating-point path, n <= 20.
rational exact_cycle_index(std::size_t n, const std::vector<rational>& z);

/// Exact psi_n(a,b,m,c) = (n!)^2 Z_n with z_1 = a, z_k = m b^k + c^k.
rational exact_psi(std::size_t n, const rational& a, const rational& b,
                   const rational& m, const rational& c);

/// Exact squared degree-2 Bethe partition sum of the all-ones matrix;
/// always an integer.
bigint exact_zb2_sq_all_ones(std::size_t n);

} // namespace denfg

#endif
