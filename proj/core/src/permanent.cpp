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

#include "denfg/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "denfg/errors.hpp"

namespace denfg {

cplx perm_naive(const ComplexMatrix& a) {
    const std::size_t n = a.n();
    if (n > 10) throw size_limit_error("perm_naive: n > 10");

    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);

    cplx sum{0.0, 0.0};
    do {
        cplx prod{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) prod *= a(i, sigma[i]);
        sum += prod;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return sum;
}

cplx perm_ryser(const ComplexMatrix& a) {
    const std::size_t n = a.n();
    if (n > 30) throw size_limit_error("perm_ryser: n > 30");

    // Column sums over the current subset S; Gray code flips one column per
    // step so each update is O(n).
    std::vector<cplx> colsum(n, cplx{0.0, 0.0});
    cplx total{0.0, 0.0};
    std::uint32_t gray_prev = 0;

    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const std::uint32_t gray =
            static_cast<std::uint32_t>(k ^ (k >> 1));
        const std::uint32_t changed = gray ^ gray_prev;
        const int j = std::countr_zero(changed);
        const double sign_flip = (gray & changed) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i)
            colsum[i] += sign_flip * a(i, static_cast<std::size_t>(j));
        gray_prev = gray;

        cplx prod{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) prod *= colsum[i];

        const int popcnt = std::popcount(gray);
        total += (popcnt % 2 == 0) ? -prod : prod;
    }
    // Ryser sign (-1)^n * (-1)^{|S|}; the |S| part is folded in above.
    if (n % 2 == 0) total = -total;
    return total;
}

double perm_abs2(const ComplexMatrix& a) { return std::norm(perm_ryser(a)); }

} // namespace denfg
