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

#include "denfg/factorgraph.hpp"

#include <cmath>
#include <cstdint>

#include "denfg/errors.hpp"

namespace denfg {

double Mat2::frobenius() const {
    return std::sqrt(std::norm(a00) + std::norm(a01) + std::norm(a10) +
                     std::norm(a11));
}

double Mat2::herm_defect() const {
    double d = std::abs(a00 - std::conj(a00));
    d = std::max(d, std::abs(a11 - std::conj(a11)));
    d = std::max(d, std::abs(a01 - std::conj(a10)));
    return d;
}

double Mat2::min_eig_herm() const {
    const double h00 = a00.real();
    const double h11 = a11.real();
    const cplx h01 = 0.5 * (a01 + std::conj(a10));
    const double mean = 0.5 * (h00 + h11);
    const double disc =
        std::sqrt(0.25 * (h00 - h11) * (h00 - h11) + std::norm(h01));
    return mean - disc;
}

Mat2 hadamard(const Mat2& a, const Mat2& b) {
    return Mat2{a.a00 * b.a00, a.a01 * b.a01, a.a10 * b.a10, a.a11 * b.a11};
}

DenfgModel build_denfg(const ComplexMatrix& theta,
                       const ComplexMatrix& epsilon) {
    const std::size_t n = theta.n();
    if (epsilon.n() != n)
        throw domain_error("build_denfg: dimension mismatch");
    if (!theta.all_finite() || !epsilon.all_finite())
        throw domain_error("build_denfg: non-finite entries");
    if (!epsilon.is_real_nonnegative())
        throw domain_error("build_denfg: epsilon must be real and >= 0");

    DenfgModel model{theta, epsilon, {}};
    model.w.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx t = theta(i, j);
            const double eps = epsilon(i, j).real();
            model.w.push_back(Mat2{cplx{1.0, 0.0}, std::conj(t), t,
                                   cplx{std::norm(t) + eps, 0.0}});
        }
    return model;
}

DenfgModel build_denfg(const ComplexMatrix& theta) {
    return build_denfg(theta, ComplexMatrix::zero(theta.n()));
}

namespace {

// Exactly-one-of indicator over a row/column slice of a 0/1 assignment.
bool exactly_one(const std::uint32_t* bits, std::size_t count) {
    std::size_t ones = 0;
    for (std::size_t k = 0; k < count; ++k) ones += bits[k];
    return ones == 1;
}

} // namespace

cplx partition_sum_nfg_bruteforce(const ComplexMatrix& theta) {
    const std::size_t n = theta.n();
    if (n > 4) throw size_limit_error("partition_sum_nfg_bruteforce: n > 4");

    const std::size_t cells = n * n;
    const std::uint64_t total = std::uint64_t{1} << cells;
    std::uint32_t x[16];

    cplx z{0.0, 0.0};
    for (std::uint64_t cfg = 0; cfg < total; ++cfg) {
        for (std::size_t c = 0; c < cells; ++c) x[c] = (cfg >> c) & 1u;

        bool ok = true;
        for (std::size_t i = 0; ok && i < n; ++i)
            ok = exactly_one(&x[i * n], n);          // left check nodes
        for (std::size_t j = 0; ok && j < n; ++j) {  // right check nodes
            std::size_t ones = 0;
            for (std::size_t i = 0; i < n; ++i) ones += x[i * n + j];
            ok = (ones == 1);
        }
        if (!ok) continue;

        cplx g{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (x[i * n + j]) g *= theta(i, j);
        z += g;
    }
    return z;
}

double partition_sum_denfg_bruteforce(const DenfgModel& model) {
    const std::size_t n = model.n();
    if (n > 3) throw size_limit_error("partition_sum_denfg_bruteforce: n > 3");

    const std::size_t cells = n * n;
    const std::uint64_t total = std::uint64_t{1} << (2 * cells);
    std::uint32_t x[9], xp[9];  // unprimed / primed halves of each symbol

    cplx z{0.0, 0.0};
    for (std::uint64_t cfg = 0; cfg < total; ++cfg) {
        for (std::size_t c = 0; c < cells; ++c) {
            x[c] = (cfg >> (2 * c)) & 1u;
            xp[c] = (cfg >> (2 * c + 1)) & 1u;
        }

        // Check node factors are products of the single-edge indicators over
        // the unprimed and primed components.
        bool ok = true;
        for (std::size_t i = 0; ok && i < n; ++i)
            ok = exactly_one(&x[i * n], n) && exactly_one(&xp[i * n], n);
        for (std::size_t j = 0; ok && j < n; ++j) {
            std::size_t ones = 0, ones_p = 0;
            for (std::size_t i = 0; i < n; ++i) {
                ones += x[i * n + j];
                ones_p += xp[i * n + j];
            }
            ok = (ones == 1) && (ones_p == 1);
        }
        if (!ok) continue;

        cplx g{1.0, 0.0};
        for (std::size_t c = 0; c < cells; ++c) {
            const Mat2& w = model.w[c];
            g *= x[c] ? (xp[c] ? w.a11 : w.a10) : (xp[c] ? w.a01 : w.a00);
        }
        z += g;
    }

    if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z)))
        throw numeric_error(
            "partition_sum_denfg_bruteforce: imaginary residue above bound");
    return z.real();
}

} // namespace denfg
