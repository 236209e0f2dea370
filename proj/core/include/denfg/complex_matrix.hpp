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

#ifndef DENFG_COMPLEX_MATRIX_HPP
#define DENFG_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "denfg/errors.hpp"

namespace denfg {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major. Also used for non-negative real
/// matrices (imaginary parts zero) and for 2n x 2n lifted matrices.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n, cplx{0.0, 0.0}) {
        if (n == 0) throw domain_error("matrix dimension must be >= 1");
    }

    /// Row-major nested initializer, e.g. {{1, 2}, {3, 4}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix all_ones(std::size_t n);
    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n); }

    std::size_t n() const { return n_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const {
        return a_[i * n_ + j];
    }

    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    ComplexMatrix conjugate() const;

    /// Entry-wise squared modulus |a_ij|^2 (real-valued result).
    ComplexMatrix abs2() const;

    bool all_finite() const;

    /// True when every entry has |imag| <= tol and real part >= -tol.
    bool is_real_nonnegative(double tol = 0.0) const;

    bool operator==(const ComplexMatrix& other) const = default;

private:
    std::size_t n_ = 0;
    std::vector<cplx> a_;
};

} // namespace denfg

#endif
