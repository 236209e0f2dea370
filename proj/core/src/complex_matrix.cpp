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

#include "denfg/complex_matrix.hpp"

#include <cmath>

namespace denfg {

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<cplx>> rows) {
    n_ = rows.size();
    if (n_ == 0) throw domain_error("matrix dimension must be >= 1");
    a_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) throw domain_error("matrix must be square");
        for (const cplx& v : row) a_.push_back(v);
    }
}

ComplexMatrix ComplexMatrix::all_ones(std::size_t n) {
    ComplexMatrix m(n);
    for (auto& v : m.a_) v = cplx{1.0, 0.0};
    return m;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx{1.0, 0.0};
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = std::conj(a_[k]);
    return m;
}

ComplexMatrix ComplexMatrix::abs2() const {
    ComplexMatrix m(n_);
    for (std::size_t k = 0; k < a_.size(); ++k)
        m.a_[k] = cplx{std::norm(a_[k]), 0.0};
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const cplx& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

bool ComplexMatrix::is_real_nonnegative(double tol) const {
    for (const cplx& v : a_)
        if (std::abs(v.imag()) > tol || v.real() < -tol) return false;
    return true;
}

} // namespace denfg
