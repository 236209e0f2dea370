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

#ifndef DENFG_ERRORS_HPP
#define DENFG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace denfg {

/// Input outside the documented parameter domain (bad alpha, negative
/// epsilon, non-bijective permutation, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Instance too large for the requested exact/brute-force path.
class size_limit_error : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Numerical failure: overflow, non-convergent quadrature, degenerate
/// message ratios.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Moment (p,q) outside the closed-form table.
class unsupported_moment_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace denfg

#endif
