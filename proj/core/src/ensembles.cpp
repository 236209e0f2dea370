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

#include "denfg/ensembles.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "denfg/errors.hpp"

namespace denfg {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= kPi))
        throw domain_error("alpha must lie in [0, pi]");
}

// sin(k*alpha)/(k*alpha), with the alpha = 0 ensemble handled by its own
// branch before we get here.
double phase_factor(int k, double alpha) {
    if (k == 0) return 1.0;
    return std::sin(k * alpha) / (k * alpha);
}

} // namespace

void EnsembleSpec::validate() const {
    check_alpha(alpha);
    if (n < 1) throw domain_error("ensemble: n must be >= 1");
    if (count < 1) throw domain_error("ensemble: count must be >= 1");
}

MomentTable::MomentTable() { mu[0][0] = cplx{1.0, 0.0}; }

MomentTable MomentTable::from_alpha(double alpha) {
    check_alpha(alpha);
    MomentTable t;
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2; ++q) t.mu[p][q] = moment_closed_form(p, q, alpha);
    return t;
}

MomentTable MomentTable::gaussian() { return from_alpha(kPi); }

MomentTable MomentTable::all_ones() {
    MomentTable t;
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2; ++q) t.mu[p][q] = cplx{1.0, 0.0};
    return t;
}

cplx MomentTable::operator()(int p, int q) const {
    if (p < 0 || p > 2 || q < 0 || q > 2)
        throw unsupported_moment_error("moment (" + std::to_string(p) + "," +
                                       std::to_string(q) +
                                       ") outside the 0..2 table");
    return mu[p][q];
}

bool MomentTable::zero_mean(double tol) const {
    return std::abs(mu[1][0]) <= tol;
}

bool MomentTable::cauchy_schwarz_ok(double tol) const {
    return mu[1][1].real() + tol >= std::abs(mu[2][0]);
}

cplx sample_entry(double alpha, Rng& rng) {
    check_alpha(alpha);
    const double u_r = rng.uniform01();
    const double u_phi = rng.uniform01();
    const double r = std::sqrt(-std::log1p(-u_r));
    // phi = alpha * (2u - 1) is exactly 0 at alpha = 0, so every entry
    // consumes two words regardless of alpha.
    const double phi = alpha * (2.0 * u_phi - 1.0);
    return std::polar(r, phi);
}

ComplexMatrix sample_matrix(const EnsembleSpec& spec, std::size_t index) {
    spec.validate();
    if (index >= spec.count)
        throw domain_error("sample_matrix: index >= spec.count");
    ComplexMatrix m(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t j = 0; j < spec.n; ++j) {
            Rng rng(derive_key(spec.seed, index, i * spec.n + j));
            m(i, j) = sample_entry(spec.alpha, rng);
        }
    return m;
}

cplx moment_closed_form(int p, int q, double alpha) {
    check_alpha(alpha);
    // Conjugate symmetry: mu[q][p] = conj(mu[p][q]); all values real here.
    if (p < q) return std::conj(moment_closed_form(q, p, alpha));

    const bool degenerate = (alpha == 0.0);
    if (p == 0 && q == 0) return cplx{1.0, 0.0};
    if (p == 1 && q == 0)
        return cplx{0.5 * kSqrtPi * (degenerate ? 1.0 : phase_factor(1, alpha)),
                    0.0};
    if (p == 1 && q == 1) return cplx{1.0, 0.0};
    if (p == 2 && q == 0)
        return cplx{degenerate ? 1.0 : phase_factor(2, alpha), 0.0};
    if (p == 2 && q == 1)
        return cplx{0.75 * kSqrtPi * (degenerate ? 1.0 : phase_factor(1, alpha)),
                    0.0};
    if (p == 2 && q == 2) return cplx{2.0, 0.0};
    throw unsupported_moment_error("no closed form for moment (" +
                                   std::to_string(p) + "," +
                                   std::to_string(q) + ")");
}

cplx moment_quadrature(int p, int q, double alpha) {
    check_alpha(alpha);
    if (p < 0 || q < 0 || p + q > 6)
        throw domain_error("moment_quadrature: need p,q >= 0 and p+q <= 6");

    // E[theta^p conj(theta)^q] = E[r^{p+q}] * E[e^{i(p-q)phi}]; the angular
    // factor is exact, only the radial part is integrated numerically.
    const int m = p + q;
    const double angular = (alpha == 0.0) ? 1.0 : phase_factor(p - q, alpha);

    constexpr double kCutoff = 8.0;  // residual radial mass < 1e-27
    constexpr double kTol = 1e-10;
    double err = 0.0;
    const double radial =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            [m](double r) { return std::pow(r, m) * 2.0 * r * std::exp(-r * r); },
            0.0, kCutoff, 12, kTol, &err);
    if (!(err <= 1e-8))
        throw numeric_error("moment_quadrature did not converge; error " +
                            std::to_string(err));
    return cplx{radial * angular, 0.0};
}

} // namespace denfg
