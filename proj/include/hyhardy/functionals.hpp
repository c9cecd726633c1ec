#pragma once

// Integral functionals on mode-decomposed test functions, reduced to
// radial integrals through the orthonormality of the spherical
// harmonics. Per-mode contributions are summed in fixed mode order.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"

namespace hyhardy {

using RadialWeight = std::function<double(double)>;

namespace weights {
inline RadialWeight one() { return [](double) { return 1.0; }; }
inline RadialWeight power(double p)
{
    return [p](double r) { return std::pow(r, p); };
}
} // namespace weights

struct FunctionalValue {
    double value = 0.0;
    std::vector<std::pair<int, double>> per_mode;
    bool quadrature_converged = true;
    int panels_used = 0;

    FunctionalValue& add(int n, const IntegralResult& res)
    {
        value += res.value;
        per_mode.emplace_back(n, res.value);
        quadrature_converged = quadrature_converged && res.converged;
        panels_used += res.panels_used;
        return *this;
    }
};

namespace detail {

template <class Integrand>
FunctionalValue per_mode_sum(const TestFunction& u, Integrand&& radial,
                             const QuadratureSpec& spec)
{
    FunctionalValue out;
    for (const auto& [mode, prof] : u.terms) {
        auto integrand = [&, &mode = mode, &prof = prof](double r) {
            return radial(mode, prof, r);
        };
        out.add(mode.n, integrate_radial(integrand, prof.support_lo,
                                         prof.support_hi, spec));
    }
    return out;
}

} // namespace detail

/// Dirichlet energy with weight V:
/// sum_n int V (a_n'^2 + lambda_n a_n^2 / psi^2) psi^{N-1} dr.
inline FunctionalValue dirichlet(const TestFunction& u, const RadialWeight& V,
                                 const QuadratureSpec& spec = {})
{
    return detail::per_mode_sum(u, [&](const Mode& m, const RadialProfile& p, double r) {
        const double psi = u.manifold.psi(r);
        const double a = p.eval(r), ad = p.deriv(r);
        return V(r) * (ad * ad + static_cast<double>(m.eigenvalue) * a * a / (psi * psi)) *
               u.manifold.volume_density(r);
    }, spec);
}

/// Radial Dirichlet energy: sum_n int V a_n'^2 psi^{N-1} dr.
inline FunctionalValue radial_dirichlet(const TestFunction& u, const RadialWeight& V,
                                        const QuadratureSpec& spec = {})
{
    return detail::per_mode_sum(u, [&](const Mode&, const RadialProfile& p, double r) {
        const double ad = p.deriv(r);
        return V(r) * ad * ad * u.manifold.volume_density(r);
    }, spec);
}

/// int W u^2 dv = sum_n int W a_n^2 psi^{N-1} dr.
inline FunctionalValue mass(const TestFunction& u, const RadialWeight& W,
                            const QuadratureSpec& spec = {})
{
    return detail::per_mode_sum(u, [&](const Mode&, const RadialProfile& p, double r) {
        const double a = p.eval(r);
        return W(r) * a * a * u.manifold.volume_density(r);
    }, spec);
}

/// int V u^2 / psi^2 dv = sum_n int V a_n^2 psi^{N-3} dr.
inline FunctionalValue mass_over_psi2(const TestFunction& u, const RadialWeight& V,
                                      const QuadratureSpec& spec = {})
{
    return detail::per_mode_sum(u, [&](const Mode&, const RadialProfile& p, double r) {
        const double a = p.eval(r);
        const double psi = u.manifold.psi(r);
        return V(r) * a * a / (psi * psi) * u.manifold.volume_density(r);
    }, spec);
}

/// Radial ground-state remainder:
/// sum_n int V f^2 (d/dr (a_n / f))^2 psi^{N-1} dr with
/// d/dr (a_n/f) = (a_n' f - a_n f') / f^2.
inline FunctionalValue remainder(const TestFunction& u, const RadialWeight& V,
                                 const std::function<double(double)>& f,
                                 const std::function<double(double)>& f_prime,
                                 const QuadratureSpec& spec = {})
{
    return detail::per_mode_sum(u, [&](const Mode&, const RadialProfile& p, double r) {
        const double fv = f(r);
        const double q = (p.deriv(r) * fv - p.eval(r) * f_prime(r)) / (fv * fv);
        return V(r) * fv * fv * q * q * u.manifold.volume_density(r);
    }, spec);
}

/// Full-gradient remainder:
/// sum_n int V f^2 [(d/dr (a_n/f))^2 + lambda_n (a_n/f)^2 / psi^2] psi^{N-1} dr.
inline FunctionalValue full_remainder(const TestFunction& u, const RadialWeight& V,
                                      const std::function<double(double)>& f,
                                      const std::function<double(double)>& f_prime,
                                      const QuadratureSpec& spec = {})
{
    return detail::per_mode_sum(u, [&](const Mode& m, const RadialProfile& p, double r) {
        const double fv = f(r);
        const double psi = u.manifold.psi(r);
        const double ratio = p.eval(r) / fv;
        const double q = (p.deriv(r) * fv - p.eval(r) * f_prime(r)) / (fv * fv);
        return V(r) * fv * fv *
               (q * q + static_cast<double>(m.eigenvalue) * ratio * ratio / (psi * psi)) *
               u.manifold.volume_density(r);
    }, spec);
}

/// int V (f'/f) (psi'/psi - 1/r) u^2 dv; on the hyperbolic model the
/// second factor is coth r - 1/r, on the Euclidean one it vanishes.
inline FunctionalValue coth_term(const TestFunction& u, const RadialWeight& V,
                                 const std::function<double(double)>& f,
                                 const std::function<double(double)>& f_prime,
                                 const QuadratureSpec& spec = {})
{
    if (u.manifold.name == "euclidean") {
        FunctionalValue out;
        for (const auto& [mode, prof] : u.terms) {
            (void)prof;
            out.per_mode.emplace_back(mode.n, 0.0);
        }
        return out;
    }
    return detail::per_mode_sum(u, [&](const Mode&, const RadialProfile& p, double r) {
        const double a = p.eval(r);
        return V(r) * (f_prime(r) / f(r)) * u.manifold.log_deriv_minus_inv(r) * a * a *
               u.manifold.volume_density(r);
    }, spec);
}

struct CknTerms {
    FunctionalValue radial_energy;   // int r^{-alpha} |grad_r u|^2 dv
    FunctionalValue cross_mass;      // int r^{alpha - 2 beta + 2} u^2 dv
    FunctionalValue beta_mass;       // int r^{-beta} u^2 dv
};

inline CknTerms ckn_terms(const TestFunction& u, double alpha, double beta,
                          const QuadratureSpec& spec = {})
{
    return CknTerms{
        radial_dirichlet(u, weights::power(-alpha), spec),
        mass(u, weights::power(alpha - 2.0 * beta + 2.0), spec),
        mass(u, weights::power(-beta), spec),
    };
}

/// int u (du/dr) r^{1-m} dv = sum_n int a_n a_n' r^{1-m} psi^{N-1} dr.
inline FunctionalValue radial_cross_term(const TestFunction& u, double m,
                                         const QuadratureSpec& spec = {})
{
    return detail::per_mode_sum(u, [&](const Mode&, const RadialProfile& p, double r) {
        return p.eval(r) * p.deriv(r) * std::pow(r, 1.0 - m) *
               u.manifold.volume_density(r);
    }, spec);
}

/// D_m(u) = int u u_r r^{1-m} dv + ((N-m)/2) int u^2 r^{-m} dv.
/// Vanishes identically on the Euclidean model (integration by parts);
/// on other models it measures the defect of that step.
inline double divergence_residual(const TestFunction& u, double m,
                                  const QuadratureSpec& spec = {},
                                  bool* converged = nullptr)
{
    const FunctionalValue cross = radial_cross_term(u, m, spec);
    const FunctionalValue msq = mass(u, weights::power(-m), spec);
    if (converged)
        *converged = cross.quadrature_converged && msq.quadrature_converged;
    const double N = u.manifold.dimension;
    return cross.value + 0.5 * (N - m) * msq.value;
}

} // namespace hyhardy
