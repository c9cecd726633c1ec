#pragma once

// Smooth compactly supported radial profiles and mode-decomposed test
// functions, including structural membership in the subspaces H_j
// (all modes n >= j+1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace hyhardy {

struct RadialProfile {
    std::function<double(double)> eval;
    std::function<double(double)> deriv;   // analytic, never finite differences
    double support_lo = 0.0;
    double support_hi = 0.0;
};

/// a(r) = exp(-1/((r-s0)(s1-r))) on (s0, s1), zero elsewhere.
inline RadialProfile make_bump(double s0, double s1)
{
    if (!(0.0 <= s0 && s0 < s1))
        throw std::invalid_argument("make_bump: need 0 <= s0 < s1");
    auto val = [s0, s1](double r) {
        if (r <= s0 || r >= s1) return 0.0;
        return std::exp(-1.0 / ((r - s0) * (s1 - r)));
    };
    auto der = [s0, s1, val](double r) {
        if (r <= s0 || r >= s1) return 0.0;
        const double g = (r - s0) * (s1 - r);
        const double gp = s0 + s1 - 2.0 * r;
        return val(r) * gp / (g * g);
    };
    return RadialProfile{val, der, s0, s1};
}

namespace detail {

// One-sided mollifier step: s(x) = B(x)/(B(x)+B(1-x)) with
// B(x) = exp(-1/x) for x > 0; s rises smoothly from 0 to 1 on [0,1].
inline double moll_B(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
inline double moll_Bp(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

inline double smooth_step(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double b = moll_B(x), c = moll_B(1.0 - x);
    return b / (b + c);
}

inline double smooth_step_deriv(double x)
{
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double b = moll_B(x), c = moll_B(1.0 - x);
    const double bp = moll_Bp(x), cp = moll_Bp(1.0 - x);
    const double denom = (b + c) * (b + c);
    return (bp * c + b * cp) / denom;
}

// Chebyshev series and its derivative at x in [-1, 1].
inline std::pair<double, double> cheb_eval(const std::vector<double>& coeff, double x)
{
    double t0 = 1.0, t1 = x;       // T_0, T_1
    double d0 = 0.0, d1 = 1.0;     // T_0', T_1'
    double s = coeff.empty() ? 0.0 : coeff[0];
    double sd = 0.0;
    if (coeff.size() > 1) {
        s += coeff[1] * t1;
        sd += coeff[1] * d1;
    }
    for (std::size_t k = 2; k < coeff.size(); ++k) {
        const double t2 = 2.0 * x * t1 - t0;
        const double d2 = 2.0 * t1 + 2.0 * x * d1 - d0;
        s += coeff[k] * t2;
        sd += coeff[k] * d2;
        t0 = t1; t1 = t2;
        d0 = d1; d1 = d2;
    }
    return {s, sd};
}

// Uniform double in [-1, 1] from the top 53 bits; identical across
// platforms for a given seed.
inline double uniform_pm1(std::mt19937_64& rng)
{
    return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

} // namespace detail

/// Bump-windowed random Chebyshev polynomial, deterministic in the seed.
inline RadialProfile make_random_profile(std::uint64_t seed, double s0, double s1,
                                         int n_knots)
{
    if (n_knots < 3) throw std::invalid_argument("make_random_profile: n_knots >= 3");
    std::mt19937_64 rng(seed);
    std::vector<double> coeff(static_cast<std::size_t>(n_knots));
    for (double& c : coeff) c = detail::uniform_pm1(rng);

    RadialProfile bump = make_bump(s0, s1);
    const double mid = 0.5 * (s0 + s1);
    const double half = 0.5 * (s1 - s0);
    auto val = [coeff, bump, mid, half](double r) {
        if (r <= bump.support_lo || r >= bump.support_hi) return 0.0;
        return detail::cheb_eval(coeff, (r - mid) / half).first * bump.eval(r);
    };
    auto der = [coeff, bump, mid, half](double r) {
        if (r <= bump.support_lo || r >= bump.support_hi) return 0.0;
        auto [p, pd] = detail::cheb_eval(coeff, (r - mid) / half);
        return (pd / half) * bump.eval(r) + p * bump.deriv(r);
    };
    return RadialProfile{val, der, s0, s1};
}

/// Smooth cutoff equal to 1 on [l1, u0], rising on [l0, l1], falling on
/// [u0, u1], zero outside (l0, u1).
inline RadialProfile make_plateau_cutoff(double l0, double l1, double u0, double u1)
{
    if (!(0.0 <= l0 && l0 < l1 && l1 <= u0 && u0 < u1))
        throw std::invalid_argument("make_plateau_cutoff: need l0 < l1 <= u0 < u1");
    auto rise = [l0, l1](double r) { return detail::smooth_step((r - l0) / (l1 - l0)); };
    auto fall = [u0, u1](double r) { return detail::smooth_step((u1 - r) / (u1 - u0)); };
    auto val = [rise, fall](double r) { return rise(r) * fall(r); };
    auto der = [l0, l1, u0, u1, rise, fall](double r) {
        const double rp = detail::smooth_step_deriv((r - l0) / (l1 - l0)) / (l1 - l0);
        const double fp = -detail::smooth_step_deriv((u1 - r) / (u1 - u0)) / (u1 - u0);
        return rp * fall(r) + rise(r) * fp;
    };
    return RadialProfile{val, der, l0, u1};
}

/// Trial family u_eps(r) = r^{-(N-2)/2 + eps} * cutoff, with cutoff equal
/// to 1 on the plateau [2 eps, 1/(2 eps)]; approaches the Hardy constant
/// as eps -> 0.
inline RadialProfile make_hardy_trial(int N, double eps)
{
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("make_hardy_trial: need 0 < eps < 1/2");
    const double p = -(N - 2) / 2.0 + eps;
    RadialProfile cut = make_plateau_cutoff(eps, 2.0 * eps,
                                            0.5 / eps, 1.0 / eps);
    auto val = [p, cut](double r) {
        if (r <= cut.support_lo || r >= cut.support_hi) return 0.0;
        return std::pow(r, p) * cut.eval(r);
    };
    auto der = [p, cut](double r) {
        if (r <= cut.support_lo || r >= cut.support_hi) return 0.0;
        return p * std::pow(r, p - 1.0) * cut.eval(r) + std::pow(r, p) * cut.deriv(r);
    };
    return RadialProfile{val, der, cut.support_lo, cut.support_hi};
}

struct TestFunction {
    ModelManifold manifold;
    std::vector<std::pair<Mode, RadialProfile>> terms;
    int subspace_index = -1;   // j; every mode n >= j+1. -1 means unconstrained.
    double support_lo = 0.0;
    double support_hi = 0.0;
};

inline TestFunction make_testfunction(const ModelManifold& m,
                                      const std::vector<std::pair<int, RadialProfile>>& terms,
                                      int j)
{
    if (j < -1) throw std::invalid_argument("make_testfunction: j >= -1");
    TestFunction u;
    u.manifold = m;
    u.subspace_index = j;
    u.support_lo = std::numeric_limits<double>::infinity();
    u.support_hi = 0.0;
    for (const auto& [n, prof] : terms) {
        if (n < j + 1)
            throw std::invalid_argument("make_testfunction: mode n = " + std::to_string(n) +
                                        " violates H_j membership (need n >= j+1)");
        for (const auto& [mode, other] : u.terms) {
            (void)other;
            if (mode.n == n)
                throw std::invalid_argument("make_testfunction: duplicate mode " +
                                            std::to_string(n));
        }
        u.terms.emplace_back(make_mode(m.dimension, n), prof);
        u.support_lo = std::min(u.support_lo, prof.support_lo);
        u.support_hi = std::max(u.support_hi, prof.support_hi);
    }
    return u;
}

} // namespace hyhardy
