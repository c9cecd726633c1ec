#pragma once

// Bessel pairs (V, W) on (0, R): weights such that
// (r^{N-1} V y')' + r^{N-1} W y = 0 admits a positive solution.
// Catalog pairs (power weights, the Poincare family with solution
// Psi_lambda) carry analytic derivatives; user pairs are validated by
// numerical ODE solution.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace hyhardy {

struct BesselPair {
    int dimension = 3;                       // N of the r^{N-1} prefactor
    std::function<double(double)> V;
    std::function<double(double)> V_prime;
    std::function<double(double)> W;
    std::function<double(double)> f;         // candidate positive solution
    std::function<double(double)> f_prime;
    std::function<double(double)> f_second;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    std::string name = "user";
};

/// Spectral parameter bundle: lambda in [0, ((N-1)/2)^2],
/// gamma = sqrt((N-1)^2 - 4 lambda), h = (gamma + 1)/2.
struct PoincareWeight {
    int N;
    double lambda;
    double gamma;
    double h;
};

inline double poincare_lambda1(int N) { return 0.25 * (N - 1.0) * (N - 1.0); }

inline PoincareWeight make_poincare_weight(int N, double lambda)
{
    if (N < 2) throw std::invalid_argument("make_poincare_weight: N >= 2");
    if (!(lambda >= 0.0 && lambda <= poincare_lambda1(N)))
        throw std::invalid_argument("make_poincare_weight: lambda outside [0, ((N-1)/2)^2]");
    const double gamma = std::sqrt((N - 1.0) * (N - 1.0) - 4.0 * lambda);
    return PoincareWeight{N, lambda, gamma, 0.5 * (gamma + 1.0)};
}

struct PsiEval {
    double value;
    double first;
    double second;
};

/// Psi_lambda(r) = r^{-(N-2)/2} (sinh r / r)^{-(N-1+gamma)/2} with
/// analytic first and second derivatives. The first derivative comes
/// from the logarithmic form
///   Psi'/Psi = -(N-2)/(2r) - ((N-1+gamma)/2)(coth r - 1/r),
/// the second from
///   Psi''/Psi = (1-N-g)^2/4 + (g^2-1)/(4 r^2)
///             - (1-N-g)(1+N+g)/(4 sinh^2 r) + (1-N-g) h coth(r)/r.
inline PsiEval psi_lambda(const PoincareWeight& pw, double r)
{
    if (!(r > 0.0)) throw std::domain_error("psi_lambda: r must be > 0");
    const double N = pw.N, g = pw.gamma, h = pw.h;
    const double value = std::pow(r, -(N - 2.0) / 2.0) *
                         std::pow(std::sinh(r) / r, -(N - 1.0 + g) / 2.0);
    const double logd = -(N - 2.0) / (2.0 * r) -
                        0.5 * (N - 1.0 + g) * coth_minus_inv(r);
    const double sh = std::sinh(r);
    const double bracket = 0.25 * (1.0 - N - g) * (1.0 - N - g) +
                           0.25 * (g * g - 1.0) / (r * r) -
                           0.25 * (1.0 - N - g) * (1.0 + N + g) / (sh * sh) +
                           (1.0 - N - g) * h * (1.0 / std::tanh(r)) / r;
    return PsiEval{value, value * logd, value * bracket};
}

/// The Poincare potential
///   W_lambda(r) = lambda + h^2/r^2 + ((N-2)^2/4 - h^2)/sinh^2 r
///               + (gamma h / r + (N-1) Psi'/Psi)(coth r - 1/r).
inline double w_lambda(const PoincareWeight& pw, double r)
{
    if (!(r > 0.0)) throw std::domain_error("w_lambda: r must be > 0");
    const double N = pw.N, g = pw.gamma, h = pw.h;
    const double cmi = coth_minus_inv(r);
    const double logd = -(N - 2.0) / (2.0 * r) - 0.5 * (N - 1.0 + g) * cmi;
    const double sh = std::sinh(r);
    return pw.lambda + h * h / (r * r) +
           (0.25 * (N - 2.0) * (N - 2.0) - h * h) / (sh * sh) +
           (g * h / r + (N - 1.0) * logd) * cmi;
}

/// The pair (r^{N-1}, r^{N-1} W_lambda) with solution Psi_lambda.
inline BesselPair poincare_pair(int N, double lambda)
{
    const PoincareWeight pw = make_poincare_weight(N, lambda);
    BesselPair bp;
    bp.dimension = N;
    bp.V = [](double) { return 1.0; };
    bp.V_prime = [](double) { return 0.0; };
    bp.W = [pw](double r) { return w_lambda(pw, r); };
    bp.f = [pw](double r) { return psi_lambda(pw, r).value; };
    bp.f_prime = [pw](double r) { return psi_lambda(pw, r).first; };
    bp.f_second = [pw](double r) { return psi_lambda(pw, r).second; };
    bp.name = "poincare";
    return bp;
}

/// The power-weight pair (r^{N-1} r^{-alpha},
/// r^{N-1} ((N-alpha-2)/2)^2 r^{-alpha-2}) with solution
/// f(r) = r^{-(N-alpha-2)/2} on (0, inf).
inline BesselPair power_pair(int N, double alpha)
{
    if (N < 2) throw std::invalid_argument("power_pair: N >= 2");
    const double c = 0.5 * (N - alpha - 2.0);
    BesselPair bp;
    bp.dimension = N;
    bp.V = [alpha](double r) { return std::pow(r, -alpha); };
    bp.V_prime = [alpha](double r) { return -alpha * std::pow(r, -alpha - 1.0); };
    bp.W = [alpha, c](double r) { return c * c * std::pow(r, -alpha - 2.0); };
    bp.f = [c](double r) { return std::pow(r, -c); };
    bp.f_prime = [c](double r) { return -c * std::pow(r, -c - 1.0); };
    bp.f_second = [c](double r) { return c * (c + 1.0) * std::pow(r, -c - 2.0); };
    bp.name = "power";
    return bp;
}

struct PairValidation {
    double max_residual = 0.0;
    bool positive = true;
    double first_nonpositive_r = std::numeric_limits<double>::quiet_NaN();
};

/// Max over the grid of the relative ODE residual
///   |(r^{N-1} V f')' + r^{N-1} W f| / (|r^{N-1} V f''| + |r^{N-1} W f| + eps),
/// with the outer derivative expanded analytically:
///   (r^{N-1} V f')' = r^{N-1} [V f'' + (V' + (N-1) V / r) f'].
inline PairValidation validate_pair(const BesselPair& bp, const std::vector<double>& grid)
{
    PairValidation out;
    const double N = bp.dimension;
    for (double r : grid) {
        const double fr = bp.f(r);
        if (!(fr > 0.0) && out.positive) {
            out.positive = false;
            out.first_nonpositive_r = r;
        }
        const double rn = std::pow(r, N - 1.0);
        const double t_second = rn * bp.V(r) * bp.f_second(r);
        const double t_first = rn * (bp.V_prime(r) + (N - 1.0) * bp.V(r) / r) * bp.f_prime(r);
        const double t_mass = rn * bp.W(r) * fr;
        const double num = std::abs(t_second + t_first + t_mass);
        const double den = std::abs(t_second) + std::abs(t_mass) + 1e-300;
        out.max_residual = std::max(out.max_residual, num / den);
    }
    return out;
}

inline std::vector<double> geometric_grid(double lo, double hi, int points)
{
    if (!(0.0 < lo && lo < hi) || points < 2)
        throw std::invalid_argument("geometric_grid: bad arguments");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    return g;
}

struct OdeSolution {
    std::vector<double> r;
    std::vector<double> y;
    bool complete = true;               // false if step size underflowed
    bool sign_change = false;
    double sign_change_r = std::numeric_limits<double>::quiet_NaN();
};

/// Adaptive RK integration of the first-order system for
/// (y, p = r^{N-1} V y') from interior initial data; reports the first
/// sign change of y as a positivity certificate.
inline OdeSolution solve_pair(int N,
                              const std::function<double(double)>& V,
                              const std::function<double(double)>& W,
                              double r0, double r1,
                              double y0, double yp0,
                              double tol = 1e-10)
{
    if (!(r0 > 0.0 && r0 < r1))
        throw std::invalid_argument("solve_pair: need 0 < r0 < r1");
    auto rhs = [&](double r, double y, double p, double& dy, double& dp) {
        const double rv = std::pow(r, N - 1.0) * V(r);
        dy = p / rv;
        dp = -std::pow(r, N - 1.0) * W(r) * y;
    };
    OdeSolution sol;
    double r = r0;
    double y = y0;
    double p = std::pow(r0, N - 1.0) * V(r0) * yp0;
    double hstep = (r1 - r0) * 1e-4;
    sol.r.push_back(r);
    sol.y.push_back(y);
    double prev_y = y;
    // Embedded RK4/RK5 via step doubling.
    auto rk4 = [&](double rr, double yy, double pp, double h, double& yo, double& po) {
        double k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p;
        rhs(rr, yy, pp, k1y, k1p);
        rhs(rr + 0.5 * h, yy + 0.5 * h * k1y, pp + 0.5 * h * k1p, k2y, k2p);
        rhs(rr + 0.5 * h, yy + 0.5 * h * k2y, pp + 0.5 * h * k2p, k3y, k3p);
        rhs(rr + h, yy + h * k3y, pp + h * k3p, k4y, k4p);
        yo = yy + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        po = pp + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    };
    while (r < r1) {
        if (hstep < 1e-14 * std::max(r, 1.0)) {
            sol.complete = false;   // step-size underflow near a singular endpoint
            break;
        }
        const double h = std::min(hstep, r1 - r);
        double y_full, p_full, y_half, p_half, y_two, p_two;
        rk4(r, y, p, h, y_full, p_full);
        rk4(r, y, p, 0.5 * h, y_half, p_half);
        rk4(r + 0.5 * h, y_half, p_half, 0.5 * h, y_two, p_two);
        const double err = std::abs(y_two - y_full) + std::abs(p_two - p_full);
        const double scale = std::abs(y_two) + std::abs(p_two) + 1e-30;
        if (err > tol * scale) {
            hstep *= 0.5;
            continue;
        }
        r += h;
        y = y_two;
        p = p_two;
        sol.r.push_back(r);
        sol.y.push_back(y);
        if (!sol.sign_change && prev_y != 0.0 && y * prev_y < 0.0) {
            sol.sign_change = true;
            sol.sign_change_r = r;
        }
        prev_y = y;
        if (err < 0.1 * tol * scale) hstep *= 1.6;
    }
    return sol;
}

} // namespace hyhardy
