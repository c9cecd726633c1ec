#pragma once

// Best-constant estimation: piecewise-linear Galerkin discretization of
// the radial Rayleigh quotients on graded meshes, generalized eigenvalue
// solves by inverse iteration on the tridiagonal pencil, and Richardson
// extrapolation over a refinement ladder. Truncation to (r_min, R_trunc)
// with Dirichlet ends yields upper bounds on the infimum over C_c^inf.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "functionals.hpp"
#include "geometry.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"

namespace hyhardy {

struct RayleighProblem {
    int dimension = 3;
    int mode_n = 0;
    std::function<double(double)> density;          // volume density psi^{N-1}
    std::function<double(double)> inv_psi2;         // 1/psi^2 (angular term factor)
    std::function<double(double)> numerator_weight; // V in int V u'^2 ...
    std::function<double(double)> extra_potential;  // optional zeroth-order add-on; may be empty
    std::function<double(double)> denominator_weight;
    std::vector<double> mesh;                       // strictly increasing nodes
};

inline std::vector<double> geometric_mesh(double r_min, double r_max, int elements)
{
    if (!(0.0 < r_min && r_min < r_max) || elements < 2)
        throw std::invalid_argument("geometric_mesh: bad arguments");
    std::vector<double> nodes(static_cast<std::size_t>(elements) + 1);
    for (int i = 0; i <= elements; ++i)
        nodes[static_cast<std::size_t>(i)] =
            r_min * std::pow(r_max / r_min, static_cast<double>(i) / elements);
    return nodes;
}

inline std::vector<double> uniform_mesh(double a, double b, int elements)
{
    if (!(a < b) || elements < 2)
        throw std::invalid_argument("uniform_mesh: bad arguments");
    std::vector<double> nodes(static_cast<std::size_t>(elements) + 1);
    for (int i = 0; i <= elements; ++i)
        nodes[static_cast<std::size_t>(i)] = a + (b - a) * i / elements;
    return nodes;
}

inline RayleighProblem make_rayleigh_problem(const ModelManifold& m, int mode_n,
                                             std::function<double(double)> V,
                                             std::function<double(double)> W_den,
                                             std::vector<double> mesh)
{
    RayleighProblem p;
    p.dimension = m.dimension;
    p.mode_n = mode_n;
    const int N = m.dimension;
    auto psi = m.psi;
    p.density = [psi, N](double r) { return std::pow(psi(r), N - 1); };
    p.inv_psi2 = [psi](double r) { const double s = psi(r); return 1.0 / (s * s); };
    p.numerator_weight = std::move(V);
    p.denominator_weight = std::move(W_den);
    p.mesh = std::move(mesh);
    return p;
}

/// Symmetric tridiagonal matrix: diag[i], off[i] couples i and i+1.
struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;
    std::size_t size() const { return diag.size(); }
};

namespace sharp_detail {

// LDL^T factorization of (T - shift * S); fails on a non-positive pivot
// only when the shifted matrix is indefinite, which inverse iteration
// tolerates as long as pivots stay nonzero.
struct LdlFactor {
    std::vector<double> d;
    std::vector<double> l;
    bool ok = true;

    LdlFactor(const Tridiag& T, const Tridiag& S, double shift)
    {
        const std::size_t n = T.size();
        d.resize(n);
        l.resize(n > 0 ? n - 1 : 0);
        double prev_d = 0.0, prev_off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double di = T.diag[i] - shift * S.diag[i];
            if (i > 0) di -= prev_off * prev_off / prev_d;
            if (di == 0.0) { ok = false; return; }
            d[i] = di;
            if (i + 1 < n) {
                const double oi = T.off[i] - shift * S.off[i];
                l[i] = oi / di;
                prev_off = oi;
                prev_d = di;
            }
        }
    }

    void solve(std::vector<double>& x) const
    {
        const std::size_t n = d.size();
        for (std::size_t i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
        for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
        for (std::size_t i = n - 1; i > 0; --i) x[i - 1] -= l[i - 1] * x[i];
    }
};

inline void mul(const Tridiag& T, const std::vector<double>& x, std::vector<double>& y)
{
    const std::size_t n = T.size();
    y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += T.diag[i] * x[i];
        if (i + 1 < n) {
            y[i] += T.off[i] * x[i + 1];
            y[i + 1] += T.off[i] * x[i];
        }
    }
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace sharp_detail

/// Assembles the tridiagonal stiffness/mass pencil (A, B) of the nodal
/// P1 basis on the problem's mesh with Dirichlet conditions at both
/// ends. A carries the numerator form including the lambda_n / psi^2
/// zeroth-order part; B carries the denominator weight.
inline std::pair<Tridiag, Tridiag> assemble_forms(const RayleighProblem& p)
{
    const std::size_t m = p.mesh.size();
    if (m < 3) throw std::invalid_argument("assemble_forms: mesh too small");
    for (std::size_t i = 1; i < m; ++i)
        if (!(p.mesh[i] > p.mesh[i - 1]))
            throw std::invalid_argument("assemble_forms: mesh not strictly increasing");

    const double lambda_n =
        static_cast<double>(mode_eigenvalue(p.dimension, p.mode_n));
    const std::size_t n = m - 2; // interior nodes
    Tridiag A, B;
    A.diag.assign(n, 0.0); A.off.assign(n > 0 ? n - 1 : 0, 0.0);
    B.diag.assign(n, 0.0); B.off.assign(n > 0 ? n - 1 : 0, 0.0);

    const GaussRule& rule = gauss_legendre(4);
    for (std::size_t e = 0; e + 1 < m; ++e) {
        const double xl = p.mesh[e], xr = p.mesh[e + 1];
        const double h = xr - xl;
        // Local contributions for basis functions at nodes e and e+1.
        double k00 = 0, k01 = 0, k11 = 0;   // numerator form
        double m00 = 0, m01 = 0, m11 = 0;   // denominator form
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = 0.5 * (xl + xr) + 0.5 * h * rule.nodes[q];
            const double w = 0.5 * h * rule.weights[q];
            const double rho = p.density(x);
            const double V = p.numerator_weight(x);
            const double phi1 = (x - xl) / h;     // hat at node e+1
            const double phi0 = 1.0 - phi1;       // hat at node e
            const double dphi = 1.0 / h;
            double Q = lambda_n * V * p.inv_psi2(x);
            if (p.extra_potential) Q += p.extra_potential(x);
            const double grad = V * dphi * dphi * rho;
            k00 += w * (grad + Q * phi0 * phi0 * rho);
            k01 += w * (-grad + Q * phi0 * phi1 * rho);
            k11 += w * (grad + Q * phi1 * phi1 * rho);
            const double Wd = p.denominator_weight(x) * rho;
            m00 += w * Wd * phi0 * phi0;
            m01 += w * Wd * phi0 * phi1;
            m11 += w * Wd * phi1 * phi1;
        }
        // Map element nodes (e, e+1) onto interior unknowns (e-1, e).
        if (e > 0) { A.diag[e - 1] += k00; B.diag[e - 1] += m00; }
        if (e + 1 < m - 1) { A.diag[e] += k11; B.diag[e] += m11; }
        if (e > 0 && e + 1 < m - 1) { A.off[e - 1] += k01; B.off[e - 1] += m01; }
    }
    for (double d : B.diag)
        if (!(d > 0.0))
            throw std::invalid_argument(
                "assemble_forms: denominator weight not positive on the mesh");
    return {A, B};
}

struct EigenResult {
    double value = 0.0;
    std::vector<double> vector;
    bool converged = false;
    int iterations = 0;
};

/// Smallest eigenvalue of A x = mu B x by inverse iteration with an
/// LDL^T factorization of (A - shift B); re-shifts on stagnation.
inline EigenResult smallest_eigenvalue(const Tridiag& A, const Tridiag& B,
                                       int max_iter = 500)
{
    using namespace sharp_detail;
    const std::size_t n = A.size();
    EigenResult res;
    res.vector.assign(n, 1.0);

    double shift = 0.0;
    std::optional<LdlFactor> fac;
    fac.emplace(A, B, shift);
    if (!fac->ok) { shift = 1e-12; fac.emplace(A, B, shift); }

    std::vector<double> bx(n), ax(n);
    double mu_prev = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        mul(B, res.vector, bx);
        std::vector<double> x = bx;
        fac->solve(x);
        // Normalize in the B-inner product.
        mul(B, x, bx);
        const double norm = std::sqrt(dot(x, bx));
        if (!(norm > 0.0)) break;
        for (double& v : x) v /= norm;
        mul(A, x, ax);
        mul(B, x, bx);
        const double mu = dot(x, ax) / dot(x, bx);
        res.vector = std::move(x);
        res.iterations = it;
        if (it > 1 && std::abs(mu - mu_prev) <= 1e-10 * std::abs(mu)) {
            res.value = mu;
            res.converged = true;
            return res;
        }
        // Re-shift toward the current estimate if plain iteration stalls.
        if (it % 50 == 0) {
            shift = 0.9 * mu;
            fac.emplace(A, B, shift);
            if (!fac->ok) { shift *= 0.99; fac.emplace(A, B, shift); }
        }
        mu_prev = mu;
        res.value = mu;
    }
    return res;
}

struct ConstantEstimate {
    double value = 0.0;                 // finest-level eigenvalue
    std::vector<int> mesh_sizes;
    std::vector<double> values_per_level;
    double extrapolated = 0.0;
    std::optional<double> trial_family_upper_bound;
    bool converged = true;
};

/// Runs the eigensolve per ladder level and Richardson-extrapolates the
/// last two levels assuming the error quarters per level (h^2 elements
/// with doubled resolution, and domain widening chosen to match).
inline ConstantEstimate estimate_constant(
    const std::function<RayleighProblem(int)>& problem_for_level, int levels)
{
    if (levels < 1) throw std::invalid_argument("estimate_constant: levels >= 1");
    ConstantEstimate est;
    for (int lv = 0; lv < levels; ++lv) {
        const RayleighProblem p = problem_for_level(lv);
        auto [A, B] = assemble_forms(p);
        const EigenResult r = smallest_eigenvalue(A, B);
        est.converged = est.converged && r.converged;
        est.mesh_sizes.push_back(static_cast<int>(p.mesh.size()) - 1);
        est.values_per_level.push_back(r.value);
    }
    est.value = est.values_per_level.back();
    if (levels >= 2) {
        const double last = est.values_per_level[levels - 1];
        const double prev = est.values_per_level[levels - 2];
        est.extrapolated = last + (last - prev) / 3.0;
    } else {
        est.extrapolated = est.value;
    }
    return est;
}

/// Rayleigh quotient of a single-mode profile, via adaptive quadrature;
/// used to turn the named trial families into independent upper bounds.
inline double rayleigh_quotient(const ModelManifold& m, int mode_n,
                                const RadialProfile& prof,
                                const RadialWeight& V,
                                const RadialWeight& W_den,
                                const QuadratureSpec& spec = {})
{
    TestFunction u = make_testfunction(m, {{mode_n, prof}}, -1);
    const double num = dirichlet(u, V, spec).value;
    const double den = mass(u, W_den, spec).value;
    return num / den;
}

} // namespace hyhardy
