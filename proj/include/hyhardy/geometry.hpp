#pragma once

// Rotationally symmetric model manifolds in geodesic polar coordinates
// and spherical-harmonic mode bookkeeping.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace hyhardy {

/// coth(r) - 1/r, evaluated by series below r = 1e-2 where the direct
/// formula loses digits to cancellation.
inline double coth_minus_inv(double r)
{
    if (r < 1e-2) {
        const double r2 = r * r;
        // r/3 - r^3/45 + 2 r^5/945 - r^7/4725 + 2 r^9/93555
        return r * (1.0 / 3.0 +
               r2 * (-1.0 / 45.0 +
               r2 * (2.0 / 945.0 +
               r2 * (-1.0 / 4725.0 +
               r2 * (2.0 / 93555.0)))));
    }
    return 1.0 / std::tanh(r) - 1.0 / r;
}

struct ModelManifold {
    int dimension = 3;
    std::function<double(double)> psi;
    std::function<double(double)> psi_prime;
    std::function<double(double)> psi_second;
    std::string name = "custom";

    double volume_density(double r) const
    {
        if (r < 0.0)
            throw std::domain_error("volume_density: r must be >= 0");
        return std::pow(psi(r), dimension - 1);
    }

    /// psi'(r)/psi(r) - 1/r. Identically zero for the Euclidean model,
    /// series-protected coth(r) - 1/r for the hyperbolic one.
    double log_deriv_minus_inv(double r) const
    {
        if (name == "euclidean") return 0.0;
        if (name == "hyperbolic") return coth_minus_inv(r);
        return psi_prime(r) / psi(r) - 1.0 / r;
    }
};

inline ModelManifold hyperbolic(int N)
{
    if (N < 2) throw std::invalid_argument("hyperbolic: N must be >= 2");
    ModelManifold m;
    m.dimension = N;
    m.psi        = [](double r) { return std::sinh(r); };
    m.psi_prime  = [](double r) { return std::cosh(r); };
    m.psi_second = [](double r) { return std::sinh(r); };
    m.name = "hyperbolic";
    return m;
}

inline ModelManifold euclidean(int N)
{
    if (N < 2) throw std::invalid_argument("euclidean: N must be >= 2");
    ModelManifold m;
    m.dimension = N;
    m.psi        = [](double r) { return r; };
    m.psi_prime  = [](double) { return 1.0; };
    m.psi_second = [](double) { return 0.0; };
    m.name = "euclidean";
    return m;
}

/// User-supplied warping function with analytic first and second
/// derivatives. psi(0) = 0 and psi'(0) = 1 are validated by Taylor
/// comparison at r = 1e-6 and r = 1e-4.
inline ModelManifold custom_manifold(int N,
                                     std::function<double(double)> psi,
                                     std::function<double(double)> psi_prime,
                                     std::function<double(double)> psi_second,
                                     std::string name = "custom")
{
    if (N < 2) throw std::invalid_argument("custom_manifold: N must be >= 2");
    for (double r : {1e-6, 1e-4}) {
        if (std::abs(psi(r) / r - 1.0) > 1e-8)
            throw std::invalid_argument(
                "custom_manifold: psi fails psi(0)=0, psi'(0)=1 at r=" + std::to_string(r));
    }
    ModelManifold m;
    m.dimension = N;
    m.psi = std::move(psi);
    m.psi_prime = std::move(psi_prime);
    m.psi_second = std::move(psi_second);
    m.name = std::move(name);
    return m;
}

inline ModelManifold manifold_by_name(const std::string& name, int N)
{
    if (name == "hyperbolic") return hyperbolic(N);
    if (name == "euclidean") return euclidean(N);
    throw std::invalid_argument("unknown manifold: " + name);
}

/// lambda_n = n^2 + (N-2) n, exact integer arithmetic.
inline long long mode_eigenvalue(int N, int n)
{
    if (N < 2) throw std::invalid_argument("mode_eigenvalue: N must be >= 2");
    if (n < 0) throw std::invalid_argument("mode_eigenvalue: n must be >= 0");
    return static_cast<long long>(n) * n + static_cast<long long>(N - 2) * n;
}

namespace detail {
inline long long checked_mul(long long a, long long b)
{
    long long out;
    if (__builtin_mul_overflow(a, b, &out))
        throw std::overflow_error("mode_multiplicity: intermediate overflow");
    return out;
}

// binom(m, k) with overflow detection
inline long long binom(long long m, long long k)
{
    if (k < 0 || k > m) return 0;
    if (k > m - k) k = m - k;
    long long result = 1;
    for (long long i = 1; i <= k; ++i) {
        // result * (m - k + i) is always divisible by i at this point
        long long num = checked_mul(result, m - k + i);
        result = num / i;
    }
    return result;
}
} // namespace detail

/// Eigenspace dimension d_n of -Delta on S^{N-1}:
/// d_0 = 1, d_1 = N, d_n = binom(N+n-1, n) - binom(N+n-3, n-2).
inline long long mode_multiplicity(int N, int n)
{
    if (N < 2) throw std::invalid_argument("mode_multiplicity: N must be >= 2");
    if (n < 0) throw std::invalid_argument("mode_multiplicity: n must be >= 0");
    if (n == 0) return 1;
    if (n == 1) return N;
    long long a = detail::binom(static_cast<long long>(N) + n - 1, n);
    long long b = detail::binom(static_cast<long long>(N) + n - 3, n - 2);
    return a - b;
}

struct Mode {
    int n = 0;
    long long eigenvalue = 0;
    long long multiplicity = 1;
};

inline Mode make_mode(int N, int n)
{
    return Mode{n, mode_eigenvalue(N, n), mode_multiplicity(N, n)};
}

struct IntegrationDomain {
    double inner = 0.0;                                     // r_min
    double outer = std::numeric_limits<double>::infinity(); // R
    double truncation = 0.0;                                // finite bound used when R = inf

    IntegrationDomain(double r_min, double R, double R_trunc)
        : inner(r_min), outer(R), truncation(R_trunc)
    {
        if (!(inner < truncation && truncation <= outer))
            throw std::invalid_argument("IntegrationDomain: need r_min < R_trunc <= R");
    }
};

} // namespace hyhardy
