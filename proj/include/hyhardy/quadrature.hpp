#pragma once

// Singularity-aware adaptive Gauss-Legendre quadrature on radial
// intervals. Integrable endpoint singularities at the left endpoint are
// handled by geometric grading of the initial mesh plus error-driven
// bisection; nodes never touch the endpoints.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyhardy {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 1 << 16;
    int base_rule = 16;       // Gauss-Legendre nodes per panel
    double grading_exponent = 3.0;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels_used = 0;
    bool converged = false;
};

struct GaussRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

/// Nodes and weights of the k-point Gauss-Legendre rule, computed by
/// Newton iteration on P_k and cached per k.
inline const GaussRule& gauss_legendre(int k)
{
    if (k < 2) throw std::invalid_argument("gauss_legendre: need k >= 2");
    static std::map<int, GaussRule> cache;
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(k);
    rule.weights.resize(k);
    const int m = (k + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (k + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int n = 2; n <= k; ++n) {
                double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            pp = k * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[k - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[k - 1 - i] = w;
    }
    return cache.emplace(k, std::move(rule)).first->second;
}

namespace detail {

inline double panel_sum(const std::function<double(double)>& f,
                        double a, double b, const GaussRule& rule)
{
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = mid + half * rule.nodes[i];
        const double fx = f(x);
        if (!std::isfinite(fx))
            throw std::domain_error("integrand not finite at r = " + std::to_string(x));
        s += rule.weights[i] * fx;
    }
    return s * half;
}

struct Panel {
    double a, b, value, error;
};

// Error estimate of a panel: |k-node - 2k-node| with the 2k value kept.
inline Panel eval_panel(const std::function<double(double)>& f,
                        double a, double b, int k)
{
    const double coarse = panel_sum(f, a, b, gauss_legendre(k));
    const double fine = panel_sum(f, a, b, gauss_legendre(2 * k));
    return Panel{a, b, fine, std::abs(fine - coarse)};
}

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const
    {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a; // deterministic tie-break
    }
};

} // namespace detail

inline IntegralResult integrate_radial(const std::function<double(double)>& f,
                                       double a, double b,
                                       const QuadratureSpec& spec = {})
{
    if (!(a >= 0.0 && a < b) || !std::isfinite(b))
        throw std::invalid_argument("integrate_radial: need 0 <= a < b < inf");
    if (!(spec.rel_tol > 0.0 && spec.abs_tol > 0.0))
        throw std::invalid_argument("integrate_radial: tolerances must be > 0");

    using detail::Panel;
    std::priority_queue<Panel, std::vector<Panel>, detail::PanelWorse> heap;
    double value_sum = 0.0, err_sum = 0.0;
    int panels = 0;

    // Initial mesh graded toward a.
    const int m0 = 8;
    double left = a;
    for (int i = 1; i <= m0; ++i) {
        double right = a + (b - a) * std::pow(static_cast<double>(i) / m0,
                                              spec.grading_exponent);
        if (i == m0) right = b;
        Panel p = detail::eval_panel(f, left, right, spec.base_rule);
        value_sum += p.value;
        err_sum += p.error;
        heap.push(p);
        ++panels;
        left = right;
    }

    // Slightly tighter working bound so the final left-to-right
    // resummation cannot push the estimate back over the target.
    bool converged = true;
    while (err_sum > 0.5 * std::max(spec.rel_tol * std::abs(value_sum), spec.abs_tol)) {
        if (panels >= spec.max_subdivisions) {
            converged = false;
            break;
        }
        Panel worst = heap.top();
        heap.pop();
        value_sum -= worst.value;
        err_sum -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        for (auto [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            Panel p = detail::eval_panel(f, lo, hi, spec.base_rule);
            value_sum += p.value;
            err_sum += p.error;
            heap.push(p);
        }
        ++panels;
    }

    // Final deterministic summation in left-to-right panel order.
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    IntegralResult res;
    for (const Panel& p : all) {
        res.value += p.value;
        res.error_estimate += p.error;
    }
    res.panels_used = panels;
    res.converged = converged &&
        res.error_estimate <= std::max(spec.rel_tol * std::abs(res.value), spec.abs_tol);
    return res;
}

/// Tensor rule for f(r, theta) psi(r) dr dtheta over (a,b) x [0, 2pi):
/// trapezoid in theta (spectrally accurate for smooth periodic
/// integrands), adaptive radial rule in r.
inline IntegralResult integrate_2d_polar(const std::function<double(double, double)>& f,
                                         const std::function<double(double)>& psi,
                                         double a, double b,
                                         const QuadratureSpec& spec = {},
                                         int n_theta = 256)
{
    if (n_theta < 4) throw std::invalid_argument("integrate_2d_polar: n_theta too small");
    auto radial = [&](double r) {
        double s = 0.0;
        for (int i = 0; i < n_theta; ++i)
            s += f(r, 2.0 * M_PI * i / n_theta);
        return s * (2.0 * M_PI / n_theta) * psi(r);
    };
    return integrate_radial(radial, a, b, spec);
}

} // namespace hyhardy
