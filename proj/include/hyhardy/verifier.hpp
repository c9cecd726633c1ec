#pragma once

// Assembles the Hardy / Poincare / CKN identities and inequalities from
// functional values, computes gaps and residuals, and emits structured
// reports. This module owns every theorem constant; the functionals are
// pure integrals.

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "besselpairs.hpp"
#include "functionals.hpp"
#include "geometry.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"

namespace hyhardy {

enum class ReportKind { inequality, identity, measured };
enum class Verdict { pass, fail, measured };

inline const char* to_string(ReportKind k)
{
    switch (k) {
    case ReportKind::inequality: return "inequality";
    case ReportKind::identity: return "identity";
    default: return "measured";
    }
}

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "measured";
    }
}

struct VerificationReport {
    std::string target;
    std::string manifold;
    std::map<std::string, double> parameters;
    std::vector<std::pair<std::string, double>> terms;  // constants applied
    double lhs = 0.0;
    double rhs = 0.0;
    double gap_or_residual = 0.0;
    double scale = 0.0;                // sum of |term| magnitudes
    ReportKind kind = ReportKind::identity;
    Verdict verdict = Verdict::measured;
    bool quadrature_converged = true;
    double quad_rel_tol = 0.0;
    int panels = 0;

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["target"] = target;
        j["parameters"] = parameters;
        j["parameters"]["manifold"] = manifold;
        nlohmann::json t = nlohmann::json::object();
        for (const auto& [name, value] : terms) t[name] = value;
        j["terms"] = t;
        j["lhs"] = lhs;
        j["rhs"] = rhs;
        j["gap_or_residual"] = gap_or_residual;
        j["kind"] = to_string(kind);
        j["verdict"] = to_string(verdict);
        j["quadrature"] = {{"rel_tol", quad_rel_tol}, {"panels", panels},
                           {"converged", quadrature_converged}};
        return j;
    }
};

namespace verifier_detail {

constexpr double kIdentityTol = 1e-6;     // relative to term-magnitude scale
constexpr double kInequalityFloor = -1e-9; // times scale

inline void track(VerificationReport& rep, const std::string& name,
                  const FunctionalValue& fv, double coefficient)
{
    rep.terms.emplace_back(name, coefficient * fv.value);
    rep.quadrature_converged = rep.quadrature_converged && fv.quadrature_converged;
    rep.panels += fv.panels_used;
}

inline void finalize(VerificationReport& rep, const QuadratureSpec& spec)
{
    rep.quad_rel_tol = spec.rel_tol;
    rep.scale = 0.0;
    for (const auto& [name, value] : rep.terms) {
        (void)name;
        rep.scale += std::abs(value);
    }
    switch (rep.kind) {
    case ReportKind::identity:
        rep.verdict = std::abs(rep.gap_or_residual) <= kIdentityTol * rep.scale
                          ? Verdict::pass : Verdict::fail;
        break;
    case ReportKind::inequality:
        rep.verdict = rep.gap_or_residual >= kInequalityFloor * rep.scale
                          ? Verdict::pass : Verdict::fail;
        break;
    case ReportKind::measured:
        rep.verdict = Verdict::measured;
        break;
    }
}

inline void require_hyperbolic(const TestFunction& u, const char* who)
{
    if (u.manifold.name != "hyperbolic")
        throw std::invalid_argument(std::string(who) + ": hyperbolic manifold required");
}

inline void require_punctured(const TestFunction& u, const char* who)
{
    if (!(u.support_lo > 0.0))
        throw std::invalid_argument(std::string(who) +
                                    ": test function support must avoid r = 0");
}

} // namespace verifier_detail

/// The Poincare-Hardy identity on H^N:
/// |grad u|^2 = lambda u^2 + h^2 u^2/r^2 + ((N-2)^2/4 - h^2) u^2/sinh^2 r
///            + gamma h (r coth r - 1)/r^2 u^2 + Psi^2 |grad(u/Psi)|^2,
/// all integrated against dv; remainder uses the FULL gradient.
inline VerificationReport verify_eq12(const TestFunction& u, double lambda,
                                      const QuadratureSpec& spec = {})
{
    using namespace verifier_detail;
    require_hyperbolic(u, "verify_eq12");
    require_punctured(u, "verify_eq12");
    const int N = u.manifold.dimension;
    const PoincareWeight pw = make_poincare_weight(N, lambda);

    VerificationReport rep;
    rep.target = "eq12";
    rep.manifold = u.manifold.name;
    rep.parameters = {{"N", double(N)}, {"lambda", lambda},
                      {"j", double(u.subspace_index)}};
    rep.kind = ReportKind::identity;

    auto psi_val = [pw](double r) { return psi_lambda(pw, r).value; };
    auto psi_der = [pw](double r) { return psi_lambda(pw, r).first; };
    auto coth_weight = [](double r) { return coth_minus_inv(r) / r; };

    const FunctionalValue lhs = dirichlet(u, weights::one(), spec);
    const FunctionalValue t_lam = mass(u, weights::one(), spec);
    const FunctionalValue t_hardy = mass(u, weights::power(-2.0), spec);
    const FunctionalValue t_sinh = mass_over_psi2(u, weights::one(), spec);
    const FunctionalValue t_coth = mass(u, coth_weight, spec);
    const FunctionalValue t_rem = full_remainder(u, weights::one(), psi_val, psi_der, spec);

    const double c_sinh = 0.25 * (N - 2.0) * (N - 2.0) - pw.h * pw.h;
    track(rep, "dirichlet", lhs, 1.0);
    track(rep, "lambda_mass", t_lam, lambda);
    track(rep, "hardy", t_hardy, pw.h * pw.h);
    track(rep, "sinh", t_sinh, c_sinh);
    track(rep, "coth", t_coth, pw.gamma * pw.h);
    track(rep, "remainder", t_rem, 1.0);

    rep.lhs = lhs.value;
    rep.rhs = lambda * t_lam.value + pw.h * pw.h * t_hardy.value +
              c_sinh * t_sinh.value + pw.gamma * pw.h * t_coth.value + t_rem.value;
    rep.gap_or_residual = rep.lhs - rep.rhs;
    finalize(rep, spec);
    return rep;
}

/// Subspace inequality for a Bessel pair (r^{N-1}V, r^{N-1}W) with
/// solution f, for u in H_j. Also checks the exact mode-wise surplus
/// sum_n (lambda_n - (j+1)(N+j-1)) int V a_n^2/psi^2 psi^{N-1} dr
/// against the assembled gap. Works on any model manifold (the
/// hyperbolic statement with coth r replaced by psi'/psi).
inline VerificationReport verify_thm21(const TestFunction& u, const BesselPair& bp,
                                       int j, const QuadratureSpec& spec = {},
                                       const std::string& target = "thm21")
{
    using namespace verifier_detail;
    require_punctured(u, "verify_thm21");
    if (u.subspace_index < j)
        throw std::invalid_argument("verify_thm21: u is not in H_j");
    const int N = u.manifold.dimension;
    const double subspace_coeff = (j + 1.0) * (N + j - 1.0);

    VerificationReport rep;
    rep.target = target;
    rep.manifold = u.manifold.name;
    rep.parameters = {{"N", double(N)}, {"j", double(j)}};
    rep.kind = ReportKind::inequality;

    const FunctionalValue lhs = dirichlet(u, bp.V, spec);
    const FunctionalValue t_mass = mass(u, bp.W, spec);
    const FunctionalValue t_sub = mass_over_psi2(u, bp.V, spec);
    const FunctionalValue t_rem = remainder(u, bp.V, bp.f, bp.f_prime, spec);
    const FunctionalValue t_coth = coth_term(u, bp.V, bp.f, bp.f_prime, spec);

    track(rep, "dirichlet", lhs, 1.0);
    track(rep, "mass", t_mass, 1.0);
    track(rep, "subspace", t_sub, subspace_coeff);
    track(rep, "remainder", t_rem, 1.0);
    track(rep, "coth", t_coth, -(N - 1.0));

    rep.lhs = lhs.value;
    rep.rhs = t_mass.value + subspace_coeff * t_sub.value + t_rem.value -
              (N - 1.0) * t_coth.value;
    rep.gap_or_residual = rep.lhs - rep.rhs;

    // Proof bookkeeping: the gap is exactly the surplus of lambda_n over
    // the subspace coefficient.
    double surplus = 0.0;
    std::size_t idx = 0;
    for (const auto& [mode, prof] : u.terms) {
        (void)prof;
        surplus += (static_cast<double>(mode.eigenvalue) - subspace_coeff) *
                   t_sub.per_mode[idx++].second;
    }
    rep.terms.emplace_back("surplus", surplus);

    finalize(rep, spec);
    if (std::abs(rep.gap_or_residual - surplus) >
        1e-8 * std::max(std::abs(surplus), rep.scale))
        rep.verdict = Verdict::fail;
    return rep;
}

/// The angular-energy identity: for u in H_j,
/// int V |grad u|^2 - int V |grad_r u|^2 = sum_n lambda_n int V a_n^2/psi^2
/// (exact), of which the paper's stated right side
/// (j+1)(N+j-1) int V u^2/psi^2 is the n = j+1 lower bound.
inline VerificationReport verify_thm22(const TestFunction& u, const RadialWeight& V,
                                       int j, const QuadratureSpec& spec = {},
                                       const std::string& target = "thm22")
{
    using namespace verifier_detail;
    if (u.subspace_index < j)
        throw std::invalid_argument("verify_thm22: u is not in H_j");
    const int N = u.manifold.dimension;
    const double subspace_coeff = (j + 1.0) * (N + j - 1.0);

    VerificationReport rep;
    rep.target = target;
    rep.manifold = u.manifold.name;
    rep.parameters = {{"N", double(N)}, {"j", double(j)}};
    rep.kind = ReportKind::inequality;

    const FunctionalValue full = dirichlet(u, V, spec);
    const FunctionalValue radial = radial_dirichlet(u, V, spec);
    const FunctionalValue t_sub = mass_over_psi2(u, V, spec);

    double rhs_exact = 0.0;
    std::size_t idx = 0;
    for (const auto& [mode, prof] : u.terms) {
        (void)prof;
        rhs_exact += static_cast<double>(mode.eigenvalue) * t_sub.per_mode[idx++].second;
    }

    track(rep, "dirichlet", full, 1.0);
    track(rep, "radial_dirichlet", radial, -1.0);
    track(rep, "subspace", t_sub, subspace_coeff);
    rep.terms.emplace_back("rhs_exact", rhs_exact);

    rep.lhs = full.value - radial.value;
    rep.rhs = subspace_coeff * t_sub.value;
    rep.gap_or_residual = rep.lhs - rep.rhs;
    finalize(rep, spec);
    // Exact mode-wise identity must hold regardless of the inequality gap.
    if (std::abs(rep.lhs - rhs_exact) > 1e-8 * std::max(rep.scale, std::abs(rhs_exact)))
        rep.verdict = Verdict::fail;
    return rep;
}

/// Improved Poincare-Hardy inequality on H_j of the hyperbolic space,
/// with the sinh^{-2} coefficient (N/2)^2 - h^2 + j(N+j).
inline VerificationReport verify_cor23(const TestFunction& u, double lambda, int j,
                                       const QuadratureSpec& spec = {})
{
    using namespace verifier_detail;
    require_hyperbolic(u, "verify_cor23");
    require_punctured(u, "verify_cor23");
    if (u.subspace_index < j || j < 0)
        throw std::invalid_argument("verify_cor23: u is not in H_j with j >= 0");
    const int N = u.manifold.dimension;
    const PoincareWeight pw = make_poincare_weight(N, lambda);

    VerificationReport rep;
    rep.target = "cor23";
    rep.manifold = u.manifold.name;
    rep.parameters = {{"N", double(N)}, {"lambda", lambda}, {"j", double(j)}};
    rep.kind = ReportKind::inequality;

    auto psi_val = [pw](double r) { return psi_lambda(pw, r).value; };
    auto psi_der = [pw](double r) { return psi_lambda(pw, r).first; };
    auto coth_weight = [](double r) { return coth_minus_inv(r) / r; };

    const FunctionalValue lhs = dirichlet(u, weights::one(), spec);
    const FunctionalValue t_lam = mass(u, weights::one(), spec);
    const FunctionalValue t_hardy = mass(u, weights::power(-2.0), spec);
    const FunctionalValue t_sinh = mass_over_psi2(u, weights::one(), spec);
    const FunctionalValue t_coth = mass(u, coth_weight, spec);
    const FunctionalValue t_rem = full_remainder(u, weights::one(), psi_val, psi_der, spec);

    const double c_sinh = 0.25 * N * N - pw.h * pw.h + j * (N + double(j));
    track(rep, "dirichlet", lhs, 1.0);
    track(rep, "lambda_mass", t_lam, lambda);
    track(rep, "hardy", t_hardy, pw.h * pw.h);
    track(rep, "sinh", t_sinh, c_sinh);
    track(rep, "coth", t_coth, pw.gamma * pw.h);
    track(rep, "remainder", t_rem, 1.0);

    rep.lhs = lhs.value;
    rep.rhs = lambda * t_lam.value + pw.h * pw.h * t_hardy.value + c_sinh * t_sinh.value +
              pw.gamma * pw.h * t_coth.value + t_rem.value;
    rep.gap_or_residual = rep.lhs - rep.rhs;
    finalize(rep, spec);
    return rep;
}

/// Weighted Hardy inequality on H_j with weight r^{-alpha}: constant
/// ((N-alpha-2)/2)^2, subspace term (j+1)(N+j-1), full-gradient middle
/// term int r^{-(N-2)} |grad(r^{(N-alpha-2)/2} u)|^2, and coth
/// coefficient (N-1)(N-alpha-2)/2.
inline VerificationReport verify_cor24(const TestFunction& u, double alpha, int j,
                                       const QuadratureSpec& spec = {})
{
    using namespace verifier_detail;
    require_hyperbolic(u, "verify_cor24");
    require_punctured(u, "verify_cor24");
    if (u.subspace_index < j)
        throw std::invalid_argument("verify_cor24: u is not in H_j");
    const int N = u.manifold.dimension;
    const double c = 0.5 * (N - alpha - 2.0);
    const double subspace_coeff = (j + 1.0) * (N + j - 1.0);

    VerificationReport rep;
    rep.target = "cor24";
    rep.manifold = u.manifold.name;
    rep.parameters = {{"N", double(N)}, {"alpha", alpha}, {"j", double(j)}};
    rep.kind = ReportKind::inequality;

    auto f = [c](double r) { return std::pow(r, -c); };
    auto f_prime = [c](double r) { return -c * std::pow(r, -c - 1.0); };
    auto coth_weight = [alpha](double r) {
        return coth_minus_inv(r) * std::pow(r, -alpha - 1.0);
    };

    const FunctionalValue lhs = dirichlet(u, weights::power(-alpha), spec);
    const FunctionalValue t_hardy = mass(u, weights::power(-alpha - 2.0), spec);
    const FunctionalValue t_sub = mass_over_psi2(u, weights::power(-alpha), spec);
    const FunctionalValue t_rem =
        full_remainder(u, weights::power(-alpha), f, f_prime, spec);
    const FunctionalValue t_coth = mass(u, coth_weight, spec);

    track(rep, "dirichlet", lhs, 1.0);
    track(rep, "hardy", t_hardy, c * c);
    track(rep, "subspace", t_sub, subspace_coeff);
    track(rep, "remainder", t_rem, 1.0);
    track(rep, "coth", t_coth, (N - 1.0) * c);

    rep.lhs = lhs.value;
    rep.rhs = c * c * t_hardy.value + subspace_coeff * t_sub.value + t_rem.value +
              (N - 1.0) * c * t_coth.value;
    rep.gap_or_residual = rep.lhs - rep.rhs;
    finalize(rep, spec);
    return rep;
}

/// CKN product inequality:
/// (int r^{-a} |grad_r u|^2)(int r^{a-2b+2} u^2)
///   >= max{(N-b)^2, (N-2a-b-4)^2}/4 (int r^{-b} u^2)^2.
/// Inequality verdict on the Euclidean model; measured elsewhere (the
/// divergence step behind the constant is exact only for psi = r), with
/// the divergence residuals D_b and D_{a+2} reported alongside.
inline VerificationReport verify_ckn(const TestFunction& u, double alpha, double beta,
                                     const QuadratureSpec& spec = {})
{
    using namespace verifier_detail;
    require_punctured(u, "verify_ckn");
    const int N = u.manifold.dimension;
    const double cmax = std::max(0.25 * (N - beta) * (N - beta),
                                 0.25 * (N - 2.0 * alpha - beta - 4.0) *
                                        (N - 2.0 * alpha - beta - 4.0));

    VerificationReport rep;
    rep.target = "ckn25";
    rep.manifold = u.manifold.name;
    rep.parameters = {{"N", double(N)}, {"alpha", alpha}, {"beta", beta}};
    rep.kind = u.manifold.name == "euclidean" ? ReportKind::inequality
                                              : ReportKind::measured;

    const CknTerms t = ckn_terms(u, alpha, beta, spec);
    rep.quadrature_converged = t.radial_energy.quadrature_converged &&
                               t.cross_mass.quadrature_converged &&
                               t.beta_mass.quadrature_converged;
    rep.panels = t.radial_energy.panels_used + t.cross_mass.panels_used +
                 t.beta_mass.panels_used;

    rep.lhs = t.radial_energy.value * t.cross_mass.value;
    rep.rhs = cmax * t.beta_mass.value * t.beta_mass.value;
    rep.gap_or_residual = rep.lhs - rep.rhs;
    rep.terms.emplace_back("product", rep.lhs);
    rep.terms.emplace_back("constant_times_mass_sq", rep.rhs);
    if (rep.kind == ReportKind::measured) {
        rep.terms.emplace_back("divergence_residual_beta",
                               divergence_residual(u, beta, spec));
        rep.terms.emplace_back("divergence_residual_alpha2",
                               divergence_residual(u, alpha + 2.0, spec));
    }
    finalize(rep, spec);
    return rep;
}

/// CKN identity with explicit remainder: the product defect equals
/// T2 * int |r^{-a/2-1} r u_r + t r^{1+a/2-b} u|^2 dv with
/// t = ((N-b)/2) T3 / T2. Identity verdict on the Euclidean model,
/// measured elsewhere.
inline VerificationReport verify_ckn_remainder(const TestFunction& u, double alpha,
                                               double beta,
                                               const QuadratureSpec& spec = {})
{
    using namespace verifier_detail;
    require_punctured(u, "verify_ckn_remainder");
    const int N = u.manifold.dimension;

    VerificationReport rep;
    rep.target = "ckn26";
    rep.manifold = u.manifold.name;
    rep.parameters = {{"N", double(N)}, {"alpha", alpha}, {"beta", beta}};
    rep.kind = u.manifold.name == "euclidean" ? ReportKind::identity
                                              : ReportKind::measured;

    const CknTerms terms = ckn_terms(u, alpha, beta, spec);
    const FunctionalValue cross = radial_cross_term(u, beta, spec);
    rep.quadrature_converged = terms.radial_energy.quadrature_converged &&
                               terms.cross_mass.quadrature_converged &&
                               terms.beta_mass.quadrature_converged &&
                               cross.quadrature_converged;
    rep.panels = terms.radial_energy.panels_used + terms.cross_mass.panels_used +
                 terms.beta_mass.panels_used + cross.panels_used;

    const double T1 = terms.radial_energy.value;
    const double T2 = terms.cross_mass.value;
    const double T3 = terms.beta_mass.value;
    const double t = T2 != 0.0 ? 0.5 * (N - beta) * T3 / T2 : 0.0;
    // Remainder integral, expanded square integrated term by term:
    // R(t) = T1 + 2 t int u u_r r^{1-beta} dv + t^2 T2.
    const double remainder_integral = T1 + 2.0 * t * cross.value + t * t * T2;

    rep.lhs = T1 * T2 - 0.25 * (N - beta) * (N - beta) * T3 * T3;
    rep.rhs = T2 * remainder_integral;
    rep.gap_or_residual = rep.lhs - rep.rhs;
    rep.terms.emplace_back("product_defect", rep.lhs);
    rep.terms.emplace_back("remainder_side", rep.rhs);
    if (rep.kind == ReportKind::measured)
        rep.terms.emplace_back("divergence_residual_beta",
                               divergence_residual(u, beta, spec));
    finalize(rep, spec);
    return rep;
}

/// Riemannian-model forms of the subspace results: identical assembly
/// with coth r -> psi'/psi and sinh -> psi throughout (the functionals
/// already evaluate through u's manifold).
inline VerificationReport verify_model(const TestFunction& u, const BesselPair& bp,
                                       int j, const QuadratureSpec& spec = {})
{
    return verify_thm21(u, bp, j, spec, "model27");
}

inline VerificationReport verify_model_identity(const TestFunction& u,
                                                const RadialWeight& V, int j,
                                                const QuadratureSpec& spec = {})
{
    return verify_thm22(u, V, j, spec, "model28");
}

} // namespace hyhardy
