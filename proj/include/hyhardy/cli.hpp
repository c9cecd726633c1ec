#pragma once

// Run configuration, experiment orchestration, and report serialization
// shared by the command-line tool and the tests. Configuration is
// accepted both as flags and as a key = value file; flags override.

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "besselpairs.hpp"
#include "sharpness.hpp"
#include "verifier.hpp"

namespace hyhardy {

struct RunConfig {
    std::string command = "verify";      // verify | sharpness | sweep | bessel
    std::string target = "eq12";         // verify: eq12|thm21|thm22|cor23|cor24|ckn25|ckn26|model27|model28
                                         // sharpness: hardy|poincare|h0-hardy|ckn
    std::string manifold = "hyperbolic";
    int N = 3;
    double lambda = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    int j = -1;
    std::vector<int> modes = {1};
    double support_lo = 1.0;
    double support_hi = 3.0;
    std::uint64_t seed = 1;
    QuadratureSpec quad;
    std::string output_path;             // empty = stdout
    std::string format = "json";         // json | csv
    std::string pair = "poincare";       // poincare | power
    // sharpness
    int mode_n = 0;
    double rmin = 1e-3;
    double rmax = 40.0;
    int levels = 4;
    // sweep grids (Cartesian product, lexicographic in this order)
    std::vector<double> lambda_grid;
    std::vector<double> alpha_grid;
    std::vector<double> beta_grid;
};

namespace cli_detail {

inline std::string fmt17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        if constexpr (std::is_same_v<T, double>) out += fmt17(v[i]);
        else out += std::to_string(v[i]);
    }
    return out;
}

template <class T>
std::vector<T> split_list(const std::string& s)
{
    std::vector<T> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if constexpr (std::is_same_v<T, double>) out.push_back(std::stod(item));
        else out.push_back(static_cast<T>(std::stoll(item)));
    }
    return out;
}

} // namespace cli_detail

inline std::string serialize_config(const RunConfig& c)
{
    using cli_detail::fmt17;
    using cli_detail::join;
    std::ostringstream os;
    os << "command = " << c.command << "\n"
       << "target = " << c.target << "\n"
       << "manifold = " << c.manifold << "\n"
       << "N = " << c.N << "\n"
       << "lambda = " << fmt17(c.lambda) << "\n"
       << "alpha = " << fmt17(c.alpha) << "\n"
       << "beta = " << fmt17(c.beta) << "\n"
       << "j = " << c.j << "\n"
       << "modes = " << join(c.modes) << "\n"
       << "support = " << fmt17(c.support_lo) << ":" << fmt17(c.support_hi) << "\n"
       << "seed = " << c.seed << "\n"
       << "rel_tol = " << fmt17(c.quad.rel_tol) << "\n"
       << "abs_tol = " << fmt17(c.quad.abs_tol) << "\n"
       << "quad_nodes = " << c.quad.base_rule << "\n"
       << "output = " << c.output_path << "\n"
       << "format = " << c.format << "\n"
       << "pair = " << c.pair << "\n"
       << "mode = " << c.mode_n << "\n"
       << "rmin = " << fmt17(c.rmin) << "\n"
       << "rmax = " << fmt17(c.rmax) << "\n"
       << "levels = " << c.levels << "\n"
       << "lambda_grid = " << join(c.lambda_grid) << "\n"
       << "alpha_grid = " << join(c.alpha_grid) << "\n"
       << "beta_grid = " << join(c.beta_grid) << "\n";
    return os.str();
}

inline void apply_config_line(RunConfig& c, const std::string& key,
                              const std::string& value)
{
    using cli_detail::split_list;
    if (key == "command") c.command = value;
    else if (key == "target") c.target = value;
    else if (key == "manifold") c.manifold = value;
    else if (key == "N") c.N = std::stoi(value);
    else if (key == "lambda") c.lambda = std::stod(value);
    else if (key == "alpha") c.alpha = std::stod(value);
    else if (key == "beta") c.beta = std::stod(value);
    else if (key == "j") c.j = std::stoi(value);
    else if (key == "modes") c.modes = split_list<int>(value);
    else if (key == "support") {
        const auto pos = value.find(':');
        if (pos == std::string::npos)
            throw std::invalid_argument("support: expected s0:s1");
        c.support_lo = std::stod(value.substr(0, pos));
        c.support_hi = std::stod(value.substr(pos + 1));
    }
    else if (key == "seed") c.seed = std::stoull(value);
    else if (key == "rel_tol") c.quad.rel_tol = std::stod(value);
    else if (key == "abs_tol") c.quad.abs_tol = std::stod(value);
    else if (key == "quad_nodes") c.quad.base_rule = std::stoi(value);
    else if (key == "output") c.output_path = value;
    else if (key == "format") c.format = value;
    else if (key == "pair") c.pair = value;
    else if (key == "mode") c.mode_n = std::stoi(value);
    else if (key == "rmin") c.rmin = std::stod(value);
    else if (key == "rmax") c.rmax = std::stod(value);
    else if (key == "levels") c.levels = std::stoi(value);
    else if (key == "lambda_grid") c.lambda_grid = split_list<double>(value);
    else if (key == "alpha_grid") c.alpha_grid = split_list<double>(value);
    else if (key == "beta_grid") c.beta_grid = split_list<double>(value);
    else throw std::invalid_argument("unknown config key: " + key);
}

inline RunConfig parse_config(std::istream& in, RunConfig base = {})
{
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        apply_config_line(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

/// Parameter admissibility; returns empty string when valid, otherwise a
/// diagnostic naming the offending field.
inline std::string validate_config(const RunConfig& c)
{
    if (c.command != "verify" && c.command != "sharpness" && c.command != "sweep" &&
        c.command != "bessel")
        return "command: unknown command '" + c.command + "'";
    if (c.manifold != "hyperbolic" && c.manifold != "euclidean")
        return "manifold: must be hyperbolic or euclidean";
    if (c.N < 2) return "N: must be >= 2";
    if (c.lambda < 0.0 || c.lambda > poincare_lambda1(c.N))
        return "lambda: must lie in [0, ((N-1)/2)^2]";
    if (c.j < -1) return "j: must be >= -1";
    for (int n : c.modes)
        if (n < c.j + 1)
            return "modes: mode " + std::to_string(n) + " violates H_j (need n >= j+1)";
    if (!(c.support_lo >= 0.0 && c.support_lo < c.support_hi))
        return "support: need 0 <= s0 < s1";
    if (!(c.quad.rel_tol > 0.0 && c.quad.abs_tol > 0.0))
        return "rel_tol/abs_tol: must be > 0";
    if (c.quad.base_rule < 2) return "quad_nodes: must be >= 2";
    for (double l : c.lambda_grid)
        if (l < 0.0 || l > poincare_lambda1(c.N))
            return "lambda_grid: value outside [0, lambda1]";
    if (c.command == "sharpness" && !(0.0 < c.rmin && c.rmin < c.rmax))
        return "rmin/rmax: need 0 < rmin < rmax";
    if (c.command == "sharpness" && c.levels < 1) return "levels: must be >= 1";
    return {};
}

/// Seeded random test function from a config: one windowed random
/// polynomial per requested mode, deterministic in (seed, modes, support).
inline TestFunction config_testfunction(const RunConfig& c)
{
    const ModelManifold m = manifold_by_name(c.manifold, c.N);
    std::vector<std::pair<int, RadialProfile>> terms;
    for (std::size_t i = 0; i < c.modes.size(); ++i)
        terms.emplace_back(c.modes[i],
                           make_random_profile(c.seed + 101 * i, c.support_lo,
                                               c.support_hi, 6));
    return make_testfunction(m, terms, c.j);
}

inline VerificationReport run_verification(const RunConfig& c)
{
    const TestFunction u = config_testfunction(c);
    if (c.target == "eq12") return verify_eq12(u, c.lambda, c.quad);
    if (c.target == "thm21" || c.target == "model27") {
        const BesselPair bp = c.pair == "power" ? power_pair(c.N, c.alpha)
                                                : poincare_pair(c.N, c.lambda);
        return c.target == "thm21" ? verify_thm21(u, bp, c.j, c.quad)
                                   : verify_model(u, bp, c.j, c.quad);
    }
    if (c.target == "thm22" || c.target == "model28") {
        const RadialWeight V = weights::power(-c.alpha);
        return c.target == "thm22" ? verify_thm22(u, V, c.j, c.quad)
                                   : verify_model_identity(u, V, c.j, c.quad);
    }
    if (c.target == "cor23") return verify_cor23(u, c.lambda, std::max(c.j, 0), c.quad);
    if (c.target == "cor24") return verify_cor24(u, c.alpha, c.j, c.quad);
    if (c.target == "ckn25") return verify_ckn(u, c.alpha, c.beta, c.quad);
    if (c.target == "ckn26") return verify_ckn_remainder(u, c.alpha, c.beta, c.quad);
    throw std::invalid_argument("target: unknown verify target '" + c.target + "'");
}

struct SharpnessRun {
    ConstantEstimate estimate;
    std::string csv;   // level,nodes,value
};

inline SharpnessRun run_sharpness(const RunConfig& c)
{
    using cli_detail::fmt17;
    const ModelManifold m = manifold_by_name(c.manifold, c.N);
    ConstantEstimate est;

    if (c.target == "hardy") {
        // Weighted pencil for int V u'^2 dv / int u^2 / r^2 dv; the ladder
        // widens the domain while doubling resolution so both error
        // sources shrink by the same factor.
        est = estimate_constant([&](int lv) {
            const double widen = std::pow(2.0, lv);
            const double lo = std::pow(c.rmin, widen);
            const double hi = std::pow(c.rmax, widen);
            const int elements = std::min(200 << lv, 1600);
            return make_rayleigh_problem(m, c.mode_n, weights::one(),
                                         weights::power(-2.0),
                                         geometric_mesh(lo, hi, elements));
        }, c.levels);
        RadialProfile trial = make_hardy_trial(c.N, 0.02);
        est.trial_family_upper_bound = rayleigh_quotient(
            m, c.mode_n, trial, weights::one(), weights::power(-2.0), c.quad);
    } else if (c.target == "poincare") {
        est = estimate_constant([&](int lv) {
            const int elements = std::min(200 << lv, 1600);
            return make_rayleigh_problem(m, c.mode_n, weights::one(), weights::one(),
                                         geometric_mesh(c.rmin, c.rmax, elements));
        }, c.levels);
    } else if (c.target == "h0-hardy") {
        // Minimum over modes n >= 1 of the pencil with denominator u^2/r^2.
        double best = std::numeric_limits<double>::infinity();
        ConstantEstimate best_est;
        for (int n = 1; n <= 3; ++n) {
            ConstantEstimate e = estimate_constant([&](int lv) {
                const int elements = std::min(200 << lv, 1600);
                return make_rayleigh_problem(m, n, weights::one(),
                                             weights::power(-2.0),
                                             geometric_mesh(c.rmin, c.rmax, elements));
            }, c.levels);
            if (e.extrapolated < best) {
                best = e.extrapolated;
                best_est = e;
            }
        }
        est = best_est;
    } else if (c.target == "ckn") {
        // No linear eigenproblem exists for the product quotient; sweep the
        // Hardy trial family for an upper bound on the CKN quotient.
        double best = std::numeric_limits<double>::infinity();
        for (double eps : {0.2, 0.1, 0.05, 0.02, 0.01}) {
            RadialProfile trial = make_hardy_trial(c.N, eps);
            TestFunction u = make_testfunction(m, {{c.mode_n, trial}}, -1);
            const CknTerms t = ckn_terms(u, c.alpha, c.beta, c.quad);
            best = std::min(best, t.radial_energy.value * t.cross_mass.value /
                                      (t.beta_mass.value * t.beta_mass.value));
            est.mesh_sizes.push_back(0);
            est.values_per_level.push_back(best);
        }
        est.value = best;
        est.extrapolated = best;
    } else {
        throw std::invalid_argument("target: unknown sharpness target '" + c.target + "'");
    }

    SharpnessRun run;
    run.estimate = est;
    std::ostringstream os;
    os << "level,nodes,value\n";
    for (std::size_t i = 0; i < est.values_per_level.size(); ++i)
        os << i << "," << est.mesh_sizes[i] << ","
           << fmt17(est.values_per_level[i]) << "\n";
    os << "extrapolated,," << fmt17(est.extrapolated) << "\n";
    run.csv = os.str();
    return run;
}

struct SweepRow {
    double lambda, alpha, beta;
    VerificationReport report;
};

/// Cartesian product of the declared grids in (lambda, alpha, beta)
/// order; rows are computed on a worker pool capped by HYP_THREADS and
/// emitted in deterministic lexicographic order.
inline std::vector<SweepRow> run_sweep(const RunConfig& c)
{
    std::vector<std::array<double, 3>> tuples;
    const std::vector<double> lg = c.lambda_grid.empty() ? std::vector<double>{c.lambda}
                                                         : c.lambda_grid;
    const std::vector<double> ag = c.alpha_grid.empty() ? std::vector<double>{c.alpha}
                                                        : c.alpha_grid;
    const std::vector<double> bg = c.beta_grid.empty() ? std::vector<double>{c.beta}
                                                       : c.beta_grid;
    if (c.lambda_grid.empty() && c.alpha_grid.empty() && c.beta_grid.empty())
        return {};
    for (double l : lg)
        for (double a : ag)
            for (double b : bg)
                tuples.push_back({l, a, b});

    std::size_t n_threads = 1;
    if (const char* env = std::getenv("HYP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) n_threads = static_cast<std::size_t>(v);
    }
    n_threads = std::min(n_threads, tuples.size());

    std::vector<SweepRow> rows(tuples.size());
    auto work = [&](std::size_t tid) {
        for (std::size_t i = tid; i < tuples.size(); i += n_threads) {
            RunConfig local = c;
            local.lambda = tuples[i][0];
            local.alpha = tuples[i][1];
            local.beta = tuples[i][2];
            rows[i] = SweepRow{local.lambda, local.alpha, local.beta,
                               run_verification(local)};
        }
    };
    if (n_threads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    using cli_detail::fmt17;
    std::ostringstream os;
    os << "lambda,alpha,beta,lhs,rhs,gap_or_residual,kind,verdict\n";
    for (const SweepRow& r : rows)
        os << fmt17(r.lambda) << "," << fmt17(r.alpha) << "," << fmt17(r.beta) << ","
           << fmt17(r.report.lhs) << "," << fmt17(r.report.rhs) << ","
           << fmt17(r.report.gap_or_residual) << "," << to_string(r.report.kind) << ","
           << to_string(r.report.verdict) << "\n";
    return os.str();
}

/// Executes the configured command. Exit codes: 0 on success (no fail
/// verdict), 1 on a fail verdict, 2 on invalid configuration, 3 on
/// quadrature non-convergence.
inline int run(const RunConfig& c, std::ostream& out = std::cout,
               std::ostream& err = std::cerr)
{
    const std::string diag = validate_config(c);
    if (!diag.empty()) {
        err << "invalid configuration: " << diag << "\n";
        return 2;
    }
    std::ofstream file;
    std::ostream* sink = &out;
    if (!c.output_path.empty()) {
        file.open(c.output_path);
        if (!file) {
            err << "invalid configuration: output: cannot open " << c.output_path << "\n";
            return 2;
        }
        sink = &file;
    }

    try {
        if (c.command == "verify") {
            const VerificationReport rep = run_verification(c);
            *sink << rep.to_json().dump(2) << "\n";
            if (!rep.quadrature_converged) return 3;
            return rep.verdict == Verdict::fail ? 1 : 0;
        }
        if (c.command == "sweep") {
            const std::vector<SweepRow> rows = run_sweep(c);
            *sink << sweep_csv(rows);
            bool failed = false, nonconv = false;
            for (const SweepRow& r : rows) {
                failed = failed || r.report.verdict == Verdict::fail;
                nonconv = nonconv || !r.report.quadrature_converged;
            }
            if (nonconv) return 3;
            return failed ? 1 : 0;
        }
        if (c.command == "sharpness") {
            const SharpnessRun sr = run_sharpness(c);
            *sink << sr.csv;
            return sr.estimate.converged ? 0 : 1;
        }
        if (c.command == "bessel") {
            const BesselPair bp = c.pair == "power" ? power_pair(c.N, c.alpha)
                                                    : poincare_pair(c.N, c.lambda);
            const PairValidation v = validate_pair(bp, geometric_grid(1e-2, 20.0, 200));
            nlohmann::json jrep;
            jrep["pair"] = bp.name;
            jrep["N"] = c.N;
            jrep["lambda"] = c.lambda;
            jrep["alpha"] = c.alpha;
            jrep["max_residual"] = v.max_residual;
            jrep["positive"] = v.positive;
            const double tol = c.pair == "power" ? 1e-12 : 1e-8;
            const bool ok = v.positive && v.max_residual <= tol;
            jrep["verdict"] = ok ? "pass" : "fail";
            *sink << jrep.dump(2) << "\n";
            return ok ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace hyhardy
