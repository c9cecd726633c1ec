// Command-line entry point: verify / sharpness / sweep / bessel validate.

#include <CLI11.hpp>

#include <hyhardy/cli.hpp>

#include <fstream>
#include <iostream>

namespace {

void add_common(CLI::App* app, hyhardy::RunConfig& cfg, std::string& config_path)
{
    app->add_option("--config", config_path, "key = value configuration file");
    app->add_option("--manifold", cfg.manifold, "hyperbolic | euclidean");
    app->add_option("--N", cfg.N, "dimension");
    app->add_option("--lambda", cfg.lambda, "spectral parameter in [0, ((N-1)/2)^2]");
    app->add_option("--alpha", cfg.alpha, "weight exponent");
    app->add_option("--beta", cfg.beta, "weight exponent");
    app->add_option("--j", cfg.j, "subspace index (-1 = unconstrained)");
    app->add_option("--modes", [&cfg](const std::vector<std::string>& vals) {
        cfg.modes = hyhardy::cli_detail::split_list<int>(vals.back());
        return true;
    }, "comma-separated harmonic degrees, e.g. 1,2,3");
    app->add_option("--support", [&cfg](const std::vector<std::string>& vals) {
        hyhardy::apply_config_line(cfg, "support", vals.back());
        return true;
    }, "profile support s0:s1");
    app->add_option("--seed", cfg.seed, "profile RNG seed");
    app->add_option("--rel-tol", cfg.quad.rel_tol, "quadrature relative tolerance");
    app->add_option("--abs-tol", cfg.quad.abs_tol, "quadrature absolute floor");
    app->add_option("--quad-nodes", cfg.quad.base_rule, "Gauss-Legendre nodes per panel");
    app->add_option("--output,-o", cfg.output_path, "output file (default stdout)");
    app->add_option("--format", cfg.format, "json | csv");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical verification of Poincare-Hardy and CKN inequalities "
                 "on rotationally symmetric model manifolds"};
    app.require_subcommand(1);

    hyhardy::RunConfig cfg;
    std::string config_path;

    auto* verify = app.add_subcommand("verify", "verify one identity or inequality");
    add_common(verify, cfg, config_path);
    verify->add_option("--target", cfg.target,
                       "eq12|thm21|thm22|cor23|cor24|ckn25|ckn26|model27|model28");
    verify->add_option("--pair", cfg.pair, "poincare | power (thm21/model27)");

    auto* sharp = app.add_subcommand("sharpness", "estimate a best constant");
    add_common(sharp, cfg, config_path);
    sharp->add_option("--target", cfg.target, "hardy|poincare|h0-hardy|ckn");
    sharp->add_option("--mode", cfg.mode_n, "harmonic degree of the trial space");
    sharp->add_option("--rmin", cfg.rmin, "inner truncation radius");
    sharp->add_option("--rmax", cfg.rmax, "outer truncation radius");
    sharp->add_option("--levels", cfg.levels, "refinement ladder length");

    auto* sweep = app.add_subcommand("sweep", "parameter sweep, CSV output");
    add_common(sweep, cfg, config_path);
    sweep->add_option("--target", cfg.target, "verify target to sweep");
    sweep->add_option("--pair", cfg.pair, "poincare | power");
    sweep->add_option("--lambda-grid", [&cfg](const std::vector<std::string>& vals) {
        cfg.lambda_grid = hyhardy::cli_detail::split_list<double>(vals.back());
        return true;
    }, "comma-separated lambda values");
    sweep->add_option("--alpha-grid", [&cfg](const std::vector<std::string>& vals) {
        cfg.alpha_grid = hyhardy::cli_detail::split_list<double>(vals.back());
        return true;
    }, "comma-separated alpha values");
    sweep->add_option("--beta-grid", [&cfg](const std::vector<std::string>& vals) {
        cfg.beta_grid = hyhardy::cli_detail::split_list<double>(vals.back());
        return true;
    }, "comma-separated beta values");

    auto* bessel = app.add_subcommand("bessel", "Bessel pair operations");
    auto* bvalidate = bessel->add_subcommand("validate",
                                             "ODE residual of a catalog pair");
    add_common(bvalidate, cfg, config_path);
    bvalidate->add_option("--pair", cfg.pair, "poincare | power");

    // File first, flags override: pre-scan argv for --config, load the
    // file into cfg, then let CLI11 write flag values on top.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) {
                std::cerr << "invalid configuration: config: cannot open "
                          << argv[i + 1] << "\n";
                return 2;
            }
            try {
                cfg = hyhardy::parse_config(in, cfg);
            } catch (const std::exception& e) {
                std::cerr << "invalid configuration: " << e.what() << "\n";
                return 2;
            }
        }
    }

    CLI11_PARSE(app, argc, argv);

    if (verify->parsed()) cfg.command = "verify";
    else if (sharp->parsed()) cfg.command = "sharpness";
    else if (sweep->parsed()) cfg.command = "sweep";
    else if (bessel->parsed()) cfg.command = "bessel";

    try {
        return hyhardy::run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
