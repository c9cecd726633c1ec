#include <catch2/catch_amalgamated.hpp>

#include <hyhardy/cli.hpp>

#include <sstream>

using namespace hyhardy;
using Catch::Approx;

TEST_CASE("config round trip", "[cli]")
{
    RunConfig c;
    c.command = "sweep";
    c.target = "cor24";
    c.manifold = "euclidean";
    c.N = 5;
    c.lambda = 0.75;
    c.alpha = -1.25;
    c.beta = 2.5;
    c.j = 1;
    c.modes = {2, 4};
    c.support_lo = 0.25;
    c.support_hi = 7.5;
    c.seed = 42;
    c.quad.rel_tol = 1e-9;
    c.quad.abs_tol = 1e-13;
    c.quad.base_rule = 24;
    c.output_path = "/tmp/out.csv";
    c.format = "csv";
    c.pair = "power";
    c.mode_n = 2;
    c.rmin = 1e-4;
    c.rmax = 50.0;
    c.levels = 5;
    c.lambda_grid = {0.0, 0.5, 1.0};
    c.alpha_grid = {-1.0};
    c.beta_grid = {};

    std::istringstream in(serialize_config(c));
    RunConfig d = parse_config(in);

    CHECK(d.command == c.command);
    CHECK(d.target == c.target);
    CHECK(d.manifold == c.manifold);
    CHECK(d.N == c.N);
    CHECK(d.lambda == c.lambda);
    CHECK(d.alpha == c.alpha);
    CHECK(d.beta == c.beta);
    CHECK(d.j == c.j);
    CHECK(d.modes == c.modes);
    CHECK(d.support_lo == c.support_lo);
    CHECK(d.support_hi == c.support_hi);
    CHECK(d.seed == c.seed);
    CHECK(d.quad.rel_tol == c.quad.rel_tol);
    CHECK(d.quad.abs_tol == c.quad.abs_tol);
    CHECK(d.quad.base_rule == c.quad.base_rule);
    CHECK(d.output_path == c.output_path);
    CHECK(d.format == c.format);
    CHECK(d.pair == c.pair);
    CHECK(d.mode_n == c.mode_n);
    CHECK(d.rmin == c.rmin);
    CHECK(d.rmax == c.rmax);
    CHECK(d.levels == c.levels);
    CHECK(d.lambda_grid == c.lambda_grid);
    CHECK(d.alpha_grid == c.alpha_grid);
    CHECK(d.beta_grid == c.beta_grid);
}

TEST_CASE("config file parsing details", "[cli]")
{
    std::istringstream in(
        "# comment line\n"
        "N = 4   # trailing comment\n"
        "\n"
        "lambda=1.5\n"
        "modes = 1,2,3\n");
    RunConfig c = parse_config(in);
    CHECK(c.N == 4);
    CHECK(c.lambda == 1.5);
    CHECK(c.modes == std::vector<int>{1, 2, 3});

    std::istringstream bad("frobnicate = 7\n");
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
}

TEST_CASE("config validation diagnostics", "[cli]")
{
    RunConfig c;
    CHECK(validate_config(c).empty());

    auto diag = [](RunConfig cfg) { return validate_config(cfg); };

    RunConfig bad = c;
    bad.command = "explode";
    CHECK(diag(bad).find("command") == 0);

    bad = c; bad.manifold = "spherical";
    CHECK(diag(bad).find("manifold") == 0);

    bad = c; bad.N = 1;
    CHECK(diag(bad).find("N") == 0);

    bad = c; bad.lambda = 5.0;    // above ((3-1)/2)^2 = 1
    CHECK(diag(bad).find("lambda") == 0);

    bad = c; bad.j = 1; bad.modes = {1};
    CHECK(diag(bad).find("modes") == 0);

    bad = c; bad.support_lo = 3.0; bad.support_hi = 1.0;
    CHECK(diag(bad).find("support") == 0);

    bad = c; bad.quad.rel_tol = 0.0;
    CHECK(diag(bad).find("rel_tol") == 0);

    bad = c; bad.lambda_grid = {0.5, 2.0};
    CHECK(diag(bad).find("lambda_grid") == 0);

    bad = c; bad.command = "sharpness"; bad.rmin = -1.0;
    CHECK(diag(bad).find("rmin") == 0);
}

TEST_CASE("verification dispatch and exit codes", "[cli]")
{
    RunConfig c;
    c.command = "verify";
    c.target = "thm21";
    c.j = 0;
    c.modes = {1, 2};

    SECTION("pass run exits 0 with a json report")
    {
        std::ostringstream out, err;
        CHECK(run(c, out, err) == 0);
        auto j = nlohmann::json::parse(out.str());
        CHECK(j["target"] == "thm21");
        CHECK(j["verdict"] == "pass");
        CHECK(err.str().empty());
    }

    SECTION("deterministic output")
    {
        std::ostringstream a, b, err;
        run(c, a, err);
        run(c, b, err);
        CHECK(a.str() == b.str());
    }

    SECTION("invalid parameter exits 2 with a diagnostic")
    {
        RunConfig bad = c;
        bad.lambda = 5.0;
        std::ostringstream out, err;
        CHECK(run(bad, out, err) == 2);
        CHECK(err.str().find("lambda") != std::string::npos);
    }

    SECTION("unknown verify target exits 2")
    {
        RunConfig bad = c;
        bad.target = "nothing";
        std::ostringstream out, err;
        CHECK(run(bad, out, err) == 2);
    }

    SECTION("every verify target dispatches")
    {
        for (const char* target : {"eq12", "thm21", "thm22", "cor23", "cor24",
                                   "model27", "model28"}) {
            RunConfig t = c;
            t.target = target;
            std::ostringstream out, err;
            INFO(target);
            CHECK(run(t, out, err) == 0);
        }
        RunConfig t = c;
        t.manifold = "euclidean";
        t.beta = 2.0;
        for (const char* target : {"ckn25", "ckn26"}) {
            t.target = target;
            std::ostringstream out, err;
            INFO(target);
            CHECK(run(t, out, err) == 0);
        }
    }
}

TEST_CASE("sweep", "[cli]")
{
    RunConfig c;
    c.command = "sweep";
    c.target = "cor23";
    c.j = 0;
    c.modes = {1};
    c.lambda_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    c.quad.rel_tol = 1e-9;

    SECTION("row count and order follow the grid")
    {
        auto rows = run_sweep(c);
        REQUIRE(rows.size() == 5);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].lambda == c.lambda_grid[i]);
            CHECK(rows[i].report.verdict == Verdict::pass);
        }
    }

    SECTION("csv has a header plus one line per row")
    {
        auto csv = sweep_csv(run_sweep(c));
        std::size_t lines = 0;
        for (char ch : csv) lines += ch == '\n';
        CHECK(lines == 6);
        CHECK(csv.rfind("lambda,alpha,beta,", 0) == 0);
    }

    SECTION("cartesian product over two grids")
    {
        RunConfig c2 = c;
        c2.target = "cor24";
        c2.lambda_grid = {0.0, 0.5};
        c2.alpha_grid = {-1.0, 0.0, 0.5};
        auto rows = run_sweep(c2);
        REQUIRE(rows.size() == 6);
        CHECK(rows[0].alpha == -1.0);
        CHECK(rows[2].alpha == 0.5);
        CHECK(rows[3].lambda == 0.5);
    }

    SECTION("empty grids produce no rows, header only")
    {
        RunConfig c2 = c;
        c2.lambda_grid.clear();
        auto rows = run_sweep(c2);
        CHECK(rows.empty());
        std::ostringstream out, err;
        CHECK(run(c2, out, err) == 0);
        CHECK(out.str() == "lambda,alpha,beta,lhs,rhs,gap_or_residual,kind,verdict\n");
    }

    SECTION("threaded run matches the serial one")
    {
        auto serial = sweep_csv(run_sweep(c));
        setenv("HYP_THREADS", "4", 1);
        auto threaded = sweep_csv(run_sweep(c));
        unsetenv("HYP_THREADS");
        CHECK(serial == threaded);
    }
}

TEST_CASE("bessel command", "[cli]")
{
    RunConfig c;
    c.command = "bessel";
    c.pair = "poincare";
    c.lambda = 0.5;
    std::ostringstream out, err;
    CHECK(run(c, out, err) == 0);
    auto j = nlohmann::json::parse(out.str());
    CHECK(j["verdict"] == "pass");
    CHECK(j["max_residual"].get<double>() < 1e-8);

    RunConfig p = c;
    p.pair = "power";
    std::ostringstream out2, err2;
    CHECK(run(p, out2, err2) == 0);
    auto j2 = nlohmann::json::parse(out2.str());
    CHECK(j2["max_residual"].get<double>() < 1e-12);
}

TEST_CASE("sharpness command", "[cli]")
{
    RunConfig c;
    c.command = "sharpness";
    c.target = "poincare";
    c.manifold = "hyperbolic";
    c.N = 3;
    c.rmin = 1e-3;
    c.rmax = 40.0;
    c.levels = 3;

    SharpnessRun sr = run_sharpness(c);
    REQUIRE(sr.estimate.converged);
    CHECK(sr.estimate.extrapolated == Approx(1.0).margin(0.05));
    CHECK(sr.csv.rfind("level,nodes,value\n", 0) == 0);
    CHECK(sr.csv.find("extrapolated") != std::string::npos);

    std::ostringstream out, err;
    CHECK(run(c, out, err) == 0);
    CHECK(out.str() == sr.csv);
}

TEST_CASE("output file plumbing", "[cli]")
{
    RunConfig c;
    c.command = "verify";
    c.target = "thm22";
    c.j = 0;
    c.modes = {1};
    c.output_path = "/nonexistent-dir/x.json";
    std::ostringstream out, err;
    CHECK(run(c, out, err) == 2);
    CHECK(err.str().find("output") != std::string::npos);
}
