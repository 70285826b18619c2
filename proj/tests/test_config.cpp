#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <sstream>

#include "config.hpp"
#include "output.hpp"

using namespace sp4::cli;

TEST_CASE("complex literals")
{
    CHECK(parse_complex("1.5") == cplx(1.5, 0.0));
    CHECK(parse_complex("1+2i") == cplx(1.0, 2.0));
    CHECK(parse_complex("1 - 2i") == cplx(1.0, -2.0));
    CHECK(parse_complex("-0.5i") == cplx(0.0, -0.5));
    CHECK(parse_complex("i") == cplx(0.0, 1.0));
    CHECK(parse_complex("-i") == cplx(0.0, -1.0));
    CHECK(parse_complex("2-i") == cplx(2.0, -1.0));
    CHECK(parse_complex("1e-3+2e+1i") == cplx(1e-3, 20.0));
    CHECK(parse_complex("0.3,1.1") == cplx(0.3, 1.1));
    CHECK(parse_complex("3j") == cplx(0.0, 3.0));
    CHECK_THROWS(parse_complex(""));
    CHECK_THROWS(parse_complex("abc"));
    CHECK_THROWS(parse_complex("1+2x"));
}

TEST_CASE("config file parsing")
{
    std::istringstream in(R"(# comment
[run]
command = solve
seed = 42

[grid]
n = 32
tau = 0.3,1.1
area = 6.0

[higgs]
mu = 1+0.5i
nu = 0.25
degree = 3
genus = 3
preset = mu_cos

[solver]
tol = 1e-9
mode = full
init = nondiagonal
background = flat

[output]
format = csv
file = out.csv
)");
    const RunConfig c = parse_config(in);
    CHECK(c.command == "solve");
    CHECK(c.seed == 42);
    CHECK(c.n == 32);
    CHECK(c.tau == cplx(0.3, 1.1));
    CHECK(c.area == 6.0);
    CHECK(c.mu == cplx(1.0, 0.5));
    CHECK(c.nu == cplx(0.25, 0.0));
    CHECK(c.degree == 3);
    CHECK(c.degree_set);
    CHECK(c.genus == 3);
    CHECK(c.preset == "mu_cos");
    CHECK(c.tol == 1e-9);
    CHECK(c.full);
    CHECK(c.init == "nondiagonal");
    CHECK(c.background == "flat");
    CHECK(c.format == "csv");
    CHECK(c.file == "out.csv");
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("strict parsing reports line and field")
{
    auto fails_at = [](const std::string& text, int line, const std::string& field) {
        std::istringstream in(text);
        try {
            parse_config(in);
        } catch (const ConfigError& e) {
            CHECK(e.line == line);
            CHECK(e.field == field);
            return;
        }
        FAIL("no error for: " << text);
    };
    fails_at("[grid]\nn = 16\nsize = 3\n", 3, "size");
    fails_at("[grids]\n", 1, "grids");
    fails_at("n = 16\n", 1, "n");
    fails_at("[grid]\nn = sixteen\n", 2, "n");
    fails_at("[grid]\nn = 16x\n", 2, "n");
    fails_at("[solver]\nmode = fast\n", 2, "mode");
    fails_at("[grid]\njunk\n", 2, "junk");
    fails_at("[grid\n", 1, "[grid");
}

TEST_CASE("validation")
{
    RunConfig c;
    CHECK_NOTHROW(validate(c));
    auto bad = [&](auto edit) {
        RunConfig d;
        edit(d);
        CHECK_THROWS_AS(validate(d), std::invalid_argument);
    };
    bad([](RunConfig& d) { d.tol = 0.0; });
    bad([](RunConfig& d) { d.n = 6; });
    bad([](RunConfig& d) { d.n = 33; });
    bad([](RunConfig& d) { d.tau = {0.0, -1.0}; });
    bad([](RunConfig& d) { d.area = -1.0; });
    bad([](RunConfig& d) { d.init = "warm"; });
    bad([](RunConfig& d) { d.background = "curved"; });
    bad([](RunConfig& d) { d.preset = "gauss"; });
    bad([](RunConfig& d) { d.format = "json"; });
    bad([](RunConfig& d) { d.max_iter = 0; });
}

TEST_CASE("set_value follows the file schema")
{
    RunConfig c;
    set_value(c, "higgs", "q2", "0.1-0.2i");
    CHECK(c.q2 == cplx(0.1, -0.2));
    CHECK_THROWS(set_value(c, "higgs", "lambda", "1"));
    CHECK_THROWS(set_value(c, "physics", "q2", "1"));
}

TEST_CASE("output directory override")
{
    RunConfig c;
    c.dir = "results";
    ::unsetenv("SP4_OUTPUT_DIR");
    CHECK(output_dir(c) == "results");
    CHECK(resolve_output(c, "a.csv") == "results/a.csv");
    CHECK(resolve_output(c, "/tmp/a.csv") == "/tmp/a.csv");
    ::setenv("SP4_OUTPUT_DIR", "/tmp/sp4out", 1);
    CHECK(output_dir(c) == "/tmp/sp4out");
    CHECK(resolve_output(c, "a.csv") == "/tmp/sp4out/a.csv");
    ::unsetenv("SP4_OUTPUT_DIR");
}

TEST_CASE("number formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) CHECK(std::strtod(fmt(v).c_str(), nullptr) == v);
    CHECK(fmt(1.0) == "1");
    CHECK(fmt(cplx(1.0, 0.0)) == "1");
    CHECK(fmt(cplx(0.5, -2.0)) == "0.5-2i");
    CHECK(fmt(cplx(0.0, 1.0)) == "0+1i");
}

TEST_CASE("text and CSV records")
{
    Record a, b, c;
    a.add("x", 1).add("note", "plain");
    b.add("x", 2).add("note", "has, comma and \"quote\"");
    c.add("y", true);
    CHECK(to_text({a, c}) == "x: 1\nnote: plain\n\ny: true\n");
    const std::string csv = to_csv({a, b, c});
    CHECK(csv == "x,note\r\n1,plain\r\n2,\"has, comma and \"\"quote\"\"\"\r\n\r\ny\r\ntrue\r\n");
    CHECK(csv_field("a\nb") == "\"a\nb\"");
    CHECK(csv_field("plain") == "plain");
}
