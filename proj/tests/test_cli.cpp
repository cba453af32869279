#include "geoball/cli.hpp"
#include "geoball/specfun.hpp"

#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace geoball;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run_tool(const std::string& args)
{
    const char* tool = std::getenv("GEOBALL_TOOL");
    REQUIRE(tool != nullptr);
    std::string cmd = std::string(tool) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t k;
    while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), k);
    int st = pclose(p);
    return {WEXITSTATUS(st), out};
}

double cell(const Table& t, size_t row, const std::string& col)
{
    for (size_t c = 0; c < t.columns.size(); ++c)
        if (t.columns[c] == col) return std::get<double>(t.rows[row][c]);
    FAIL("missing column " << col);
    return 0;
}

RunConfig config(const std::string& cmd, const std::string& space)
{
    RunConfig c;
    c.command = cmd;
    c.space = space;
    return c;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("eigen command")
{
    auto c = config("eigen", "h3");
    c.radii = {1.0};
    auto t = run_command(c);
    REQUIRE(t.rows.size() == 1);
    CHECK(cell(t, 0, "lambda") == doctest::Approx(std::numbers::pi * std::numbers::pi + 1).epsilon(1e-10));
    c.space = "e2";
    double j = first_bessel_zero(0);
    CHECK(cell(run_command(c), 0, "lambda") == doctest::Approx(j * j).epsilon(1e-10));
    c.oracle = Oracle::both;
    c.fd_nodes = 2000;
    CHECK(cell(run_command(c), 0, "rel_diff") <= 1e-5);
    c.radii.clear();
    CHECK_THROWS_AS(run_command(c), UsageError);
}

TEST_CASE("radii sources")
{
    auto c = config("eigen", "s2");
    c.ladder = Ladder{0.4, 0.5, 5};
    auto man = config_manifold(c);
    auto r = config_radii(c, man);
    REQUIRE(r.size() == 5);
    CHECK(r[4] == doctest::Approx(0.025));
    c.ladder.reset();
    c.ladder_to_R = Ladder{0.1, 0.5, 3};
    r = config_radii(c, man);
    CHECK(r[2] == doctest::Approx(std::numbers::pi - 0.025));
    c.space = "h2";
    CHECK_THROWS_AS(config_radii(c, config_manifold(c)), UsageError);
    CHECK_THROWS_AS(parse_ladder("1,2,3"), UsageError);
    CHECK_THROWS_AS(parse_ladder("1,0.5"), UsageError);
    CHECK(parse_ladder("0.4,0.5,5").count == 5);
    CHECK_THROWS_AS(config_manifold(config("eigen", "q3")), UsageError);
    CHECK_THROWS_AS(config_manifold(config("eigen", "")), UsageError);
}

TEST_CASE("bounds and small-radius commands")
{
    auto c = config("bounds", "s4");
    c.radii = {0.5};
    auto t = run_command(c);
    CHECK(cell(t, 0, "lower") <= cell(t, 0, "lambda"));
    CHECK(std::get<std::string>(t.rows[0][4]) == "true");
    CHECK(std::get<std::string>(t.rows[0][5]) == "true");
    auto e = config("bounds", "e3");
    e.radii = {0.5};
    CHECK_THROWS(run_command(e));

    auto s = config("expand-small", "s2");
    s.ladder = Ladder{0.4, 0.5, 5};
    auto st = run_command(s);
    CHECK(cell(st, 0, "slope") == doctest::Approx(4).epsilon(0.12));
}

TEST_CASE("large-radius command")
{
    auto c = config("expand-large", "s2");
    c.ladder_to_R = Ladder{0.1, 0.5, 6};
    auto t = run_command(c);
    REQUIRE(t.rows.size() == 6);
    double prev = 0;
    for (size_t i = 0; i < t.rows.size(); ++i) {
        double v = cell(t, i, "lambda_log");
        CHECK(v < 0);
        CHECK(v > -0.5);
        if (i) CHECK(v < prev);
        prev = v;
        CHECK(cell(t, i, "upper_bound") >= cell(t, i, "lambda") - 1e-9);
    }
    CHECK(std::abs(prev + 0.5) <= 0.1);
    auto h = config("expand-large", "h2");
    h.radii = {1.0};
    CHECK_THROWS(run_command(h));
}

TEST_CASE("hadamard and constants commands")
{
    auto c = config("verify-hadamard", "h3");
    c.radii = {1.0};
    auto t = run_command(c);
    CHECK(cell(t, 0, "residual") <= 1e-6);
    CHECK(cell(t, 0, "integrated_rel_err") <= 1e-6);
    auto k = config("constants", "s3");
    auto kt = run_command(k);
    CHECK(kt.rows.size() > 10);
    CHECK(std::get<std::string>(kt.rows[0][0]).size() > 0);
}

TEST_CASE("accept command")
{
    RunConfig c;
    c.command = "accept";
    c.criterion = 5;
    auto t = run_command(c);
    REQUIRE(t.rows.size() == 1);
    CHECK(std::get<std::string>(t.rows[0][1]) == "PASS");
    c.criterion = 11;
    CHECK_THROWS_AS(run_command(c), UsageError);
}

TEST_CASE("formats")
{
    Table t;
    t.columns = {"a", "b"};
    t.rows.push_back({0.1, std::string("x,y")});
    t.rows.push_back({std::nan(""), std::string("z")});
    auto csv = format_csv(t);
    CHECK(csv.rfind("a,b\n", 0) == 0);
    CHECK(csv.find("0.10000000000000001") != std::string::npos);
    CHECK(csv.find("\"x,y\"") != std::string::npos);
    auto j = nlohmann::json::parse(format_json(t));
    CHECK(j["a"][0].get<double>() == 0.1);
    CHECK(j["a"][1].is_null());
    CHECK(j["b"][1] == "z");
}

TEST_CASE("tool exit codes and determinism")
{
    CHECK(run_tool("--help").code == 0);
    CHECK(run_tool("").code == 1);
    CHECK(run_tool("nonsense --space s2 --r 1").code == 1);
    CHECK(run_tool("eigen --space s2").code == 1);
    CHECK(run_tool("eigen --space x9 --r 1").code == 1);
    CHECK(run_tool("eigen --space s2 --r 4").code == 1);
    CHECK(run_tool("expand-large --space h3 --r 1").code == 2);

    CHECK(run_tool("accept --criterion 1").code == 0);
    auto many = run_tool("eigen --space s3 --radii 0.5,1,1.5,2,2.5");
    setenv("GEOBALL_THREADS", "1", 1);
    auto one = run_tool("eigen --space s3 --radii 0.5,1,1.5,2,2.5");
    unsetenv("GEOBALL_THREADS");
    CHECK(many.out == one.out);
    auto a = run_tool("eigen --space h3 --r 1");
    CHECK(a.code == 0);
    CHECK(a.out.rfind("r,lambda,residual,method\n", 0) == 0);

    auto dir = std::filesystem::temp_directory_path() / "geoball_cli_test";
    std::filesystem::create_directories(dir);
    auto f1 = dir / "a.json", f2 = dir / "b.json";
    std::string args = "eigen --space s3 --radii 0.5,1,2.5 --format json --out ";
    CHECK(run_tool(args + f1.string()).code == 0);
    CHECK(run_tool(args + f2.string()).code == 0);
    auto s1 = slurp(f1);
    CHECK(s1 == slurp(f2));
    auto j = nlohmann::json::parse(s1);
    CHECK(j["lambda"].size() == 3);
    std::filesystem::remove_all(dir);
}
