#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "mlgrf/config.hpp"
#include "mlgrf/io.hpp"

using namespace mlgrf;

TEST_CASE("config parsing with sections, comments and lists")
{
    const std::string text = R"(
# campaign
[mesh]
dim = 2
extents = 1 1        # unit square
counts = 64 64

[matern]
nu = 1.0
corr_length = 0.1
)";
    Config cfg = Config::parse_text(text);
    CHECK(cfg.get_int("mesh.dim") == 2);
    CHECK(cfg.get_doubles("mesh.extents") == std::vector<double>{1.0, 1.0});
    CHECK(cfg.get_ints("mesh.counts") == std::vector<long long>{64, 64});
    CHECK(cfg.get_double("matern.nu") == 1.0);
    CHECK(cfg.get_double("matern.corr_length") == 0.1);
    CHECK(cfg.get_double("matern.sigma2", 1.0) == 1.0);
    cfg.reject_unknown_keys();
}

TEST_CASE("unknown keys are rejected and errors carry locations")
{
    Config cfg = Config::parse_text("[mesh]\ndim = 2\ntypo_key = 5\n");
    CHECK(cfg.get_int("mesh.dim") == 2);
    CHECK_THROWS_AS(cfg.reject_unknown_keys(), ConfigError);

    CHECK_THROWS_AS(Config::parse_text("novalue\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_text("[broken\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_text("[a]\nx = 1\nx = 2\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_text("x = here").get_double("x"), ConfigError);
    CHECK_THROWS_AS(Config::parse_text("x = 1.5").get_int("x"), ConfigError);
    CHECK_THROWS_AS(Config::parse_text("").get_string("missing"), ConfigError);
}

TEST_CASE("overrides and resolved listing")
{
    Config cfg = Config::parse_text("[solver]\nrtol = 1e-6\n");
    cfg.set("solver.rtol", "1e-8");
    CHECK(cfg.get_double("solver.rtol") == 1e-8);
    const auto lines = cfg.resolved_lines();
    CHECK(lines.size() == 1);
    CHECK(lines[0] == "solver.rtol = 1e-8");
}

TEST_CASE("booleans")
{
    Config cfg = Config::parse_text("[a]\nyes = true\nno = off\n");
    CHECK(cfg.get_bool("a.yes", false));
    CHECK(!cfg.get_bool("a.no", true));
    CHECK(cfg.get_bool("a.missing", true));
    Config bad = Config::parse_text("[a]\nx = maybe\n");
    CHECK_THROWS_AS(bad.get_bool("a.x", false), ConfigError);
}

TEST_CASE("double formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -0.0, 2e-8})
    {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("binary field dumps round-trip bit exactly")
{
    const CartesianMesh mesh = build_cartesian_mesh(2, {0, 0, 0}, {1, 2, 0}, {3, 5, 1});
    Vector values(mesh.num_cells());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = std::sin(static_cast<double>(i)) * 1e-7;

    const std::string path = "roundtrip_field.tmp";
    write_field_binary(path, mesh, values, 2, 0xfeedULL);
    const auto [header, back] = read_field_binary(path);
    CHECK(header.dim == 2);
    CHECK(header.counts[0] == 3);
    CHECK(header.counts[1] == 5);
    CHECK(header.level == 2);
    CHECK(header.seed == 0xfeedULL);
    CHECK(back == values);
    std::remove(path.c_str());

    CHECK_THROWS_AS(read_field_binary("missing_field.bin"), IoError);
}
