#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <decolab/catalog.hpp>

using namespace decolab;
using Catch::Approx;

static const PhysicalConstants C;

TEST_CASE("constants are positive CGS values") {
    CHECK(C.hbar == Approx(1.0545718e-27).epsilon(1e-6));
    CHECK(C.G == Approx(6.674e-8).epsilon(1e-3));
    CHECK(C.k_B == Approx(1.380649e-16).epsilon(1e-9));
    CHECK(C.proton_mass == Approx(1.6726e-24).epsilon(1e-3));
    CHECK(seconds_to_years(3.156e7) == 1.0);
    CHECK(years_to_seconds(2.0) == Approx(6.312e7));
}

TEST_CASE("builtin jupiter profile") {
    auto cat = builtin_catalog(C);
    const auto& j = find_body(cat, "jupiter");
    CHECK(j.mass_g == Approx(1.9e30).epsilon(0.05));
    CHECK(j.volume_cm3 == Approx(1.4e30).epsilon(0.05));
    CHECK(j.temperature_K == 100.0);
    CHECK(j.relax_rate_per_s == 1e-26);
    CHECK(j.sigma_p0_gcm_s == Approx(2.5e36).epsilon(0.05));
    CHECK(j.chi_cm == Approx(7.8e13).epsilon(0.01));
    // derived nucleon count: mass / proton mass
    CHECK(j.particle_count == Approx(1.1348e54).epsilon(1e-3));
    // derived cross section: pi R^2 of the volume-equivalent sphere
    CHECK(j.s_perp_cm2 == Approx(1.5355e20).epsilon(1e-3));
}

TEST_CASE("builtin hyperion profile") {
    auto cat = builtin_catalog(C);
    const auto& h = find_body(cat, "hyperion");
    CHECK(h.mass_g == Approx(5.6e21).epsilon(0.01));
    CHECK(h.particle_count == Approx(3.348e45).epsilon(1e-3));
    CHECK(h.lyapunov_per_s == Approx(2.4e-7).epsilon(1e-9));
    CHECK(h.s_perp_cm2 == Approx(5.7246e14).epsilon(1e-3));
}

TEST_CASE("default_sigma_p0 is mass times orbital speed") {
    auto cat = builtin_catalog(C);
    const auto& j = find_body(cat, "jupiter");
    CHECK(default_sigma_p0(j, 1.3e6) == Approx(2.5e36).epsilon(0.05));

    BodyProfile unit;
    unit.mass_g = 1.0;
    CHECK(default_sigma_p0(unit, 1.0) == 1.0);

    CHECK_THROWS_AS(default_sigma_p0(j, 0.0), std::domain_error);
    CHECK_THROWS_AS(default_sigma_p0(j, -2.0), std::domain_error);
}

TEST_CASE("catalog file round-trips bit-exactly") {
    auto cat = builtin_catalog(C);
    std::string text = serialize_catalog(cat);
    std::istringstream in(text);
    auto reloaded = load_catalog(in, "roundtrip", C);
    REQUIRE(reloaded.size() == cat.size());
    for (size_t i = 0; i < cat.size(); ++i) {
        CHECK(reloaded[i].name == cat[i].name);
        CHECK(reloaded[i].mass_g == cat[i].mass_g);
        CHECK(reloaded[i].volume_cm3 == cat[i].volume_cm3);
        CHECK(reloaded[i].particle_count == cat[i].particle_count);
        CHECK(reloaded[i].temperature_K == cat[i].temperature_K);
        CHECK(reloaded[i].relax_rate_per_s == cat[i].relax_rate_per_s);
        CHECK(reloaded[i].sigma_p0_gcm_s == cat[i].sigma_p0_gcm_s);
        CHECK(reloaded[i].lyapunov_per_s == cat[i].lyapunov_per_s);
        CHECK(reloaded[i].s_perp_cm2 == cat[i].s_perp_cm2);
        CHECK(reloaded[i].chi_cm == cat[i].chi_cm);
    }
}

TEST_CASE("loading a custom catalog keeps the builtins") {
    std::istringstream in(
        "[pebble]\n"
        "mass_g = 1.0\n"
        "volume_cm3 = 0.4\n"
        "temperature_K = 300\n"
        "relax_rate_per_s = 1e-10\n"
        "sigma_p0_gcm_s = 10\n"
        "lyapunov_per_s = 0.01\n"
        "chi_cm = 1.0\n");
    auto cat = load_catalog(in, "custom", C);
    CHECK_NOTHROW(find_body(cat, "jupiter"));
    CHECK_NOTHROW(find_body(cat, "hyperion"));
    const auto& p = find_body(cat, "pebble");
    CHECK(p.particle_count == Approx(1.0 / 1.67262192369e-24));
    // pi * (3V / 4pi)^(2/3)
    CHECK(p.s_perp_cm2 == Approx(0.6563429036687329).epsilon(1e-10));
}

TEST_CASE("catalog entries can override builtins") {
    std::istringstream in(
        "[jupiter]\n"
        "mass_g = 2.0e30\n"
        "volume_cm3 = 1.5e30\n"
        "temperature_K = 110\n"
        "relax_rate_per_s = 1e-25\n"
        "sigma_p0_gcm_s = 2.6e36\n"
        "lyapunov_per_s = 1e-14\n"
        "chi_cm = 8e13\n");
    auto cat = load_catalog(in, "override", C);
    int jupiters = 0;
    for (const auto& b : cat)
        if (b.name == "jupiter") ++jupiters;
    CHECK(jupiters == 1);
    CHECK(find_body(cat, "jupiter").mass_g == 2.0e30);
}

TEST_CASE("missing required field names the field") {
    std::istringstream in(
        "[rock]\n"
        "volume_cm3 = 0.4\n"
        "temperature_K = 300\n"
        "relax_rate_per_s = 1e-10\n"
        "sigma_p0_gcm_s = 10\n"
        "lyapunov_per_s = 0.01\n"
        "chi_cm = 1.0\n");
    CHECK_THROWS_WITH(load_catalog(in, "bad", C), Catch::Matchers::ContainsSubstring("mass_g"));
}

TEST_CASE("malformed catalog lines report the location") {
    std::istringstream in("[rock]\nmass_g 1.0\n");
    CHECK_THROWS_WITH(load_catalog(in, "bad", C), Catch::Matchers::ContainsSubstring("bad:2"));

    std::istringstream in2("mass_g = 1.0\n");
    CHECK_THROWS_AS(load_catalog(in2, "bad", C), config_error);

    std::istringstream in3("[rock]\nmass_g = squish\n");
    CHECK_THROWS_AS(load_catalog(in3, "bad", C), config_error);
}

TEST_CASE("validation rejects out-of-range fields") {
    auto base = [] {
        BodyProfile b;
        b.name = "test";
        b.mass_g = 1.0;
        b.volume_cm3 = 1.0;
        b.temperature_K = 300;
        b.relax_rate_per_s = 1e-10;
        b.sigma_p0_gcm_s = 10;
        b.lyapunov_per_s = 0.01;
        b.chi_cm = 1.0;
        return b;
    };

    CHECK_NOTHROW(complete_body(base(), C));

    auto neg_mass = base();
    neg_mass.mass_g = -1.0;
    CHECK_THROWS_AS(complete_body(neg_mass, C), config_error);

    auto neg_temp = base();
    neg_temp.temperature_K = -5;
    CHECK_THROWS_AS(complete_body(neg_temp, C), config_error);

    // nucleon count must stay within a factor of 2 of mass / proton mass
    auto wrong_n = base();
    wrong_n.particle_count = 10 * derived_particle_count(wrong_n, C);
    CHECK_THROWS_WITH(complete_body(wrong_n, C),
                      Catch::Matchers::ContainsSubstring("particle_count"));

    // macroscopicity guard: sigma_p0 * chi / hbar must exceed 1e10
    auto quantum_scale = base();
    quantum_scale.sigma_p0_gcm_s = 1e-20;
    CHECK_THROWS_AS(complete_body(quantum_scale, C), config_error);
}

TEST_CASE("every builtin body passes the macroscopicity guard") {
    for (const auto& b : builtin_catalog(C))
        CHECK(b.sigma_p0_gcm_s * b.chi_cm / C.hbar > 1e10);
}

TEST_CASE("unknown body lookup fails") {
    auto cat = builtin_catalog(C);
    CHECK_THROWS_WITH(find_body(cat, "nosuch"), Catch::Matchers::ContainsSubstring("nosuch"));
}

TEST_CASE("default chaos profile mirrors the body") {
    auto cat = builtin_catalog(C);
    const auto& j = find_body(cat, "jupiter");
    auto ch = default_chaos_profile(j);
    CHECK(ch.q == 1.0);
    CHECK(ch.dims == 1);
    CHECK(ch.lambda_q == j.lyapunov_per_s);
    CHECK(ch.m0 == j.chi_cm * j.sigma_p0_gcm_s);
    CHECK_NOTHROW(validate_chaos(ch));

    ChaosProfile bad = ch;
    bad.q = 1.5;
    CHECK_THROWS_AS(validate_chaos(bad), config_error);
}
