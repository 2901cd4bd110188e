#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <decolab/timescales.hpp>

#include "support/random.hpp"

using namespace decolab;
using Catch::Approx;
using testsupport::SplitMix64;

static const PhysicalConstants C;

static BodyProfile jupiter() { return find_body(builtin_catalog(C), "jupiter"); }
static BodyProfile hyperion() { return find_body(builtin_catalog(C), "hyperion"); }

TEST_CASE("unexplored area law") {
    ChaosProfile ch;
    ch.q = 0.5;
    ch.lambda_q = 1.0;
    ch.dims = 1;
    ch.m0 = 8.0;
    CHECK(unexplored_area(ch, 0.0) == 8.0);
    CHECK(unexplored_area(ch, 2.0) == Approx(2.0).epsilon(1e-12));  // [1 + 1]^2 = 4

    ChaosProfile strong = ch;
    strong.q = 1.0;
    CHECK(unexplored_area(strong, 5.0) == Approx(8.0 * std::exp(-5.0)).epsilon(1e-12));

    ChaosProfile nearly = ch;
    nearly.q = 1.0 - 1e-8;
    CHECK(unexplored_area(nearly, 5.0) ==
          Approx(8.0 * std::exp(-5.0)).epsilon(1e-6));

    CHECK_THROWS_AS(unexplored_area(ch, -1.0), std::domain_error);
}

TEST_CASE("unexplored area decreases strictly in time") {
    SplitMix64 rng(0x5eed0101);
    for (int i = 0; i < 2000; ++i) {
        ChaosProfile ch;
        ch.q = rng.uniform(0.05, 1.0);
        ch.lambda_q = rng.log_uniform(1e-15, 1e3);
        ch.dims = 1 + static_cast<int>(rng.next() % 3);
        ch.m0 = rng.log_uniform(1e-20, 1e40);
        double t1 = rng.log_uniform(1e-6, 1e2) / ch.lambda_q;
        double t2 = t1 * rng.uniform(1.001, 10.0);
        REQUIRE(unexplored_area(ch, t2) < unexplored_area(ch, t1));
    }
}

TEST_CASE("t_q from the squeezing argument") {
    CHECK(t_q_zurek(1.0, 1.0, std::exp(10.0) * C.hbar, C.hbar) == Approx(10.0).epsilon(1e-12));
    CHECK_THROWS_AS(t_q_zurek(1.0, 1.0, 0.5 * C.hbar, C.hbar), std::domain_error);
    CHECK_THROWS_AS(t_q_zurek(0.0, 1.0, 1.0, C.hbar), std::domain_error);
}

TEST_CASE("jupiter breakdown time lands inside the published band") {
    auto j = jupiter();
    double tq = t_q_zurek(j.lyapunov_per_s, j.chi_cm, j.sigma_p0_gcm_s, C.hbar);
    double years = seconds_to_years(tq);
    CHECK(years == Approx(8.895e8).epsilon(1e-3));
    CHECK(years > 2.3e8);
    CHECK(years < 2.1e9);
}

TEST_CASE("hyperion calibration reproduces the ~20 yr breakdown") {
    auto h = hyperion();
    double tq = t_q_zurek(h.lyapunov_per_s, h.chi_cm, h.sigma_p0_gcm_s, C.hbar);
    double years = seconds_to_years(tq);
    CHECK(years == Approx(19.94).epsilon(1e-3));
    CHECK(years > 10.0);
    CHECK(years < 40.0);
}

TEST_CASE("general t_q branches") {
    ChaosProfile strong;
    strong.q = 1.0;
    strong.lambda_q = 2.0;
    strong.dims = 1;
    strong.m0 = std::exp(20.0) * C.hbar;
    CHECK(t_q_general(strong, C.hbar) == Approx(10.0).epsilon(1e-12));

    ChaosProfile weak;
    weak.q = 0.5;
    weak.lambda_q = 1.0;
    weak.dims = 1;
    weak.m0 = 1e4 * C.hbar;
    CHECK(t_q_general(weak, C.hbar) == Approx(198.0).epsilon(1e-12));

    ChaosProfile below;
    below.q = 1.0;
    below.lambda_q = 1.0;
    below.dims = 2;
    below.m0 = C.hbar * C.hbar * 0.5;
    CHECK_THROWS_AS(t_q_general(below, C.hbar), std::domain_error);
}

TEST_CASE("t_q converges to the strong-chaos value from above") {
    ChaosProfile ch;
    ch.lambda_q = 2.0;
    ch.dims = 1;
    ch.m0 = std::exp(20.0) * C.hbar;
    double strong = 10.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 2; k <= 8; ++k) {
        ch.q = 1.0 - std::pow(10.0, -k);
        double t = t_q_general(ch, C.hbar);
        REQUIRE(t > strong);
        REQUIRE(t < prev);
        prev = t;
    }
    ch.q = 1.0 - 1e-8;
    CHECK(t_q_general(ch, C.hbar) == Approx(strong).epsilon(1e-6));
}

TEST_CASE("closed-form coarse-graining time") {
    // sigma_p sqrt(lambda) / sqrt(2D) = e  ->  t = 1 / lambda
    double lambda = 3.0;
    double sigma = 5.0;
    double d = sigma * sigma * lambda / (2.0 * std::exp(2.0));
    CHECK(t_cg_closed_form(lambda, sigma, d) == Approx(1.0 / lambda).epsilon(1e-12));

    // doubling D lowers t_cg by ln(2) / (2 lambda) exactly
    double t1 = t_cg_closed_form(1.0, 100.0, 1e-3);
    double t2 = t_cg_closed_form(1.0, 100.0, 2e-3);
    CHECK(t1 - t2 == Approx(0.5 * std::log(2.0)).epsilon(1e-9));

    CHECK_THROWS_AS(t_cg_closed_form(1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("jupiter environmental coarse-graining time") {
    auto j = jupiter();
    double d = diffusion_coefficient(make_model(FluctuationKind::Env, j), j, C);
    double t = t_cg_closed_form(j.lyapunov_per_s, j.sigma_p0_gcm_s, d);
    double years = seconds_to_years(t);
    CHECK(years == Approx(3.8896e8).epsilon(1e-3));
    CHECK(years > 1e8);
    CHECK(years < 9e8);
}

TEST_CASE("standoff root matches a reference bisection") {
    // lambda = 1, sigma = e, D = 1/2: the balance t + ln(sqrt(t)) = 1 has root t = 1
    double root = t_cg_standoff(1.0, std::exp(1.0), 0.5);
    CHECK(root == Approx(1.0).epsilon(1e-9));

    // nontrivial root, checked against a direct bisection of the same balance
    auto f = [](double t) { return std::log(1e3) - t - 0.5 * std::log(t); };
    double lo = 1.0, hi = 20.0;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    CHECK(t_cg_standoff(1.0, 1e3, 0.5) == Approx(0.5 * (lo + hi)).epsilon(1e-6));
}

TEST_CASE("standoff stays within the log gap of the closed form") {
    auto j = jupiter();
    double d = diffusion_coefficient(make_model(FluctuationKind::Env, j), j, C);
    double closed = t_cg_closed_form(j.lyapunov_per_s, j.sigma_p0_gcm_s, d);
    double standoff = t_cg_standoff(j.lyapunov_per_s, j.sigma_p0_gcm_s, d);
    CHECK(standoff / closed == Approx(1.0).margin(0.2));
    double gap = std::abs(standoff - closed) * j.lyapunov_per_s;
    CHECK(gap == Approx(0.5 * std::abs(std::log(j.lyapunov_per_s * standoff))).margin(1e-6));
}

TEST_CASE("standoff near the validity edge stays on the lambda scale") {
    // D -> sigma^2 lambda / (2 e) pushes the closed form to lambda^-1 scale
    double lambda = 2.0;
    double sigma = 7.0;
    double d = sigma * sigma * lambda / (2.0 * std::exp(1.0));
    double root = t_cg_standoff(lambda, sigma, d);
    CHECK(root * lambda > 0.3);
    CHECK(root * lambda < 1.5);
}

TEST_CASE("standoff log-gap contract holds over random draws") {
    SplitMix64 rng(0x5eed0102);
    int accepted = 0;
    while (accepted < 10000) {
        double lambda = rng.log_uniform(1e-15, 1e3);
        double sigma = rng.log_uniform(1e-3, 1e37);
        double d = rng.log_uniform(1e-30, 1e30);
        double arg = sigma * std::sqrt(lambda) / std::sqrt(2.0 * d);
        if (!(arg > 1.0) || !std::isfinite(arg)) continue;
        ++accepted;
        double closed = t_cg_closed_form(lambda, sigma, d);
        double standoff = t_cg_standoff(lambda, sigma, d);
        // the two times differ by exactly half the log of the standoff epoch
        double gap = std::abs(standoff - closed) * lambda;
        double expected = 0.5 * std::abs(std::log(lambda * standoff));
        REQUIRE(gap == Approx(expected).margin(1e-5));
        REQUIRE(lambda * standoff > 0.4);  // never collapses below the balance floor
    }
}

TEST_CASE("coarse-graining time falls strictly with diffusion") {
    SplitMix64 rng(0x5eed0103);
    int accepted = 0;
    while (accepted < 10000) {
        double lambda = rng.log_uniform(1e-15, 1e3);
        double sigma = rng.log_uniform(1e-3, 1e37);
        double d = rng.log_uniform(1e-30, 1e20);
        double factor = rng.uniform(1.1, 1e6);
        double arg = sigma * std::sqrt(lambda) / std::sqrt(2.0 * d * factor);
        if (!(arg > 1.0) || !std::isfinite(arg)) continue;
        ++accepted;
        REQUIRE(t_cg_closed_form(lambda, sigma, d * factor) <
                t_cg_closed_form(lambda, sigma, d));
    }
}

TEST_CASE("general coarse-graining branches") {
    ChaosProfile strong;
    strong.q = 1.0;
    strong.lambda_q = 1.0;
    strong.dims = 1;
    strong.m0 = 42.0;
    // argument m0 lambda / (2 sqrt(Dx Dp)) = e^5
    double prod = 42.0 / (2.0 * std::exp(5.0));
    CHECK(t_cg_general(strong, prod, prod) == Approx(5.0).epsilon(1e-12));

    ChaosProfile weak = strong;
    weak.q = 0.5;
    prod = 42.0 / (2.0 * 1e4);
    CHECK(t_cg_general(weak, prod, prod) == Approx(198.0).epsilon(1e-12));

    ChaosProfile nearly = strong;
    nearly.q = 1.0 - 1e-8;
    prod = 42.0 / (2.0 * std::exp(5.0));
    CHECK(t_cg_general(nearly, prod, prod) == Approx(5.0).epsilon(1e-6));

    CHECK_THROWS_AS(t_cg_general(strong, 42.0, 42.0), std::domain_error);
}

TEST_CASE("general forms reduce to the closed forms for dims=1, q=1") {
    SplitMix64 rng(0x5eed0104);
    int accepted = 0;
    while (accepted < 2000) {
        double lambda = rng.log_uniform(1e-15, 1e3);
        double chi = rng.log_uniform(1e-2, 1e14);
        double sigma = rng.log_uniform(1e-3, 1e37);
        double d = rng.log_uniform(1e-30, 1e20);
        if (!(chi * sigma / C.hbar > 1.0)) continue;
        if (!(sigma * std::sqrt(lambda) / std::sqrt(2.0 * d) > 1.0)) continue;
        ++accepted;

        ChaosProfile ch;
        ch.q = 1.0;
        ch.lambda_q = lambda;
        ch.dims = 1;
        ch.m0 = chi * sigma;

        REQUIRE(t_q_general(ch, C.hbar) ==
                Approx(t_q_zurek(lambda, chi, sigma, C.hbar)).epsilon(1e-9));
        REQUIRE(t_cg_general(ch, default_diffusion_x(lambda, chi), d) ==
                Approx(t_cg_closed_form(lambda, sigma, d)).epsilon(1e-9));
    }
}

TEST_CASE("jupiter verdict is safe under every fluctuation model") {
    auto j = jupiter();
    double t_cg_env = 0, t_cg_ggr = 0;
    for (auto kind : {FluctuationKind::Env, FluctuationKind::GRW, FluctuationKind::GPR,
                      FluctuationKind::GGR}) {
        auto report = classicality_verdict(j, make_model(kind, j), C);
        INFO(kind_name(kind));
        CHECK(report.verdict == Verdict::ClassicalitySafe);
        CHECK(report.t_cg_s < report.t_q_s);
        CHECK(report.t_q_s > 0);
        CHECK(report.t_cg_s > 0);
        CHECK(report.intermediates.count("standoff_time_s") == 1);
        if (kind == FluctuationKind::Env) t_cg_env = report.t_cg_s;
        if (kind == FluctuationKind::GGR) t_cg_ggr = report.t_cg_s;
    }
    // GGR diffuses ~1e6 times faster, so it coarse-grains sooner
    CHECK(t_cg_ggr < t_cg_env);
}

TEST_CASE("vanishing diffusion flips the verdict") {
    auto j = jupiter();
    auto report =
        classicality_verdict(j, make_model(FluctuationKind::Env, j), C, std::nullopt, 1e-300);
    CHECK(report.verdict == Verdict::CorrespondenceBreakdown);
    CHECK(report.t_cg_s > report.t_q_s);
}

TEST_CASE("verdict coarse-graining time is monotone in diffusion") {
    SplitMix64 rng(0x5eed0105);
    auto j = jupiter();
    auto model = make_model(FluctuationKind::Env, j);
    for (int i = 0; i < 200; ++i) {
        double d1 = rng.log_uniform(1e-20, 1e5);
        double d2 = d1 * rng.uniform(1.0, 1e3);
        auto r1 = classicality_verdict(j, model, C, std::nullopt, d1);
        auto r2 = classicality_verdict(j, model, C, std::nullopt, d2);
        REQUIRE(r2.t_cg_s <= r1.t_cg_s);
        // safety is monotone: if the larger D breaks down, so does the smaller
        if (r2.verdict == Verdict::CorrespondenceBreakdown)
            REQUIRE(r1.verdict == Verdict::CorrespondenceBreakdown);
    }
}

TEST_CASE("weak-chaos verdict uses the general formulas") {
    auto j = jupiter();
    ChaosProfile ch = default_chaos_profile(j);
    ch.q = 0.9;
    auto report = classicality_verdict(j, make_model(FluctuationKind::Env, j), C, ch);
    CHECK(report.t_q_s == Approx(t_q_general(ch, C.hbar)).epsilon(1e-12));
    CHECK(report.intermediates.count("standoff_time_s") == 0);
    CHECK(report.chaos.q == 0.9);
}

TEST_CASE("report carries years alongside seconds") {
    auto j = jupiter();
    auto report = classicality_verdict(j, make_model(FluctuationKind::Env, j), C);
    CHECK(report.intermediates.at("t_q_years") == Approx(report.t_q_s / 3.156e7));
    CHECK(report.intermediates.at("t_cg_years") == Approx(report.t_cg_s / 3.156e7));
}
