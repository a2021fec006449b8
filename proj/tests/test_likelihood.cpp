#include <catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "acsel/likelihood.hpp"
#include "acsel/simulate.hpp"
#include "oracle.hpp"

using namespace acsel;

namespace {

ModelSpec random_small_spec(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> fam(0, 1), order(0, 2);
    if (fam(rng) == 0) return arma(order(rng), order(rng));
    std::uniform_int_distribution<int> gq(0, 2);
    int p = order(rng), q = gq(rng);
    if (p == 0 && q == 0) p = 1;
    return garch(p, q);
}

std::vector<double> random_feasible_theta(const ModelSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> theta(static_cast<std::size_t>(dimension(spec)));
    if (spec.family == Family::ARMA) {
        for (std::size_t i = 0; i + 1 < theta.size(); ++i) theta[i] = 1.2 * (u(rng) - 0.5);
        theta.back() = 0.2 + 2.0 * u(rng);
    } else {
        theta[0] = 0.05 + u(rng);
        for (std::size_t i = 1; i < theta.size(); ++i) theta[i] = 0.4 * u(rng);
    }
    return project_feasible(spec, theta);
}

}  // namespace

TEST_CASE("filter hand cases") {
    SECTION("white noise identity") {
        const auto out = filter(arma(0, 0), {1.0}, {1.0, -1.0});
        CHECK(out.f_hat == std::vector<double>{0.0, 0.0});
        CHECK(out.h_hat == std::vector<double>{1.0, 1.0});
        CHECK(out.residuals == std::vector<double>{1.0, -1.0});
    }
    SECTION("AR(1) one-step recursion with zero past") {
        const auto out = filter(arma(1, 0), {0.5, 1.0}, {2.0, 1.0, 0.0});
        CHECK(out.f_hat == std::vector<double>{0.0, 1.0, 0.5});
    }
    SECTION("GARCH(1,1) recursion initialized at a0") {
        const auto out = filter(garch(1, 1), {0.1, 0.2, 0.3}, {1.0, 2.0});
        CHECK(out.h_hat[0] == Catch::Approx(0.13).epsilon(1e-12));
        CHECK(out.h_hat[1] == Catch::Approx(0.339).epsilon(1e-12));
    }
}

TEST_CASE("quasi_log_likelihood hand cases") {
    CHECK(quasi_log_likelihood(arma(0, 0), {1.0}, {1.0, -1.0}) == Catch::Approx(-1.0));
    const double e = std::exp(1.0);
    CHECK(quasi_log_likelihood(arma(0, 0), {e}, {1.0, -1.0}) ==
          Catch::Approx(-(1.0 / e + 1.0)).epsilon(1e-12));
    CHECK(acsel_test::oracle_likelihood(arma(0, 0), {1.0}, {1.0, -1.0}) == Catch::Approx(-1.0));
    // GARCH hand case against the oracle route
    CHECK(quasi_log_likelihood(garch(1, 1), {0.1, 0.2, 0.3}, {1.0, 2.0}) ==
          Catch::Approx(acsel_test::oracle_likelihood(garch(1, 1), {0.1, 0.2, 0.3}, {1.0, 2.0}))
              .epsilon(1e-14));
}

TEST_CASE("oracle equivalence on random triples") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g(0.0, 1.5);
    std::uniform_int_distribution<int> len(5, 200);
    for (int rep = 0; rep < 300; ++rep) {
        const auto spec = random_small_spec(rng);
        const auto theta = random_feasible_theta(spec, rng);
        std::vector<double> x(static_cast<std::size_t>(len(rng)));
        for (auto& v : x) v = g(rng);
        const double a = quasi_log_likelihood(spec, theta, x);
        const double b = acsel_test::oracle_likelihood(spec, theta, x);
        REQUIRE(std::fabs(a - b) <= 1e-10);
    }
}

TEST_CASE("conditional variances respect the floor and the residual identity") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    const Constraints c;
    for (int rep = 0; rep < 100; ++rep) {
        const auto spec = random_small_spec(rng);
        const auto theta = random_feasible_theta(spec, rng);
        std::vector<double> x(100);
        for (auto& v : x) v = g(rng);
        const auto out = filter(spec, theta, x, c);
        for (std::size_t t = 0; t < x.size(); ++t) {
            CHECK(out.h_hat[t] >= c.h_floor);
            CHECK(x[t] ==
                  Catch::Approx(out.f_hat[t] + std::sqrt(out.h_hat[t]) * out.residuals[t])
                      .margin(1e-12));
        }
    }
}

TEST_CASE("white-noise likelihood is maximized at the mean of squares") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g(0.0, 2.0);
    std::vector<double> x(500);
    double ss = 0.0;
    for (auto& v : x) {
        v = g(rng);
        ss += v * v;
    }
    const double s2_hat = ss / static_cast<double>(x.size());
    const double at_opt = quasi_log_likelihood(arma(0, 0), {s2_hat}, x);
    CHECK(at_opt == Catch::Approx(-0.5 * x.size() * (1.0 + std::log(s2_hat))).epsilon(1e-12));
    for (double f : {0.5, 0.9, 1.1, 2.0})
        CHECK(quasi_log_likelihood(arma(0, 0), {f * s2_hat}, x) < at_opt);
}

TEST_CASE("truncation locality: future values never affect past filter output") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(80);
    for (auto& v : x) v = g(rng);
    auto y = x;
    const std::size_t k = 40;
    for (std::size_t t = k + 1; t < y.size(); ++t) y[t] += 10.0;

    for (const auto& [spec, theta] :
         std::vector<std::pair<ModelSpec, std::vector<double>>>{
             {arma(2, 1), {0.4, 0.2, 0.1, 1.0}}, {garch(1, 1), {0.2, 0.3, 0.4}}}) {
        const auto a = filter(spec, theta, x);
        const auto b = filter(spec, theta, y);
        for (std::size_t s = 0; s <= k; ++s) {
            CHECK(a.f_hat[s] == b.f_hat[s]);
            CHECK(a.h_hat[s] == b.h_hat[s]);
        }
    }
}

TEST_CASE("likelihood is continuous in theta at interior points") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(200);
    for (auto& v : x) v = g(rng);
    for (int rep = 0; rep < 20; ++rep) {
        const auto spec = random_small_spec(rng);
        auto theta = random_feasible_theta(spec, rng);
        const double base = quasi_log_likelihood(spec, theta, x);
        double prev_gap = 1e100;
        for (double h : {1e-3, 1e-5, 1e-7}) {
            auto th = theta;
            th[0] += h;
            th = project_feasible(spec, th);
            const double gap = std::fabs(quasi_log_likelihood(spec, th, x) - base);
            CHECK(gap <= prev_gap + 1e-12);
            prev_gap = gap;
        }
        CHECK(prev_gap < 1e-4);
    }
}

TEST_CASE("non-finite contributions raise an error naming the observation") {
    std::vector<double> x{1.0, 1e308, 1.0};
    try {
        quasi_log_likelihood(arma(0, 0), {1.0}, x);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("t=1") != std::string::npos);
    }
}

TEST_CASE("filter input validation") {
    CHECK_THROWS_AS(filter(garch(1, 1), {0.1, 0.8, 0.8}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(filter(arma(0, 0), {1.0}, {}), std::invalid_argument);
}
