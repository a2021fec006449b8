#include <catch_amalgamated.hpp>
#include <cmath>
#include <numeric>

#include "acsel/simulate.hpp"

using namespace acsel;

namespace {

double mean_of(const std::vector<double>& x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double var_of(const std::vector<double>& x) {
    const double m = mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("gen_noise moments and determinism") {
    const auto g = gen_noise(gaussian_noise(12), 100000);
    CHECK(std::fabs(mean_of(g)) < 0.02);
    CHECK(var_of(g) > 0.98);
    CHECK(var_of(g) < 1.02);

    const auto s = gen_noise(student_noise(5, 12), 100000);
    CHECK(var_of(s) > 0.95);
    CHECK(var_of(s) < 1.05);

    CHECK(gen_noise(gaussian_noise(99), 1000) == gen_noise(gaussian_noise(99), 1000));
    CHECK_THROWS_AS(gen_noise(student_noise(2, 1), 10), std::invalid_argument);
    CHECK_THROWS_AS(gen_noise(gaussian_noise(1), 0), std::invalid_argument);
}

TEST_CASE("zero noise gives the zero series") {
    const std::vector<double> xi(600, 0.0);
    const auto x = simulate_with_noise(arma(0, 0), {4.0}, xi, 100, 500);
    for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("constant-variance GARCH scales the noise") {
    const auto xi = gen_noise(gaussian_noise(5), 600);
    const auto x = simulate_with_noise(garch(0, 1), {0.25, 0.0}, xi, 100, 500);
    for (std::size_t t = 0; t < x.size(); ++t)
        CHECK(x[t] == Catch::Approx(0.5 * xi[500 + t]).margin(1e-14));
}

TEST_CASE("DGP I lag-1 autocorrelation matches Yule-Walker") {
    const auto x = simulate_process(arma(2, 0), {0.5, 0.2, 1.0}, gaussian_noise(31), 100000);
    const double m = mean_of(x);
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t + 1 < x.size(); ++t) num += (x[t] - m) * (x[t + 1] - m);
    for (double v : x) den += (v - m) * (v - m);
    CHECK(num / den == Catch::Approx(0.625).margin(0.02));  // phi1 / (1 - phi2)
}

TEST_CASE("stationarity smoke test over disjoint halves") {
    const std::vector<std::pair<ModelSpec, std::vector<double>>> dgps = {
        {arma(2, 0), {0.5, 0.2, 1.0}},
        {garch(2, 0), {0.2, 0.4, 0.2}},
        {arma(6, 0), {0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 1.0}},
    };
    for (const auto& [spec, theta] : dgps) {
        const auto x = simulate_process(spec, theta, gaussian_noise(77), 100000);
        const std::vector<double> a(x.begin(), x.begin() + 50000);
        const std::vector<double> b(x.begin() + 50000, x.end());
        CHECK(std::fabs(var_of(a) - var_of(b)) < 0.05 * var_of(a));
        CHECK(std::fabs(mean_of(a) - mean_of(b)) < 0.05 * std::sqrt(var_of(a)));
    }
}

TEST_CASE("burn-in length does not shift the distribution") {
    const auto a = simulate_process(garch(2, 0), {0.2, 0.4, 0.2}, gaussian_noise(13), 50000, 500);
    const auto b = simulate_process(garch(2, 0), {0.2, 0.4, 0.2}, gaussian_noise(14), 50000, 1000);
    CHECK(std::fabs(mean_of(a) - mean_of(b)) < 0.02);
    CHECK(std::fabs(var_of(a) - var_of(b)) < 0.05 * var_of(a));
}

TEST_CASE("simulation is bitwise reproducible") {
    const auto a = simulate_process(arma(2, 0), {0.5, 0.2, 1.0}, gaussian_noise(21), 5000);
    const auto b = simulate_process(arma(2, 0), {0.5, 0.2, 1.0}, gaussian_noise(21), 5000);
    CHECK(a == b);
}

TEST_CASE("simulate rejects bad input") {
    CHECK_THROWS_AS(simulate_process(garch(1, 1), {0.1, 0.6, 0.5}, gaussian_noise(1), 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_process(arma(0, 0), {1.0}, gaussian_noise(1), 100, -1),
                    std::invalid_argument);
}
