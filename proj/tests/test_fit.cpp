#include <catch_amalgamated.hpp>
#include <cmath>
#include <numeric>
#include <random>

#include "acsel/fit.hpp"
#include "acsel/simulate.hpp"

using namespace acsel;

namespace {

double mean_sq(const std::vector<double>& x) {
    double ss = 0.0;
    for (double v : x) ss += v * v;
    return ss / static_cast<double>(x.size());
}

/// Zero-padded least-squares AR(1) slope, the closed-form oracle.
double ls_ar1(const std::vector<double>& x) {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        num += x[t] * x[t - 1];
        den += x[t - 1] * x[t - 1];
    }
    return num / den;
}

}  // namespace

TEST_CASE("white-noise fit has the closed form") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 1.7);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x(300);
        for (auto& v : x) v = g(rng);
        const auto fm = fit(arma(0, 0), x, {.multistarts = 2, .with_covariance = false});
        const double s2 = mean_sq(x);
        CHECK(fm.theta[0] == Catch::Approx(s2).epsilon(1e-8));
        CHECK(fm.loglik == Catch::Approx(-0.5 * x.size() * (1.0 + std::log(s2))).epsilon(1e-10));
        CHECK(fm.converged);
    }
}

TEST_CASE("AR(1) known-variance fit matches the least-squares oracle") {
    const auto x = simulate_process(arma(1, 0), {0.5, 1.0}, gaussian_noise(1234), 5000);
    FitOptions opts;
    opts.fixed_variance = 1.0;
    opts.with_covariance = false;
    const auto fm = fit(arma(1, 0), x, opts);
    CHECK(fm.theta[0] == Catch::Approx(ls_ar1(x)).margin(0.05));
    CHECK(fm.theta[1] == 1.0);
}

TEST_CASE("GARCH(1,1) parameter recovery") {
    const std::vector<double> truth{0.1, 0.1, 0.8};
    const auto x = simulate_process(garch(1, 1), truth, gaussian_noise(55), 5000);
    const auto fm = fit(garch(1, 1), x, {.multistarts = 3, .with_covariance = false});
    for (std::size_t i = 0; i < truth.size(); ++i)
        CHECK(fm.theta[i] == Catch::Approx(truth[i]).margin(0.1));
}

TEST_CASE("estimate_FG analytic check for white noise") {
    const auto x = simulate_process(arma(0, 0), {1.0}, gaussian_noise(8), 10000);
    const auto fm = fit(arma(0, 0), x, {.multistarts = 2, .with_covariance = false});
    const double s2 = fm.theta[0];
    const auto [F, G] = estimate_FG(arma(0, 0), fm.theta, x);
    CHECK(F(0, 0) == Catch::Approx(1.0 / (s2 * s2)).epsilon(0.05));
}

TEST_CASE("Gaussian noise gives G close to 2F at the optimum") {
    const auto x = simulate_process(arma(1, 0), {0.5, 1.0}, gaussian_noise(99), 10000);
    const auto fm = fit(arma(1, 0), x, {.multistarts = 2, .with_covariance = false});
    const auto [F, G] = estimate_FG(arma(1, 0), fm.theta, x);
    CHECK((G - 2.0 * F).norm() / G.norm() <= 0.1);
    // G is an average of outer products, hence symmetric
    CHECK((G - G.transpose()).norm() <= 1e-6 * G.norm());
    CHECK((F - F.transpose()).norm() <= 1e-6 * F.norm());
}

TEST_CASE("sandwich standard errors") {
    SECTION("identity algebra") {
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
        const auto se = sandwich_std_errors(I, I, 100);
        REQUIRE(se.has_value());
        for (double v : *se) CHECK(v == Catch::Approx(0.1));
    }
    SECTION("white noise analytic value") {
        const auto x = simulate_process(arma(0, 0), {1.0}, gaussian_noise(17), 10000);
        const auto fm = fit(arma(0, 0), x, {.multistarts = 2});
        REQUIRE(fm.std_errors.has_value());
        // var(sigma2_hat) ~ 2/n at sigma2 = 1
        CHECK((*fm.std_errors)[0] ==
              Catch::Approx(std::sqrt(2.0 / x.size())).epsilon(0.25));
    }
    SECTION("near-singular F is reported as absent") {
        Eigen::MatrixXd F = Eigen::MatrixXd::Identity(2, 2);
        F(1, 1) = 1e-15;
        CHECK_FALSE(sandwich_std_errors(F, Eigen::MatrixXd::Identity(2, 2), 100).has_value());
    }
}

TEST_CASE("Monte Carlo coverage of the AR(1) standard error") {
    const int reps = 120;
    std::vector<double> phi_hat(reps);
    double se_sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto x =
            simulate_process(arma(1, 0), {0.5, 1.0}, gaussian_noise(500 + r), 10000);
        const auto fm = fit(arma(1, 0), x, {.multistarts = 2});
        phi_hat[static_cast<std::size_t>(r)] = fm.theta[0];
        REQUIRE(fm.std_errors.has_value());
        se_sum += (*fm.std_errors)[0];
    }
    const double mean =
        std::accumulate(phi_hat.begin(), phi_hat.end(), 0.0) / static_cast<double>(reps);
    double ss = 0.0;
    for (double v : phi_hat) ss += (v - mean) * (v - mean);
    const double empirical_sd = std::sqrt(ss / static_cast<double>(reps - 1));
    const double mean_se = se_sum / static_cast<double>(reps);
    CHECK(std::fabs(empirical_sd - mean_se) <= 0.25 * mean_se);
}

TEST_CASE("sigma_block_check") {
    SECTION("F == G gives the identity") {
        Eigen::MatrixXd A(2, 2);
        A << 2.0, 0.3, 0.3, 1.0;
        CHECK((sigma_block_check(A, A) - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
    }
    SECTION("Gaussian GARCH(1,1) at truth is close to 2I") {
        const std::vector<double> truth{0.1, 0.1, 0.8};
        const auto x = simulate_process(garch(1, 1), truth, gaussian_noise(4242), 10000);
        const auto [F, G] = estimate_FG(garch(1, 1), truth, x);
        const Eigen::MatrixXd S = sigma_block_check(F, G);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::fabs(S(i, j) - (i == j ? 2.0 : 0.0)) <= 0.3);
    }
    SECTION("Student(5) GARCH(1,1) diagonal is near mu4 - 1 = 8") {
        const std::vector<double> truth{0.1, 0.1, 0.8};
        const auto x = simulate_process(garch(1, 1), truth, student_noise(5, 31415), 10000);
        const auto [F, G] = estimate_FG(garch(1, 1), truth, x);
        const Eigen::MatrixXd S = sigma_block_check(F, G);
        for (int i = 0; i < 3; ++i) CHECK(std::fabs(S(i, i) - 8.0) <= 0.35 * 8.0);
    }
}

TEST_CASE("monotone nesting at the optimum with embedded starts") {
    const auto x = simulate_process(arma(1, 0), {0.6, 1.0}, gaussian_noise(303), 2000);
    const FitOptions base{.multistarts = 3, .with_covariance = false};
    const auto small = fit(arma(1, 0), x, base);

    FitOptions opts = base;
    // embed theta(m1) with a zero MA coefficient as an extra start for m2
    opts.extra_starts = {{small.theta[0], 0.0, small.theta[1]}};
    const auto big = fit(arma(1, 1), x, opts);
    CHECK(big.loglik >= small.loglik - 10.0 * base.tol * std::fabs(small.loglik));
}

TEST_CASE("fit is deterministic") {
    const auto x = simulate_process(garch(1, 1), {0.1, 0.1, 0.8}, gaussian_noise(7), 1000);
    const FitOptions opts{.multistarts = 4, .seed = 5, .with_covariance = false};
    const auto a = fit(garch(1, 1), x, opts);
    const auto b = fit(garch(1, 1), x, opts);
    CHECK(a.theta == b.theta);
    CHECK(a.loglik == b.loglik);
    CHECK(a.n_evals == b.n_evals);
}

TEST_CASE("residual moments of a correct fit") {
    const auto x = simulate_process(garch(1, 1), {0.1, 0.1, 0.8}, gaussian_noise(60), 5000);
    const auto fm = fit(garch(1, 1), x, {.multistarts = 3, .with_covariance = false});
    const double m =
        std::accumulate(fm.residuals.begin(), fm.residuals.end(), 0.0) / fm.residuals.size();
    CHECK(std::fabs(m) <= 0.1);
    CHECK(mean_sq(fm.residuals) == Catch::Approx(1.0).margin(0.15));
}

TEST_CASE("fit input validation") {
    const std::vector<double> tiny{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit(garch(1, 1), tiny), std::invalid_argument);
    std::vector<double> bad(100, 1.0);
    bad[50] = std::nan("");
    CHECK_THROWS_AS(fit(arma(0, 0), bad), std::invalid_argument);
}
