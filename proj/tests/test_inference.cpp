#include "essreg/inference.hpp"
#include "essreg/simulation.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace er;

namespace {

VarianceInputs toy_inputs(double tau_sq = 0.1, double sigma_sq = 0.25) {
    const SimulationTruth t = fx::toy5(tau_sq, sigma_sq);
    const Matrix theta = t.a_true * t.sigma_z_true;
    return VarianceInputs::make(theta, t.sigma_z_true, t.beta_true, Vector::Constant(5, tau_sq), sigma_sq,
                                t.partition_true);
}

VarianceInputs unit_inputs() {
    Matrix a(4, 2);
    a << 1, 0, 1, 0, 0, 1, 0, 1;
    return VarianceInputs::make(a, Matrix::Identity(2, 2), Vector::Ones(2), Vector::Ones(4), 1.0,
                                PurePartition{{{0, 1}, {2, 3}}});
}

}  // namespace

TEST_CASE("toy model variances") {
    const VarianceInputs in = toy_inputs();
    CHECK(variance_vk_general(in, 0) == doctest::Approx(0.5504557291666666).epsilon(1e-12));
    CHECK(variance_vk_general(in, 1) == doctest::Approx(0.5567057291666667).epsilon(1e-12));
    for (Index k = 0; k < 2; ++k)
        CHECK(std::abs(variance_vk_general(in, k) / variance_vk_simplified(in, k) - 1.0) <= 1e-12);
}

TEST_CASE("large signal and I-based examples") {
    const VarianceInputs in = unit_inputs();
    CHECK(variance_vk_simplified(in, 0, SimplifiedMode::LargeSignal) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(variance_uk(in, 0) == doctest::Approx(3.25).epsilon(1e-14));
    CHECK(variance_vk_simplified(in, 0, SimplifiedMode::Full) >=
          variance_vk_simplified(in, 0, SimplifiedMode::LargeSignal));
}

TEST_CASE("general equals simplified on random homogeneous inputs") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        SimulationTruth t = fx::random_truth(rng, 2 + rep % 4, 2 + rep % 4, 30);
        const double tau = 0.3 + 0.01 * rep;
        const VarianceInputs in = VarianceInputs::make(t.a_true * t.sigma_z_true, t.sigma_z_true, t.beta_true,
                                                       Vector::Constant(30, tau), 0.7, t.partition_true);
        for (Index k = 0; k < in.k(); ++k) {
            const double g = variance_vk_general(in, k);
            const double s = variance_vk_simplified(in, k);
            CHECK(std::abs(g / s - 1.0) <= 1e-12);
            CHECK(g > 0.0);
        }
    }
}

TEST_CASE("diagonal sigma_z removes cross terms in U") {
    const VarianceInputs in = unit_inputs();
    VarianceInputs other = in;
    other.beta_hat(1) = 5.0;
    // only beta_1 changes; (sigma^2 + tau^2 |beta|^2 / m) changes, the tau^4 term does not
    const double lead = 1.0 + (1.0 + 25.0) / 2.0;
    CHECK(variance_uk(other, 0) == doctest::Approx(lead * 1.5 + 0.25));
}

TEST_CASE("heterogeneous inputs are rejected by the homogeneous forms") {
    VarianceInputs in = toy_inputs();
    in.tau_sq_hat(0) = 1.0;
    CHECK_NOTHROW(variance_vk_general(in, 0));
    try {
        variance_vk_simplified(in, 0);
        FAIL("expected HeterogeneousInputs");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::HeterogeneousInputs);
    }
    CHECK_THROWS_AS(variance_uk(in, 0), Error);
    CHECK_NOTHROW(variance_uk(in, 0, HomogeneityGate::Pool));
}

TEST_CASE("singleton groups are rejected") {
    const SimulationTruth t = fx::toy5();
    const VarianceInputs in = VarianceInputs::make(t.a_true * t.sigma_z_true, t.sigma_z_true, t.beta_true,
                                                   Vector::Constant(5, 0.1), 0.25, PurePartition{{{0, 1}, {2}}});
    try {
        variance_vk_general(in, 0);
        FAIL("expected GroupTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GroupTooSmall);
    }
}

TEST_CASE("singular sigma_z") {
    CHECK_THROWS_AS(VarianceInputs::make(Matrix::Identity(4, 2), Matrix::Zero(2, 2), Vector::Ones(2),
                                         Vector::Ones(4), 1.0, PurePartition{{{0, 1}, {2, 3}}}),
                    Error);
}

TEST_CASE("sigma squared at the population") {
    const SimulationTruth t = fx::toy5();
    const CovarianceSummary cov = population_covariance(t, 100);
    const PureLoadings ap = estimate_a_pure(cov.sigma_hat, t.partition_true);
    const Matrix sz = estimate_sigma_z(cov.sigma_hat, t.partition_true, ap);
    const ClippedScalar s = estimate_sigma_sq(cov, t.partition_true, ap, sz, t.beta_true);
    CHECK(s.value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_FALSE(s.clipped);
    const ClippedScalar noiseless =
        estimate_sigma_sq(population_covariance(fx::toy5(0.1, 0.0), 100), t.partition_true, ap, sz, t.beta_true);
    CHECK(std::abs(noiseless.value) < 1e-12);
    const ClippedScalar bad = estimate_sigma_sq(cov, t.partition_true, ap, 0.1 * sz, 10.0 * t.beta_true);
    CHECK(bad.value == 0.0);
    CHECK(bad.clipped);
}

TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
    CHECK(normal_quantile(0.001) == doctest::Approx(-3.090232306167813).epsilon(1e-12));
    CHECK(normal_quantile(0.2) == doctest::Approx(-normal_quantile(0.8)).epsilon(1e-14));
    CHECK_THROWS_AS(normal_quantile(1.0), Error);
}

TEST_CASE("confidence interval arithmetic") {
    const InferenceReport r = confidence_interval(1.0, 2.0, 200, 0.95);
    CHECK(r.std_error == doctest::Approx(0.1));
    CHECK(r.ci_upper - r.estimate == doctest::Approx(0.1959963984540054).epsilon(1e-12));
    CHECK(r.estimate - r.ci_lower == doctest::Approx(0.1959963984540054).epsilon(1e-12));
    CHECK(r.z_stat == doctest::Approx(10.0));
    CHECK_THROWS_AS(confidence_interval(1.0, 0.0, 200, 0.95), Error);
    CHECK_THROWS_AS(confidence_interval(1.0, 1.0, 200, 1.5), Error);
}

TEST_CASE("narrower level gives a nested interval") {
    for (double v : {0.1, 1.0, 7.0}) {
        const InferenceReport a = confidence_interval(0.3, v, 150, 0.90);
        const InferenceReport b = confidence_interval(0.3, v, 150, 0.95);
        CHECK(a.ci_lower > b.ci_lower);
        CHECK(a.ci_upper < b.ci_upper);
    }
}

TEST_CASE("infer_all covers every coordinate") {
    const VarianceInputs in = toy_inputs();
    const auto reps = infer_all(in, 500, 0.95, VarianceFormula::General);
    REQUIRE(reps.size() == 2);
    CHECK(reps[1].coordinate == 1);
    CHECK(reps[1].variance == doctest::Approx(variance_vk_general(in, 1)));
    const auto ib = infer_all(in, 500, 0.95, VarianceFormula::IBased);
    CHECK(ib[0].variance == doctest::Approx(variance_uk(in, 0)));
    const auto ls = infer_all(in, 500, 0.95, VarianceFormula::LargeSignal);
    CHECK(ls[0].variance <= reps[0].variance);
}
