#include "essreg/core.hpp"
#include "essreg/simulation.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace er;

TEST_CASE("center subtracts column means") {
    Matrix x(3, 2);
    x << 1, 4, 2, 4, 3, 7;
    Vector y(3);
    y << 1, 2, 6;
    const Dataset c = center(Dataset(x, y));
    CHECK(c.centered);
    CHECK(c.x(0, 0) == doctest::Approx(-1.0));
    CHECK(c.x(1, 0) == doctest::Approx(0.0));
    CHECK(c.x(2, 0) == doctest::Approx(1.0));
    CHECK(c.y.sum() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("center is idempotent") {
    std::mt19937_64 rng(3);
    const Dataset d(fx::random_matrix(rng, 20, 4), fx::random_matrix(rng, 20, 1).col(0));
    const Dataset once = center(d);
    const Dataset twice = center(once);
    CHECK((once.x - twice.x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((once.y - twice.y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("constant columns are zeroed and reported") {
    Matrix x(2, 2);
    x << 1, 3, 2, 3;
    Vector y(2);
    y << 5, 5;
    const CenterResult r = center_with_report(Dataset(x, y));
    CHECK(r.data.y(0) == 0.0);
    CHECK(r.data.y(1) == 0.0);
    CHECK(r.data.x(0, 1) == 0.0);
    REQUIRE(r.constant_columns.size() == 2);
    CHECK(r.constant_columns[0] == 1);
    CHECK(r.constant_columns[1] == 2);  // y
}

TEST_CASE("dataset validation") {
    CHECK_THROWS_AS(Dataset(Matrix::Zero(1, 3), Vector::Zero(1)), Error);
    CHECK_THROWS_AS(Dataset(Matrix::Zero(3, 1), Vector::Zero(3)), Error);
    CHECK_THROWS_AS(Dataset(Matrix::Zero(3, 3), Vector::Zero(4)), Error);
    try {
        Dataset(Matrix::Zero(3, 3), Vector::Zero(4));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
        CHECK(e.code_name() == "ER_INVALID_ARGUMENT");
    }
}

TEST_CASE("sample covariance uses divisor n") {
    Matrix x(2, 2);
    x << 1, 0, -1, 0;
    Vector y(2);
    y << 0, 0;
    Dataset d(x, y);
    d.centered = true;
    const CovarianceSummary s = sample_covariance(d);
    CHECK(s.sigma_hat(0, 0) == 1.0);
    CHECK(s.sigma_hat(0, 1) == 0.0);
    CHECK(s.sigma_hat(1, 1) == 0.0);
    CHECK(s.sigma_xy_hat.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.n == 2);
}

TEST_CASE("sample covariance needs centered data") {
    std::mt19937_64 rng(1);
    const Dataset d(fx::random_matrix(rng, 5, 3), Vector::Ones(5));
    CHECK_THROWS_AS(sample_covariance(d), Error);
}

TEST_CASE("y orthogonal to every column gives zero cross covariance") {
    Matrix x(4, 2);
    x << 1, 1, -1, 1, 1, -1, -1, -1;
    Vector y(4);
    y << 1, -1, -1, 1;
    Dataset d(x, y);
    d.centered = true;
    CHECK(sample_covariance(d).sigma_xy_hat.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample covariance is symmetric and positive semi-definite") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const Dataset d = center(Dataset(fx::random_matrix(rng, 6, 10), fx::random_matrix(rng, 6, 1).col(0)));
        const Matrix s = sample_covariance(d).sigma_hat;
        CHECK((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(s.diagonal().minCoeff() >= 0.0);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("column permutation permutes the covariance") {
    std::mt19937_64 rng(11);
    const Dataset d = center(Dataset(fx::random_matrix(rng, 30, 6), fx::random_matrix(rng, 30, 1).col(0)));
    std::vector<int> perm = {3, 0, 5, 1, 4, 2};
    Matrix xp(30, 6);
    for (int c = 0; c < 6; ++c) xp.col(c) = d.x.col(perm[c]);
    Dataset dp(xp, d.y, true);
    const Matrix s = sample_covariance(d).sigma_hat;
    const Matrix sp = sample_covariance(dp).sigma_hat;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) CHECK(std::abs(sp(i, j) - s(perm[i], perm[j])) <= 1e-14);
}

TEST_CASE("sample covariance of toy model matches the population within 3 MC standard errors") {
    const SimulationTruth t = fx::toy5();
    const Index n = 100000;
    const SampledData s = sample_dataset(t, n, 2024);
    const Matrix sh = sample_covariance(center(s.data)).sigma_hat;
    const Matrix pop = population_covariance(t).sigma_hat;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double se = std::sqrt((pop(i, i) * pop(j, j) + pop(i, j) * pop(i, j)) / static_cast<double>(n));
            CHECK(std::abs(sh(i, j) - pop(i, j)) <= 3.0 * se);
        }
}

TEST_CASE("delta_default") {
    CHECK(delta_default(std::exp(1.0), std::exp(1.0), 1.0) == doctest::Approx(0.6065306597126334).epsilon(1e-12));
    CHECK(delta_default(100, 100, 2.0) == doctest::Approx(0.42919320525786947).epsilon(1e-12));
    CHECK(delta_default(100, 400, 2.0) == doctest::Approx(2.0 * delta_default(100, 400, 1.0)).epsilon(1e-15));
    CHECK(delta_default(400, 100, 1.0) == doctest::Approx(std::sqrt(std::log(400.0) / 400.0)));
}

TEST_CASE("standardize scales columns to unit variance") {
    std::mt19937_64 rng(5);
    Matrix x = fx::random_matrix(rng, 50, 3);
    x.col(1) *= 7.0;
    const Dataset s = standardize(Dataset(x, Vector::Ones(50)));
    const Dataset c = center(s);
    for (int j = 0; j < 3; ++j) CHECK(c.x.col(j).squaredNorm() / 50.0 == doctest::Approx(1.0));
}

TEST_CASE("partition helpers") {
    PurePartition p{{{4, 1}, {0, 3}}};
    CHECK(p.k_hat() == 2);
    CHECK(p.pure_set() == IndexSet{0, 1, 3, 4});
    CHECK(p.group_sizes() == std::vector<Index>{2, 2});
    PurePartition bad{{{0, 1}, {1, 2}}};
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("enum names round-trip") {
    for (EstimatorKind k : {EstimatorKind::Main, EstimatorKind::ABased, EstimatorKind::IBased, EstimatorKind::Naive,
                            EstimatorKind::Oracle})
        CHECK(parse_estimator_kind(estimator_kind_name(k)) == k);
    for (VarianceFormula f :
         {VarianceFormula::General, VarianceFormula::Simplified, VarianceFormula::LargeSignal, VarianceFormula::IBased})
        CHECK(parse_variance_formula(variance_formula_name(f)) == f);
    CHECK_THROWS_AS(parse_estimator_kind("bogus"), Error);
}
