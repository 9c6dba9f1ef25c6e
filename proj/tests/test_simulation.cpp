#include "essreg/simulation.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace er;

namespace {

DgpConfig small_dgp() {
    DgpConfig d;
    d.n = 150;
    d.p = 40;
    d.k = 3;
    d.m = 3;
    return d;
}

}  // namespace

TEST_CASE("banded sigma_z") {
    DgpConfig d;
    const Matrix s = make_sigma_z(d);
    CHECK(s(0, 0) == doctest::Approx(2.5));
    CHECK(s(1, 1) == doctest::Approx(2.5 + 0.5 / 9.0));
    CHECK(s(9, 9) == doctest::Approx(3.0));
    CHECK(s(0, 1) == doctest::Approx(-0.75));
    CHECK(s(0, 2) == doctest::Approx(2.5 * 0.09));
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
    d.sigma_z_kind = SigmaZKind::IdentityScaled;
    CHECK((make_sigma_z(d) - 3.0 * Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generated truth structure") {
    DgpConfig d;
    d.rng_seed = 5;
    const SimulationTruth t = generate_truth(d);
    CHECK(t.a_true.rows() == 400);
    CHECK(t.a_true.cols() == 10);
    // pure block is I_K kron 1_m
    for (Eigen::Index i = 0; i < 50; ++i)
        for (Eigen::Index a = 0; a < 10; ++a) CHECK(t.a_true(i, a) == (i / 5 == a ? 1.0 : 0.0));
    for (Eigen::Index j = 50; j < 400; ++j) {
        CHECK(t.a_true.row(j).cwiseAbs().sum() <= 1.0 + 1e-12);
        const Eigen::Index nz = (t.a_true.row(j).array() != 0.0).count();
        CHECK(nz >= 2);
    }
    for (Index a = 0; a < 10; ++a) CHECK(t.partition_true.groups[a].size() == 5);
    CHECK(t.gamma_true.minCoeff() >= 1.0);
    CHECK(t.gamma_true.maxCoeff() <= 3.0);
    CHECK(t.beta_true.minCoeff() >= 1.0);
    CHECK(t.beta_true.maxCoeff() <= 3.0);
    CHECK(t.lambda_k > 0.0);
    CHECK_FALSE(t.assumption_broken);
}

TEST_CASE("theta zero empties the weak column") {
    DgpConfig d;
    d.sigma_z_kind = SigmaZKind::IdentityScaled;
    d.weak_column_theta = 0.0;
    d.weak_column_count = 1;
    d.rng_seed = 2;
    const SimulationTruth t = generate_truth(d);
    CHECK(t.a_true.col(9).cwiseAbs().maxCoeff() == 0.0);
    CHECK(t.partition_true.groups[9].empty());
    CHECK(t.assumption_broken);
    d.weak_column_theta = 1.0;
    CHECK(generate_truth(d).partition_true.groups[9].size() == 5);
}

TEST_CASE("dgp validation") {
    DgpConfig d;
    d.p = 30;
    CHECK_THROWS_AS(d.validate(), Error);
    d = DgpConfig{};
    d.k = 11;
    d.weak_column_count = 12;
    CHECK_THROWS_AS(d.validate(), Error);
    d = DgpConfig{};
    d.weak_column_theta = 1.5;
    d.weak_column_count = 1;
    CHECK_THROWS_AS(d.validate(), Error);
}

TEST_CASE("sampling is deterministic and matches the latent covariance") {
    const SimulationTruth t = fx::toy5();
    const SampledData a = sample_dataset(t, 50, 7);
    const SampledData b = sample_dataset(t, 50, 7);
    CHECK(a.data.x == b.data.x);
    CHECK(a.data.y == b.data.y);
    CHECK_FALSE(sample_dataset(t, 50, 8).data.x == a.data.x);

    const Index n = 100000;
    const SampledData s = sample_dataset(t, n, 3);
    const Matrix zc = s.z.rowwise() - s.z.colwise().mean();
    const Matrix cz = zc.transpose() * zc / static_cast<double>(n);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Matrix& p = t.sigma_z_true;
            const double se = std::sqrt((p(i, i) * p(j, j) + p(i, j) * p(i, j)) / static_cast<double>(n));
            CHECK(std::abs(cz(i, j) - p(i, j)) <= 3.0 * se);
        }
}

TEST_CASE("signed permutation minimum matches brute force") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 200; ++rep) {
        const Eigen::Index k = 1 + rep % 3;
        const Vector b = fx::random_matrix(rng, k, 1).col(0);
        const Vector bh = fx::random_matrix(rng, k, 1).col(0);
        CHECK(min_signed_permutation_error(bh, b) == doctest::Approx(oracle::signed_perm_min(bh, b)).epsilon(1e-12));
    }
    const Vector b = (Vector(2) << 1, -2).finished();
    const Vector bh = (Vector(2) << -2, 1).finished();
    CHECK(min_signed_permutation_error(bh, b) == 0.0);
    CHECK(min_signed_permutation_error(b, b) == 0.0);
}

TEST_CASE("aligned error with overlapping groups") {
    const SimulationTruth t = fx::toy5();
    // estimated groups swapped, second one sign-flipped
    const PurePartition hat{{{2, 3}, {0, 1}}};
    Matrix a_hat(5, 2);
    a_hat << 0, 1, 0, 1, -1, 0, -1, 0, 0.5, 0.5;
    const Vector bh = (Vector(2) << 2.0, 1.0).finished();
    CHECK(aligned_error(bh, t.beta_true, hat, t.partition_true, a_hat, t.a_true) == doctest::Approx(0.0));
    const Alignment al = align_factors(hat, a_hat, t.partition_true, t.a_true);
    REQUIRE(al.pairs.size() == 2);
    CHECK(al.by_overlap);
    CHECK(al.pairs[0].truth == 1);
    CHECK(al.pairs[0].sign == -1.0);
    CHECK(al.pairs[1].truth == 0);
    CHECK_THROWS_AS(align_factors(PurePartition{{{4}}}, a_hat, t.partition_true, t.a_true), Error);
}

TEST_CASE("aligned error is no smaller than the signed permutation minimum") {
    std::mt19937_64 rng(19);
    for (int rep = 0; rep < 30; ++rep) {
        const SimulationTruth t = fx::random_truth(rng, 3, 3, 15);
        const Vector bh = fx::random_matrix(rng, 3, 1).col(0);
        const double e = aligned_error(bh, t.beta_true, t.partition_true, t.partition_true, t.a_true, t.a_true);
        CHECK(e >= min_signed_permutation_error(bh, t.beta_true) - 1e-12);
        CHECK(e == doctest::Approx((bh - t.beta_true).norm()));
    }
}

TEST_CASE("seed derivation") {
    CHECK(replication_seed(1, 0) == 1);
    CHECK(replication_seed(1, 3) == 2);
    CHECK(substream(5, 1) != substream(5, 2));
    CHECK(substream(5, 1) == substream(5, 1));
    CHECK(worker_count(4, 2) == 2);
    CHECK(worker_count(1, 100) == 1);
}

TEST_CASE("noiseless data gives oracle error zero") {
    ExperimentConfig c;
    c.dgp = small_dgp();
    c.dgp.sigma_sq = 0.0;
    c.reps = 3;
    c.delta_mode = DeltaMode::Fixed;
    const ExperimentSummary s = run_experiment(c);
    int checked = 0;
    for (const auto& r : s.replications) {
        if (!r.ok || r.matched != 3) continue;
        ++checked;
        CHECK(r.has_error[4]);
        CHECK(r.l2[4] < 1e-8);
    }
    CHECK(checked > 0);
}

TEST_CASE("experiments are reproducible across thread counts") {
    ExperimentConfig c;
    c.dgp = small_dgp();
    c.reps = 6;
    c.seed = 42;
    c.threads = 1;
    const ExperimentSummary a = run_experiment(c);
    c.threads = 3;
    const ExperimentSummary b = run_experiment(c);
    CHECK(a.ok == b.ok);
    for (std::size_t e = 0; e < 5; ++e) CHECK(a.mean_l2[e] == b.mean_l2[e]);
    CHECK(a.coverage_v == b.coverage_v);
    CHECK(a.mean_ci_length_v == b.mean_ci_length_v);
    REQUIRE(a.replications.size() == 6);
    for (std::size_t r = 0; r < 6; ++r) {
        CHECK(a.replications[r].rep == static_cast<Index>(r));
        CHECK(a.replications[r].delta == b.replications[r].delta);
    }
}

TEST_CASE("summary bookkeeping") {
    ExperimentConfig c;
    c.dgp = small_dgp();
    c.dgp.n = 400;
    c.reps = 8;
    c.delta_mode = DeltaMode::Fixed;
    c.truth_mode = TruthMode::Fixed;
    const ExperimentSummary s = run_experiment(c);
    CHECK(s.ok + s.failed == 8);
    Index total = 0;
    for (const auto& [k, cnt] : s.k_hat_histogram) total += cnt;
    CHECK(total == s.ok);
    CHECK(s.coverage_v >= 0.0);
    CHECK(s.coverage_v <= 1.0);
    CHECK(s.standardized.size() == static_cast<std::size_t>(s.ci_count));
    CHECK(s.mean_l2[4] <= s.mean_l2[3]);
}

TEST_CASE("main table preset") {
    const auto rows = preset_table_main(10, 3);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].dgp.n == 200);
    CHECK(rows[3].dgp.n == 800);
    for (const auto& r : rows) {
        CHECK(r.reps == 10);
        CHECK(r.dgp.p == 400);
    }
}
