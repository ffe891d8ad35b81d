// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "irsdfrc/sdp.hpp"

using namespace irsdfrc;
using namespace irsdfrc::sdp;

namespace {

BlockCoef identity_coef(int block, int n) {
    BlockCoef c;
    c.block = block;
    for (int i = 0; i < n; ++i) c.entries.push_back({i, i, 1.0});
    return c;
}

RMat random_symmetric(int n, Rng& rng) {
    std::normal_distribution<double> d;
    RMat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = d(rng);
    return 0.5 * (a + a.transpose());
}

}  // namespace

TEST_CASE("sdp - trace-one minimizes the smallest eigenvalue")
{
    Rng rng(17);
    for (int n : {1, 2, 4, 7}) {
        Problem p;
        p.block_sizes = {n};
        p.objective = {random_symmetric(n, rng)};
        Constraint c;
        c.blocks = {identity_coef(0, n)};
        c.rhs = 1.0;
        p.constraints = {c};
        Solution s = solve(p);
        REQUIRE(s.status == Status::optimal);
        Eigen::SelfAdjointEigenSolver<RMat> es(p.objective[0]);
        CHECK(std::abs(s.primal_objective - es.eigenvalues()[0]) < 1e-7);
        CHECK(std::abs(s.x[0].trace() - 1.0) < 1e-7);
    }
}

TEST_CASE("sdp - two by two with unit diagonal")
{
    // min 2 X12 s.t. X11 = X22 = 1 -> X12 = -1.
    Problem p;
    p.block_sizes = {2};
    RMat c(2, 2);
    c << 0.0, 1.0, 1.0, 0.0;
    p.objective = {c};
    for (int i = 0; i < 2; ++i) {
        Constraint k;
        BlockCoef b;
        b.entries = {{i, i, 1.0}};
        k.blocks = {b};
        k.rhs = 1.0;
        p.constraints.push_back(k);
    }
    Solution s = solve(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(std::abs(s.primal_objective + 2.0) < 1e-7);
    CHECK(std::abs(s.x[0](0, 1) + 1.0) < 1e-6);
}

TEST_CASE("sdp - pure LP")
{
    Problem p;
    p.lp_size = 3;
    p.objective_lp = RVec(3);
    p.objective_lp << 2.0, -1.0, 0.5;
    Constraint k;
    k.lp = {{0, 1.0}, {1, 1.0}, {2, 1.0}};
    k.rhs = 4.0;
    p.constraints = {k};
    Solution s = solve(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(std::abs(s.primal_objective + 4.0) < 1e-7);
    CHECK(std::abs(s.x_lp[1] - 4.0) < 1e-6);
}

TEST_CASE("sdp - block with LP slack")
{
    // min <C, X> s.t. tr X + s = 1: value min(0, lambda_min(C)).
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3;
        RMat c = random_symmetric(n, rng);
        if (trial % 2 == 0) c += 10.0 * RMat::Identity(n, n);
        Problem p;
        p.block_sizes = {n};
        p.lp_size = 1;
        p.objective = {c};
        p.objective_lp = RVec::Zero(1);
        Constraint k;
        k.blocks = {identity_coef(0, n)};
        k.lp = {{0, 1.0}};
        k.rhs = 1.0;
        p.constraints = {k};
        Solution s = solve(p);
        REQUIRE(s.status == Status::optimal);
        Eigen::SelfAdjointEigenSolver<RMat> es(c);
        CHECK(std::abs(s.primal_objective - std::min(0.0, es.eigenvalues()[0])) < 1e-7);
    }
}

TEST_CASE("sdp - dense coefficients and two blocks")
{
    // min <C1, X1> + <C2, X2> s.t. <A, X1> + tr X2 = 1 with A = I dense.
    Rng rng(5);
    Problem p;
    p.block_sizes = {3, 2};
    RMat c1 = random_symmetric(3, rng);
    RMat c2 = random_symmetric(2, rng);
    p.objective = {c1, c2};
    Constraint k;
    BlockCoef a;
    a.block = 0;
    a.dense = true;
    a.matrix = RMat::Identity(3, 3);
    k.blocks = {a, identity_coef(1, 2)};
    k.rhs = 1.0;
    p.constraints = {k};
    Solution s = solve(p);
    REQUIRE(s.status == Status::optimal);
    Eigen::SelfAdjointEigenSolver<RMat> e1(c1), e2(c2);
    const double ref = std::min(e1.eigenvalues()[0], e2.eigenvalues()[0]);
    CHECK(std::abs(s.primal_objective - ref) < 1e-7);
}

TEST_CASE("sdp - infeasible problem")
{
    // X PSD with X = -1.
    Problem p;
    p.block_sizes = {1};
    p.objective = {RMat::Zero(1, 1)};
    Constraint k;
    k.blocks = {identity_coef(0, 1)};
    k.rhs = -1.0;
    p.constraints = {k};
    Solution s = solve(p);
    CHECK(s.status == Status::infeasible);
    CHECK(to_string(Status::infeasible) == "infeasible");
    CHECK(to_string(Status::numerical_failure) == "numerical-failure");
}

TEST_CASE("real embedding")
{
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 4;
        CMat g = complex_gaussian(n, n, 1.0, rng);
        CMat h = g * g.adjoint();
        RMat e = real_embedding(h);
        CHECK((e - e.transpose()).norm() < 1e-14);
        CHECK((complex_from_embedding(e) - h).norm() < 1e-12);
        CVec x = complex_gaussian(n, 1, 1.0, rng).col(0);
        RVec xr(2 * n);
        xr << x.real(), x.imag();
        const double q = (x.adjoint() * h * x).value().real();
        CHECK(std::abs(xr.dot(e * xr) - q) < 1e-10 * (1.0 + q));
        Eigen::SelfAdjointEigenSolver<RMat> es(e);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}
