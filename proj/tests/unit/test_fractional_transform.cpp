// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "irsdfrc/fractional_transform.hpp"

using namespace irsdfrc;
using namespace testutil;

TEST_CASE("update_aux - arithmetic")
{
    // |c^T w|^2 = 3, ||c^T W_n||^2 = 2, sigma^2 = 1.
    EffectiveChannels eff;
    eff.c_u = CVec::Zero(2);
    eff.c_u[0] = 1.0;
    eff.c_te = CVec::Zero(2);
    DesignState s;
    s.w = CVec::Zero(2);
    s.w[0] = std::sqrt(3.0);
    s.w_n = CMat::Zero(2, 2);
    s.w_n(0, 0) = 1.0;
    s.w_n(0, 1) = cd(0.0, 1.0);
    AuxState a = update_aux(eff, s, 1.0, 1.0);
    CHECK(a.gamma_u == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(a.alpha_u == Catch::Approx(std::sqrt(6.0) / 6.0).epsilon(1e-14));
    CHECK(a.gamma_te == 0.0);
    CHECK(a.alpha_te == 0.0);

    s.w.setZero();
    AuxState z = update_aux(eff, s, 1.0, 1.0);
    CHECK(z.gamma_u == 0.0);
    CHECK(z.alpha_u == 0.0);
    CHECK(z.phase_u == cd(1.0, 0.0));
}

TEST_CASE("assemble_pieces - structure")
{
    Rng rng(2);
    SystemConfig cfg = small_config(3, 2, 2, 2);
    ChannelSet ch = random_channels(cfg, rng);
    DesignState s = random_state(cfg, rng);
    EffectiveChannels eff = effective_channels(ch, s.phi, cfg);

    SurrogatePieces zero = assemble_pieces(AuxState{}, eff, 1.0, 1.0);
    CHECK(zero.c == 0.0);
    CHECK(zero.v.norm() == 0.0);
    CHECK(zero.m.norm() == 0.0);
    CHECK(surrogate_objective(zero, s) == 0.0);

    AuxState a = update_aux(eff, s, 1.0, 1.0);
    a.alpha_u = 0.0;
    SurrogatePieces p = assemble_pieces(a, eff, 1.0, 1.0);
    Eigen::SelfAdjointEigenSolver<CMat> es(p.m);
    CHECK(es.eigenvalues().minCoeff() > -1e-12 * (1.0 + p.m.norm()));

    AuxState b = update_aux(eff, s, 1.0, 1.0);
    SurrogatePieces q = assemble_pieces(b, eff, 1.0, 1.0);
    CHECK((q.m - q.m.adjoint()).norm() < 1e-12 * (1.0 + q.m.norm()));
    const CMat r = s.w * s.w.adjoint() + s.w_n * s.w_n.adjoint();
    CHECK(std::abs((q.m * r).trace().imag()) < 1e-12 * (1.0 + std::abs((q.m * r).trace())));
}

TEST_CASE("quadratic transform exact at the aux optimum")
{
    Rng rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        SystemConfig cfg = small_config(1 + trial % 4, 1 + trial % 3, 1 + trial % 2, 1 + trial % 4);
        cfg.beta = 0.3;
        cfg.beta_h = 0.5;
        ChannelSet ch = random_channels(cfg, rng);
        DesignState s = random_state(cfg, rng, 0.5 + trial % 5);
        const double su = 0.2 + 0.1 * (trial % 7);
        const double st = 0.4 + 0.05 * (trial % 5);
        EffectiveChannels eff = effective_channels(ch, s.phi, cfg);
        AuxState aux = update_aux(eff, s, su, st);
        SurrogatePieces p = assemble_pieces(aux, eff, su, st);
        const Rates r = achievable_rates(eff, s, su, st);
        const double f = surrogate_objective(p, s);
        CHECK(std::abs(f - r.secrecy) < 1e-9);

        // Direct per-link form with the real magnitudes |c^T w|.
        auto link = [&](const CVec& c, double noise, double g, double al) {
            const double cw = std::abs(tdot(c, s.w));
            const double tot = cw * cw + (c.transpose() * s.w_n).squaredNorm() + noise;
            return std::log2(1.0 + g) - g + 2.0 * al * std::sqrt(1.0 + g) * cw - al * al * tot;
        };
        const double direct = link(eff.c_u, su, aux.gamma_u, aux.alpha_u) -
                              link(eff.c_te, st, aux.gamma_te, aux.alpha_te);
        CHECK(std::abs(direct - r.secrecy) < 1e-9);
        CHECK(f <= r.secrecy + 1e-9);
    }
}
