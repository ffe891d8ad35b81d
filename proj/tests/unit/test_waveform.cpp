// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "irsdfrc/fractional_transform.hpp"
#include "irsdfrc/waveform.hpp"

using namespace irsdfrc;
using namespace testutil;

namespace {

struct Instance {
    SystemConfig cfg;
    EffectiveChannels eff;
    SurrogatePieces pieces;
};

Instance random_instance(Rng& rng, int nt, double p) {
    Instance in;
    in.cfg = small_config(nt, 3, 2, 2);
    in.cfg.p_radar = p;
    in.cfg.beta = 0.5;
    in.cfg.beta_h = 0.5;
    in.cfg.gamma_r_th = 0.0;
    ChannelSet ch = random_channels(in.cfg, rng);
    DesignState s = random_state(in.cfg, rng, p / (nt * (nt + 1)));
    in.eff = effective_channels(ch, s.phi, in.cfg);
    AuxState aux = update_aux(in.eff, s, 1.0, 1.0);
    in.pieces = assemble_pieces(aux, in.eff, 1.0, 1.0);
    return in;
}

double q_max(const EffectiveChannels& eff) {
    const CMat q = eff.c_t.adjoint() * eff.c_t;
    return Eigen::SelfAdjointEigenSolver<CMat>(q).eigenvalues().maxCoeff();
}

}  // namespace

TEST_CASE("psd_sqrt")
{
    CHECK((psd_sqrt(CMat::Identity(3, 3)) - CMat::Identity(3, 3)).norm() < 1e-14);
    CMat d = CMat::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    CMat s = psd_sqrt(d);
    CHECK(std::abs(s(0, 0) - 2.0) < 1e-14);
    CHECK(std::abs(s(1, 1) - 3.0) < 1e-14);
    CHECK(std::abs(s(0, 1)) < 1e-14);

    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 6;
        const CMat a = complex_gaussian(n, 1 + trial % 3, 1.0, rng);
        const CMat r = a * a.adjoint();
        const CMat q = psd_sqrt(r);
        CHECK((q * q.adjoint() - r).norm() <= 1e-8 * std::max(1.0, r.norm()));
    }

    CMat tiny = CMat::Identity(2, 2);
    tiny(1, 1) = -1e-9;
    CHECK_NOTHROW(psd_sqrt(tiny));
    CMat neg = CMat::Identity(2, 2);
    neg(1, 1) = -1e-3;
    CHECK_THROWS_AS(psd_sqrt(neg), std::invalid_argument);
    CHECK_THROWS_AS(psd_sqrt(CMat::Zero(2, 3)), DimensionError);
}

TEST_CASE("solve_waveform_an - matched filter")
{
    Rng rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        Instance in = random_instance(rng, 4, 10.0);
        in.pieces.m.setZero();
        in.pieces.v = in.eff.c_u.conjugate();
        in.pieces.c = 0.0;

        // Re(v^T w) over ||w||^2 <= b peaks at sqrt(b) conj(v) / ||v||.
        WaveformSolution t = solve_waveform_an(in.pieces, in.eff, in.cfg, PowerSplit::total);
        REQUIRE(t.status == SolveStatus::optimal);
        const CVec w_ref = std::sqrt(10.0) * in.pieces.v.conjugate() / in.pieces.v.norm();
        CHECK((t.w - w_ref).norm() < 1e-5 * w_ref.norm());
        CHECK(t.r_wn.norm() < 1e-5 * 10.0);
        CHECK(std::abs(t.objective_value - std::sqrt(10.0) * in.pieces.v.norm()) <
              1e-6 * t.objective_value);

        in.cfg.omega = 0.3;
        WaveformSolution o = solve_waveform_an(in.pieces, in.eff, in.cfg, PowerSplit::omega);
        REQUIRE(o.status == SolveStatus::optimal);
        const CVec w_o = std::sqrt(3.0) * in.pieces.v.conjugate() / in.pieces.v.norm();
        CHECK((o.w - w_o).norm() < 1e-5 * w_o.norm());
    }
}

TEST_CASE("solve_waveform_an - zero power and infeasible")
{
    Rng rng(42);
    Instance in = random_instance(rng, 3, 10.0);
    SystemConfig z = in.cfg;
    z.p_radar = 0.0;
    WaveformSolution s = solve_waveform_an(in.pieces, in.eff, z, PowerSplit::total);
    CHECK(s.status == SolveStatus::optimal);
    CHECK(s.w.norm() == 0.0);
    CHECK(s.r_wn.norm() == 0.0);
    CHECK(s.objective_value == 0.0);

    SystemConfig hi = in.cfg;
    hi.gamma_r_th = 1.01 * hi.p_radar * q_max(in.eff) / hi.noise_radar;
    CHECK(solve_waveform_an(in.pieces, in.eff, hi, PowerSplit::total).status ==
          SolveStatus::infeasible);
    CHECK(solve_waveform_an(in.pieces, in.eff, hi, PowerSplit::omega).status ==
          SolveStatus::infeasible);

    SystemConfig hz = hi;
    hz.p_radar = 0.0;
    CHECK(solve_waveform_an(in.pieces, in.eff, hz, PowerSplit::total).status ==
          SolveStatus::infeasible);

    CHECK(to_string(SolveStatus::numerical_failure) == "numerical-failure");
}

TEST_CASE("solve_waveform_an - constraints hold post hoc")
{
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        Instance in = random_instance(rng, 2 + trial % 3, 100.0);
        in.cfg.omega = 0.1 + 0.8 * (trial % 5) / 4.0;
        in.cfg.gamma_r_th = 0.5 * in.cfg.p_radar * q_max(in.eff) * (trial % 4) / 4.0;
        for (PowerSplit split : {PowerSplit::total, PowerSplit::omega}) {
            WaveformSolution s = solve_waveform_an(in.pieces, in.eff, in.cfg, split);
            REQUIRE(s.status == SolveStatus::optimal);
            WaveformCheck c = check_waveform(s, in.eff, in.cfg, split);
            CHECK(c.power <= 1e-6 * in.cfg.p_radar);
            CHECK(c.snr <= 1e-6 * std::max(1.0, in.cfg.gamma_r_th));
            CHECK(c.schur <= 1e-6 * in.cfg.p_radar);
            CHECK(c.psd <= 1e-6);
            if (split == PowerSplit::omega) {
                CHECK(s.w.squaredNorm() <= in.cfg.omega * in.cfg.p_radar + 1e-6 * in.cfg.p_radar);
                CHECK(s.r_wn.trace().real() <=
                      (1.0 - in.cfg.omega) * in.cfg.p_radar + 1e-6 * in.cfg.p_radar);
            }
        }
    }
}

TEST_CASE("solve_waveform_an - objective nonincreasing in the threshold")
{
    Rng rng(44);
    for (int trial = 0; trial < 5; ++trial) {
        Instance in = random_instance(rng, 3, 100.0);
        const double top = in.cfg.p_radar * q_max(in.eff);
        double prev = std::numeric_limits<double>::infinity();
        for (double frac : {0.0, 0.2, 0.4, 0.6, 0.8, 0.95}) {
            in.cfg.gamma_r_th = frac * top;
            WaveformSolution s = solve_waveform_an(in.pieces, in.eff, in.cfg, PowerSplit::total);
            REQUIRE(s.status == SolveStatus::optimal);
            CHECK(s.objective_value <= prev + 1e-6 * std::max(1.0, std::abs(prev)));
            prev = s.objective_value;
        }
    }
}

TEST_CASE("solve_waveform_an - one-sided omega")
{
    Rng rng(45);
    Instance in = random_instance(rng, 3, 10.0);
    in.cfg.omega = 1.0;
    WaveformSolution a = solve_waveform_an(in.pieces, in.eff, in.cfg, PowerSplit::omega);
    REQUIRE(a.status == SolveStatus::optimal);
    CHECK(a.r_wn.norm() == 0.0);

    in.cfg.omega = 0.0;
    WaveformSolution b = solve_waveform_an(in.pieces, in.eff, in.cfg, PowerSplit::omega);
    REQUIRE(b.status == SolveStatus::optimal);
    CHECK(b.w.norm() == 0.0);
    CHECK(b.r_w.norm() == 0.0);
}
