// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "irsdfrc/optimizer.hpp"

using namespace irsdfrc;

namespace {

SystemConfig small() {
    SystemConfig c;
    c.n_tx = 4;
    c.n_rx = 4;
    c.set_irs_size(4);
    c.seed = 3;
    return c;
}

CsiView draw(const SystemConfig& c, std::uint64_t seed) {
    Rng rng(seed);
    return make_scenario(c, rng);
}

}  // namespace

TEST_CASE("method names")
{
    CHECK(to_string(Method::qtmm) == "qtmm");
    CHECK(to_string(Method::qtsdr) == "qtsdr");
    CHECK(method_from_string("qtsdr") == Method::qtsdr);
    CHECK_THROWS_AS(method_from_string("mm"), ConfigError);
}

TEST_CASE("initialize_state")
{
    SystemConfig c = small();
    CsiView v = draw(c, 1);

    c.omega = 1.0;
    Rng r1(5);
    auto [s1, a1] = initialize_state(v.estimate, c, r1);
    CHECK(s1.w_n.norm() == 0.0);
    CHECK(s1.w.squaredNorm() == Catch::Approx(c.p_radar).epsilon(1e-12));
    CHECK(s1.unit_modulus());

    c.omega = 0.0;
    Rng r2(5);
    auto [s0, a0] = initialize_state(v.estimate, c, r2);
    CHECK(s0.w.norm() == 0.0);
    CHECK(a0.alpha_u == 0.0);
    CHECK(s0.transmit_power() == Catch::Approx(c.p_radar).epsilon(1e-12));

    c.omega = 0.5;
    Rng r3(5), r4(5);
    auto [x, ax] = initialize_state(v.estimate, c, r3);
    auto [y, ay] = initialize_state(v.estimate, c, r4);
    CHECK(x.phi == y.phi);
    CHECK(x.w == y.w);
    CHECK(x.w_n == y.w_n);

    c.phi_init = PhiInit::ones;
    Rng r5(5);
    auto [o, ao] = initialize_state(v.estimate, c, r5);
    CHECK(o.phi == CVec::Ones(4));
}

TEST_CASE("optimize - single iteration")
{
    SystemConfig c = small();
    c.t_max = 1;
    c.keep_best = false;
    CsiView v = draw(c, 2);
    for (Method m : {Method::qtmm, Method::qtsdr}) {
        RunResult r = optimize(v, c, m);
        REQUIRE(r.trace.size() == 1);
        CHECK(r.iterations_used == 1);
        const Metrics mt = evaluate(v.truth, r.final_state, c);
        CHECK(r.trace[0].secrecy_rate == mt.rates.secrecy);
        CHECK(r.trace[0].gamma_r_true == mt.gamma_r);
        CHECK(r.trace[0].rho_star.has_value() == (m == Method::qtmm));
    }
}

TEST_CASE("optimize - deterministic")
{
    SystemConfig c = small();
    CsiView v = draw(c, 4);
    for (Method m : {Method::qtmm, Method::qtsdr}) {
        RunResult a = optimize(v, c, m);
        RunResult b = optimize(v, c, m);
        REQUIRE(a.trace.size() == b.trace.size());
        for (size_t i = 0; i < a.trace.size(); ++i) {
            CHECK(a.trace[i].output_secrecy == b.trace[i].output_secrecy);
            CHECK(a.trace[i].secrecy_rate == b.trace[i].secrecy_rate);
            CHECK(a.trace[i].gamma_r_true == b.trace[i].gamma_r_true);
        }
        CHECK(a.final_state.phi == b.final_state.phi);
        CHECK(a.final_state.w == b.final_state.w);
    }
}

TEST_CASE("optimize - state invariants and truth scoring")
{
    SystemConfig c = small();
    c.sigma_e2 = 0.3;
    CsiView v = draw(c, 6);
    for (Method m : {Method::qtmm, Method::qtsdr}) {
        RunResult r = optimize(v, c, m);
        CHECK(r.iterations_used <= c.t_max);
        CHECK(r.final_state.unit_modulus(1e-12));
        CHECK(r.final_state.transmit_power() <= c.p_radar * (1.0 + 1e-6));
        CHECK(r.trace.back().output_secrecy == evaluate(v.truth, r.final_state, c).rates.secrecy);
        // The best-iterate output never decreases.
        for (size_t i = 1; i < r.trace.size(); ++i)
            if (r.trace[i].output_secrecy != r.trace[i - 1].output_secrecy)
                CHECK(r.trace[i].index == static_cast<int>(i) + 1);
    }
}

TEST_CASE("optimize - termination rule")
{
    // Zero power: the secrecy rate stays 0, so the absolute-change guard fires at once.
    SystemConfig c = small();
    c.p_radar = 0.0;
    c.gamma_r_th = 0.0;
    CsiView v = draw(c, 7);
    RunResult r = optimize(v, c, Method::qtmm);
    CHECK(r.iterations_used == 1);
    CHECK(r.converged);

    // Unattainable radar SNR: every waveform solve is infeasible.
    SystemConfig h = small();
    h.gamma_r_th = 1e30;
    RunResult q = optimize(draw(h, 8), h, Method::qtmm);
    CHECK_FALSE(q.converged);
    for (const auto& it : q.trace) CHECK(it.waveform_status == SolveStatus::infeasible);
}

TEST_CASE("optimize - JSON form")
{
    SystemConfig c = small();
    c.t_max = 2;
    RunResult r = optimize(draw(c, 9), c, Method::qtmm);
    nlohmann::json j = to_json(r);
    CHECK(j["trace"].size() == r.trace.size());
    CHECK(j["final_phi_phases"].size() == 4);
    CHECK(j["final_w"].size() == 4);
    CHECK(j["final_w_n"].size() == 4);
    CHECK(j["iterations_used"] == r.iterations_used);
    CHECK(j["trace"][0].contains("output_secrecy"));
}
