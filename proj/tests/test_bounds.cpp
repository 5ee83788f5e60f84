#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "planode/bounds.hpp"
#include "planode/verify.hpp"
#include "test_util.hpp"

#include "json.hpp"

using namespace planode;
using planode::testing::Rng;

namespace {

Trajectory run_counterexample(double eps, double t_max = 1e3) {
    IntegratorConfig cfg;
    cfg.t_max = t_max;
    return integrate(counterexample(eps), -1.0, 0.0, cfg);
}

}  // namespace

TEST_CASE("bound parameter factories") {
    {
        const BoundParams p = BoundParams::counterexample_rates(1.0);
        CHECK(p.k1 == 1.5);
        CHECK(p.k2 == 0.5);
        CHECK_THROWS_AS(BoundParams::counterexample_rates(2.0),
                        ParameterOutOfRange);
    }
    {
        const BoundParams p = BoundParams::holder_case1(-1.0, 0.5, 0.1, 0.01);
        CHECK(p.a == 1.0);
        CHECK(p.k == 0.5);
        CHECK(p.l == 0.25);
        CHECK(p.b == doctest::Approx(0.01));
        CHECK(p.d > 0.01);  // r0 sits inside the admissible window
    }
    {
        const BoundParams p = BoundParams::jordan_case2(-1.0, 0.5, 0.1, 0.01);
        CHECK(p.k == 0.25);
        CHECK(p.l == 0.125);
        CHECK(std::exp(p.l * p.t0) > 16.0 * p.a * p.b / (p.l * p.l));
        // Contraction budget exceeded: m r0^alpha >= |lambda|/4.
        CHECK_THROWS_AS(BoundParams::jordan_case2(-1.0, 0.5, 0.3, 0.9),
                        InconsistentParams);
    }
}

TEST_CASE("envelope holds on the log-rotation system") {
    {
        const Trajectory traj = run_counterexample(1.0);
        const BoundReport rep = check_envelope(traj, 1.5, 0.5, 1e-6);
        CHECK(rep.holds);
        CHECK(rep.samples_checked == static_cast<long>(traj.samples.size()));
    }
    {
        // epsilon = 0 decays at exactly rate 1; both envelope sides are tight.
        const Trajectory traj = run_counterexample(0.0);
        const BoundReport rep = check_envelope(traj, 1.0, 1.0, 1e-6);
        CHECK(rep.holds);
        CHECK(std::fabs(rep.worst_margin) < 1e-6);
    }
    {
        // Upper-only sentinel for the one-sided contraction bound.
        IntegratorConfig cfg;
        cfg.t_max = 100.0;
        const Trajectory traj = integrate(holder_family(-1.0, 0.5, 0.1, 3, false),
                                          std::log(0.01), 0.3, cfg);
        const BoundReport rep = check_envelope(
            traj, std::numeric_limits<double>::infinity(), 0.5, 1e-6);
        CHECK(rep.holds);
        CHECK(rep.worst_margin >= 0.0);  // exactly tight at t = 0
    }
}

TEST_CASE("winding lower bound formula") {
    const double r0 = std::exp(-1.0);
    CHECK(counterexample_theta_lower(r0, 0.0, std::exp(1.0) - 1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(counterexample_theta_lower(r0, 0.0, 0.0) == 0.0);
    CHECK(counterexample_theta_lower(r0, 1.0, 10.0) ==
          doctest::Approx(std::log(16.0) * 2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(counterexample_theta_lower(1.5, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(counterexample_theta_lower(0.0, 0.0, 1.0), DomainError);
}

TEST_CASE("winding lower bound holds along trajectories") {
    for (double eps : {0.0, 1.0, 1.5}) {
        const Trajectory traj = run_counterexample(eps);
        const BoundReport rep =
            check_counterexample_winding(traj, std::exp(-1.0), eps, 1e-6);
        CHECK(rep.holds);
        if (eps == 0.0) {
            CHECK(std::fabs(rep.worst_margin) < 1e-6);  // equality case
        } else {
            CHECK(rep.worst_margin >= 0.0);
        }
    }
}

TEST_CASE("theta tail bound") {
    IntegratorConfig cfg;
    cfg.t_max = 100.0;
    {
        // Zero amplitude: theta is constant, so |theta* - theta(t)| = 0 fits
        // under the bound even though b = 0 collapses it to zero too.
        const Trajectory traj = integrate(holder_family(-1.0, 0.5, 0.0, 0, false),
                                          std::log(0.01), 0.3, cfg);
        const BoundParams p = BoundParams::holder_case1(-1.0, 0.5, 0.0, 0.01);
        const BoundReport rep = check_theta_tail(traj, p, 0.0, 0.0);
        CHECK(rep.holds);
        CHECK(rep.worst_margin == 0.0);
        CHECK(theta_tail_variation(traj, 0.0) < 1e-9);
    }
    {
        const PlanarSystem sys = holder_family(-1.0, 0.5, 0.1, 3, false);
        const Trajectory traj = integrate(sys, std::log(0.01), 0.3, cfg);
        const BoundParams p = BoundParams::holder_case1(-1.0, 0.5, 0.1, 0.01);
        const BoundReport rep = check_theta_tail(traj, p, 0.0, 1e-4);
        CHECK(rep.holds);
    }
    {
        // A smaller r0 tightens the bound and it still holds.
        const PlanarSystem sys = holder_family(-1.0, 0.5, 0.1, 3, false);
        const Trajectory traj = integrate(sys, std::log(0.001), 0.3, cfg);
        const BoundParams p = BoundParams::holder_case1(-1.0, 0.5, 0.1, 0.001);
        CHECK(p.b == doctest::Approx(0.1 * std::pow(0.001, 0.5)));
        const BoundReport rep = check_theta_tail(traj, p, 0.0, 1e-4);
        CHECK(rep.holds);
    }
}

TEST_CASE("estimated Hölder constants enter with a 2x safety factor") {
    const PlanarSystem sys = holder_family(-1.0, 0.5, 0.1, 3, false);
    const HolderEstimate est =
        estimate_holder_constant(sys, 0.5, 1e-6, 0.5, 400, 128);
    const BoundParams p = BoundParams::holder_case1_estimated(-1.0, est, 0.01);
    CHECK(p.m == doctest::Approx(0.2).epsilon(1e-2));

    IntegratorConfig cfg;
    cfg.t_max = 100.0;
    const Trajectory traj = integrate(sys, std::log(0.01), 0.3, cfg);
    CHECK(check_theta_tail(traj, p, 0.0, 1e-4).holds);

    const HolderEstimate bad = estimate_holder_constant(
        counterexample(0.0), 0.5, 1e-8, 0.1, 1401, 64);
    REQUIRE(bad.diverging);
    CHECK_THROWS_AS(BoundParams::holder_case1_estimated(-1.0, bad, 0.01),
                    InconsistentParams);
}

TEST_CASE("h monitor: linear Jordan block") {
    IntegratorConfig cfg;
    cfg.t_max = 5000.0;
    const PlanarSystem sys = holder_family(-1.0, 0.5, 0.0, 0, true);
    {
        const Trajectory traj = integrate(sys, -3.0, 0.1, cfg);
        BoundParams p;
        p.a = 1.0;
        p.k = 0.25;
        p.l = 0.125;
        p.b = 0.0;
        p.t0 = 0.0;
        const HReport rep = monitor_h(traj, p, 1e-6);
        CHECK(rep.branch == HBranch::EventuallyNonnegative);
        CHECK(rep.t1 == traj.samples.front().t);
        CHECK(rep.theta_monotone_after_t1);
        CHECK_FALSE(rep.crossed_half_pi);
        CHECK(rep.h_min_after_t1 >= 0.0);
        REQUIRE(rep.limit_n.has_value());
        CHECK(*rep.limit_n == 0);
        CHECK(rep.ok());
    }
    {
        // theta0 exactly on the half-pi line: h stays at the boundary.
        const Trajectory traj = integrate(sys, -3.0, M_PI / 2.0, cfg);
        BoundParams p;
        p.a = 1.0;
        p.b = 0.0;
        p.l = 0.125;
        p.t0 = 0.0;
        const HReport rep = monitor_h(traj, p, 1e-6);
        CHECK(rep.branch == HBranch::EventuallyNonnegative);
        CHECK_FALSE(rep.crossed_half_pi);
        CHECK(std::fabs(traj.theta_end() - M_PI / 2.0) < 1e-9);
        CHECK(rep.ok());
    }
}

TEST_CASE("h monitor: holder Jordan run passes every sub-check") {
    IntegratorConfig cfg;
    cfg.t_max = 5000.0;
    const PlanarSystem sys = holder_family(-1.0, 0.5, 0.05, 3, true);
    const double r0 = 0.01;
    const Trajectory traj = integrate(sys, std::log(r0), 0.7, cfg);
    const BoundParams p = BoundParams::jordan_case2(-1.0, 0.5, 0.05, r0);
    const HReport rep = monitor_h(traj, p, 1e-6);
    CHECK(rep.ok());
    REQUIRE(rep.limit_n.has_value());
    CHECK(std::fabs(std::cos(traj.theta_end())) < HReport::cos_flat_tol);
}

TEST_CASE("h monitor: inconsistent dichotomy parameters are rejected") {
    IntegratorConfig cfg;
    cfg.t_max = 10.0;
    const Trajectory traj =
        integrate(holder_family(-1.0, 0.5, 0.0, 0, true), -3.0, 0.1, cfg);
    BoundParams p;
    p.a = 1.0;
    p.b = 0.5;
    p.l = 0.125;
    p.t0 = 0.0;  // e^{l t0} = 1 <= 16ab/l^2
    CHECK_THROWS_AS(monitor_h(traj, p, 1e-6), InconsistentParams);
}

TEST_CASE("sign identity: reference evaluations") {
    {
        const double a = 2.0, b = 0.5, l = 0.3;
        const double s = std::log(2.0 * 16.0 * a * b / (l * l)) / l;
        const SignIdentityResult res = crossing_sign_identity(a, b, l, s);
        CHECK(std::fabs(res.lhs - res.rhs) <= 1e-12 * std::fabs(res.rhs));
        CHECK(res.positive);
    }
    {
        // At the threshold the first term vanishes and only 16 b^4 e^{-4ls}
        // remains.
        const double a = 1.5, b = 0.4, l = 0.25;
        const double s = std::log(16.0 * a * b / (l * l)) / l;
        const SignIdentityResult res = crossing_sign_identity(a, b, l, s);
        const double expected = 16.0 * std::pow(b, 4) * std::exp(-4.0 * l * s);
        CHECK(res.rhs == doctest::Approx(expected).epsilon(1e-9));
        CHECK(res.rhs > 0.0);
    }
    {
        // Every term carries b^2: the limit b -> 0 collapses to zero.
        const SignIdentityResult res = crossing_sign_identity(1.0, 0.0, 0.5, 1.0);
        CHECK(res.lhs == 0.0);
        CHECK(res.rhs == 0.0);
        CHECK_FALSE(res.positive);
    }
    CHECK_THROWS_AS(crossing_sign_identity(0.1, 3.0, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(crossing_sign_identity(-1.0, 0.5, 0.5, 1.0), DomainError);
}

TEST_CASE("sign identity: random sweep matches and stays positive") {
    Rng rng(61);
    for (int i = 0; i < 10000; ++i) {
        const double a = rng.uniform(0.2, 3.0);
        const double b = rng.uniform(0.02, 3.0);
        const double l = rng.uniform(0.05, 2.0);
        const double ls_min = std::max(0.0, std::log(b / a));
        const double s = (ls_min + rng.uniform(0.0, 20.0)) / l;
        const SignIdentityResult res = crossing_sign_identity(a, b, l, s);
        CHECK(std::fabs(res.lhs - res.rhs) <=
              1e-10 * std::max(1.0, std::fabs(res.rhs)));
        if (std::exp(l * s) > 16.0 * a * b / (l * l)) {
            CHECK(res.positive);
        }
    }
}

TEST_CASE("verify suite wiring") {
    const std::vector<BoundReport> reports = run_verify_suite("identity");
    REQUIRE(reports.size() == 2);
    CHECK(all_hold(reports));
    CHECK(std::is_sorted(reports.begin(), reports.end(),
                         [](const BoundReport& x, const BoundReport& y) {
                             return x.name < y.name;
                         }));

    std::ostringstream out;
    write_reports_json(out, reports);
    const nlohmann::json parsed = nlohmann::json::parse(out.str());
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 2);
    for (const auto& entry : parsed) {
        CHECK(entry.contains("name"));
        CHECK(entry.contains("holds"));
        CHECK(entry.contains("worst_margin"));
        CHECK(entry.contains("worst_t"));
        CHECK(entry.contains("samples_checked"));
        CHECK(entry["holds"].get<bool>());
    }

    CHECK_THROWS_AS(run_verify_suite("bogus"), ParameterOutOfRange);
}

TEST_CASE("verify: parallel and sequential runs agree exactly") {
    VerifyOptions par;
    par.parallel = true;
    VerifyOptions seq;
    seq.parallel = false;
    const auto a = run_verify_suite("all", par);
    const auto b = run_verify_suite("all", seq);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].holds == b[i].holds);
        CHECK(a[i].worst_margin == b[i].worst_margin);
        CHECK(a[i].worst_t == b[i].worst_t);
        CHECK(a[i].samples_checked == b[i].samples_checked);
    }
    CHECK(all_hold(a));
}
