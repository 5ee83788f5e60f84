#include "planode/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace planode {

namespace {

// Dormand-Prince 5(4) tableau (time nodes omitted: the field is autonomous).
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// PI step controller constants (classic dopri5 values).
constexpr double kSafety = 0.9;
constexpr double kExpo = 0.17;    // 1/5 - kBeta * 0.75
constexpr double kBeta = 0.04;
constexpr double kMinScale = 0.2;
constexpr double kMaxScale = 10.0;

struct State {
    double rho;
    double theta;
};

}  // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw DomainError("IntegratorConfig: tolerances must be positive");
    }
    if (!(t_max > 0.0)) {
        throw DomainError("IntegratorConfig: t_max must be positive");
    }
    if (!(rho_floor < 0.0)) {
        throw DomainError("IntegratorConfig: rho_floor must be negative");
    }
    if (max_steps <= 0) {
        throw DomainError("IntegratorConfig: max_steps must be positive");
    }
    if (sample_stride < 0.0 || samples_per_decade < 1) {
        throw DomainError("IntegratorConfig: invalid sampling options");
    }
}

Trajectory integrate(const PlanarSystem& sys, double rho0, double theta0,
                     const IntegratorConfig& cfg, TimeDirection dir) {
    cfg.validate();
    if (!(rho0 < std::log(0.5))) {
        throw DomainError("integrate: rho0 must be below ln(0.5)");
    }

    const double sign = dir == TimeDirection::Reversed ? -1.0 : 1.0;
    auto rhs = [&](const State& y) -> State {
        const PolarRate r = polar_rhs(sys, y.rho, y.theta);
        return {sign * r.log_radial, sign * r.angular};
    };

    Trajectory traj;
    traj.r0 = std::exp(rho0);
    traj.theta0 = theta0;
    traj.samples.push_back({0.0, rho0, theta0});

    // Output schedule: uniform stride, switching to log-spaced emission past
    // t = 1 on long horizons.
    const bool log_mode = cfg.t_max > 1e3;
    const double stride =
        cfg.sample_stride > 0.0
            ? cfg.sample_stride
            : (log_mode ? 1.0 / cfg.samples_per_decade : cfg.t_max / 1024.0);
    const double log_factor = std::pow(10.0, 1.0 / cfg.samples_per_decade);
    double next_sample = stride;
    double last_emit_theta = theta0;
    auto advance_schedule = [&](double now) {
        while (next_sample <= now) {
            if (log_mode && next_sample >= 1.0) {
                next_sample *= log_factor;
            } else {
                next_sample += stride;
            }
        }
    };

    double t = 0.0;
    State y{rho0, theta0};
    State k1 = rhs(y);

    double h = 1e-2;
    double fac_old = 1e-4;
    long attempts = 0;
    TerminalEvent event = TerminalEvent::StepFailure;

    while (true) {
        if (++attempts > cfg.max_steps) {
            event = TerminalEvent::StepFailure;
            break;
        }

        // Start-of-step cap keeps per-step angle motion small.
        const double cap =
            0.25 / std::max({std::fabs(k1.rho), std::fabs(k1.theta), 1.0});
        h = std::min(h, cap);
        bool final_step = false;
        if (t + h >= cfg.t_max) {
            h = cfg.t_max - t;
            final_step = true;
        }
        if (!(h > 16.0 * std::numeric_limits<double>::epsilon() *
                      std::max(1.0, std::fabs(t)))) {
            event = TerminalEvent::StepFailure;
            break;
        }

        const State k2 = rhs({y.rho + h * a21 * k1.rho,
                              y.theta + h * a21 * k1.theta});
        const State k3 = rhs({y.rho + h * (a31 * k1.rho + a32 * k2.rho),
                              y.theta + h * (a31 * k1.theta + a32 * k2.theta)});
        const State k4 =
            rhs({y.rho + h * (a41 * k1.rho + a42 * k2.rho + a43 * k3.rho),
                 y.theta + h * (a41 * k1.theta + a42 * k2.theta + a43 * k3.theta)});
        const State k5 =
            rhs({y.rho + h * (a51 * k1.rho + a52 * k2.rho + a53 * k3.rho +
                              a54 * k4.rho),
                 y.theta + h * (a51 * k1.theta + a52 * k2.theta +
                                a53 * k3.theta + a54 * k4.theta)});
        const State k6 =
            rhs({y.rho + h * (a61 * k1.rho + a62 * k2.rho + a63 * k3.rho +
                              a64 * k4.rho + a65 * k5.rho),
                 y.theta + h * (a61 * k1.theta + a62 * k2.theta +
                                a63 * k3.theta + a64 * k4.theta +
                                a65 * k5.theta)});
        const State y_new{
            y.rho + h * (b1 * k1.rho + b3 * k3.rho + b4 * k4.rho +
                         b5 * k5.rho + b6 * k6.rho),
            y.theta + h * (b1 * k1.theta + b3 * k3.theta + b4 * k4.theta +
                           b5 * k5.theta + b6 * k6.theta)};
        const State k7 = rhs(y_new);  // FSAL stage

        const double err_rho =
            h * (e1 * k1.rho + e3 * k3.rho + e4 * k4.rho + e5 * k5.rho +
                 e6 * k6.rho + e7 * k7.rho);
        const double err_theta =
            h * (e1 * k1.theta + e3 * k3.theta + e4 * k4.theta +
                 e5 * k5.theta + e6 * k6.theta + e7 * k7.theta);
        const double sc_rho =
            cfg.abs_tol +
            cfg.rel_tol * std::max(std::fabs(y.rho), std::fabs(y_new.rho));
        const double sc_theta =
            cfg.abs_tol +
            cfg.rel_tol * std::max(std::fabs(y.theta), std::fabs(y_new.theta));
        const double q_rho = err_rho / sc_rho;
        const double q_theta = err_theta / sc_theta;
        double err = std::sqrt(0.5 * (q_rho * q_rho + q_theta * q_theta));
        err = std::max(err, 1e-10);

        if (err <= 1.0) {
            const double t_new = final_step ? cfg.t_max : t + h;
            const double scale =
                std::clamp(kSafety * std::pow(err, -kExpo) *
                               std::pow(fac_old, kBeta),
                           kMinScale, kMaxScale);
            fac_old = std::max(err, 1e-4);
            t = t_new;
            y = y_new;
            k1 = k7;
            h *= scale;

            const bool floor_hit = y.rho < cfg.rho_floor;
            const bool emit = final_step || floor_hit || t >= next_sample ||
                              std::fabs(y.theta - last_emit_theta) >= 1.0;
            if (emit && t > traj.samples.back().t) {
                traj.samples.push_back({t, y.rho, y.theta});
                last_emit_theta = y.theta;
                if (t >= next_sample) {
                    advance_schedule(t);
                }
            }
            if (floor_hit) {
                event = TerminalEvent::RadiusFloor;
                break;
            }
            if (final_step) {
                event = TerminalEvent::TimeLimit;
                break;
            }
        } else {
            h *= std::max(kMinScale, kSafety * std::pow(err, -kExpo));
        }
    }

    // Partial trajectories keep the last accepted state.
    if (t > traj.samples.back().t) {
        traj.samples.push_back({t, y.rho, y.theta});
    }
    traj.terminal_event = event;
    return traj;
}

double Trajectory::theta_at(double t) const {
    if (samples.empty() || t < samples.front().t || t > samples.back().t) {
        throw DomainError("theta_at: time outside the sampled span");
    }
    const auto it = std::lower_bound(
        samples.begin(), samples.end(), t,
        [](const TrajectorySample& s, double v) { return s.t < v; });
    if (it == samples.begin() || it->t == t) {
        return it->theta;
    }
    const auto prev = it - 1;
    const double w = (t - prev->t) / (it->t - prev->t);
    return prev->theta + w * (it->theta - prev->theta);
}

double winding(const Trajectory& traj, double t_from) {
    return (traj.theta_end() - traj.theta_at(t_from)) / (2.0 * M_PI);
}

double theta_tail_variation(const Trajectory& traj, double t_from) {
    if (traj.samples.empty() || t_from < traj.samples.front().t ||
        t_from > traj.samples.back().t) {
        throw DomainError("theta_tail_variation: time outside the sampled span");
    }
    const double theta_end = traj.theta_end();
    double worst = 0.0;
    for (auto it = traj.samples.rbegin(); it != traj.samples.rend(); ++it) {
        if (it->t < t_from) {
            break;
        }
        worst = std::max(worst, std::fabs(theta_end - it->theta));
    }
    return worst;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,rho,theta,r\n";
    char line[160];
    for (const TrajectorySample& s : traj.samples) {
        const double r = std::exp(s.rho);
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", s.t,
                      s.rho, s.theta, r);
        out << line;
    }
}

}  // namespace planode
