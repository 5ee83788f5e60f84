#pragma once

#include <iosfwd>
#include <vector>

#include "planode/system.hpp"

namespace planode {

struct TrajectorySample {
    double t = 0.0;
    double rho = 0.0;  // ln r
    double theta = 0.0;  // unwrapped, continuous
};

enum class TerminalEvent { TimeLimit, RadiusFloor, StepFailure };

/// Time series of (t, ln r, theta) with a terminal event tag.
/// theta is never reduced mod 2pi; adjacent samples differ by less than pi.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    TerminalEvent terminal_event = TerminalEvent::TimeLimit;
    double r0 = 0.0;
    double theta0 = 0.0;

    double t_end() const { return samples.back().t; }
    double theta_end() const { return samples.back().theta; }

    /// theta at time t by linear interpolation between bracketing samples.
    /// DomainError outside the sampled span.
    double theta_at(double t) const;
};

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double t_max = 1e3;
    /// In log coordinates the flow is benign arbitrarily far down, so the
    /// default floor is effectively unreachable; set a finite value to stop
    /// at a target radius.
    double rho_floor = -1e300;
    long max_steps = 20'000'000;

    /// Output spacing in t; 0 selects t_max/1024. Horizons beyond t = 1e3
    /// switch to log-spaced emission at samples_per_decade once t > 1.
    double sample_stride = 0.0;
    int samples_per_decade = 64;

    void validate() const;  // DomainError on violation
};

enum class TimeDirection { Forward, Reversed };

/// Adaptive Dormand-Prince 5(4) integration of the log-polar system with
/// PI step control. Step sizes are additionally capped by
/// 0.25 / max(|rho'|, |theta'|, 1) at the step start, which keeps adjacent
/// samples within the angle-jump invariant. Samples are emitted at the
/// configured stride, whenever theta has moved one radian since the last
/// emission, and at both endpoints. Terminates on the first of: t_max
/// reached, rho below rho_floor, step-size underflow or step budget
/// exhausted (StepFailure, partial trajectory returned).
/// Requires rho0 < ln(0.5).
Trajectory integrate(const PlanarSystem& sys, double rho0, double theta0,
                     const IntegratorConfig& cfg,
                     TimeDirection dir = TimeDirection::Forward);

/// Net turns between t_from and the end of the trajectory:
/// (theta(t_end) - theta(t_from)) / 2pi.
double winding(const Trajectory& traj, double t_from);

/// Sup over samples with t >= t_from of |theta(t_end) - theta(t)|, a
/// computable Cauchy-tail proxy for angular convergence.
double theta_tail_variation(const Trajectory& traj, double t_from);

/// CSV export: header `t,rho,theta,r`, one row per sample, r = exp(rho)
/// (0 when underflowed), 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace planode
