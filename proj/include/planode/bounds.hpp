#pragma once

#include <optional>
#include <string>

#include "planode/integrator.hpp"

namespace planode {

/// Rates and constants used by the bound checks.
///
/// k1/k2 are the two-sided envelope rates of the log-rotation system
/// (k1 = 1 + eps/2, k2 = 1 - eps/2); k is the one-sided contraction rate of
/// the Hölder families (|lambda|/2 diagonal case, |lambda|/4 Jordan case);
/// l = alpha*k; a = |lambda|; b = m*r0^alpha; t0 is the dichotomy start
/// time, required to satisfy e^{l t0} > 16ab/l^2 when b > 0; d is the
/// largest radius with m d^alpha below the case's |lambda| fraction, c the
/// Hölder window radius.
struct BoundParams {
    double k1 = 0.0, k2 = 0.0;
    double k = 0.0, l = 0.0;
    double m = 0.0;
    double a = 0.0, b = 0.0;
    double t0 = 0.0;
    double c = 0.0, d = 0.0;

    static BoundParams counterexample_rates(double epsilon);
    static BoundParams holder_case1(double lambda, double alpha, double m,
                                    double r0);
    static BoundParams jordan_case2(double lambda, double alpha, double m,
                                    double r0);

    /// Params for a system whose Hölder constant is only known empirically:
    /// the estimate enters with a 2x safety factor. Builtin families should
    /// use their exact amplitude instead.
    static BoundParams holder_case1_estimated(double lambda,
                                              const HolderEstimate& est,
                                              double r0);
    static BoundParams jordan_case2_estimated(double lambda,
                                              const HolderEstimate& est,
                                              double r0);
};

/// Pass/fail certificate for one inequality over a trajectory.
/// worst_margin is the most negative slack observed (before the allowed
/// slack is applied); holds == (worst_margin >= -slack_used).
struct BoundReport {
    std::string name;
    bool holds = false;
    double worst_margin = 0.0;
    double worst_t = 0.0;
    long samples_checked = 0;
    double slack_used = 0.0;
};

/// Two-sided exponential envelope in log-radius:
///   rho0 - rate_lower*t - slack <= rho(t) <= rho0 - rate_upper*t + slack
/// at every sample. Pass rate_lower = +infinity for an upper-only check.
BoundReport check_envelope(const Trajectory& traj, double rate_lower,
                           double rate_upper, double slack);

/// Winding lower bound of the log-rotation system:
///   (1/k1) { ln(k1 t - ln r0) - ln(-ln r0) },  k1 = 1 + eps/2.
/// DomainError unless r0 in (0,1).
double counterexample_theta_lower(double r0, double epsilon, double t);

/// Checks theta(t) - theta(0) >= counterexample_theta_lower(r0, eps, t) - slack
/// at every sample.
BoundReport check_counterexample_winding(const Trajectory& traj, double r0,
                                         double epsilon, double slack);

/// Angular tail bound of the diagonalizable Hölder case:
///   |theta* - theta(t)| <= (b/l) e^{-l t} + slack  for samples t >= t_from,
/// with theta* taken as the final sample (the proxy error is itself within
/// the bound being checked and is absorbed by the slack budget).
BoundReport check_theta_tail(const Trajectory& traj, const BoundParams& p,
                             double t_from, double slack);

enum class HBranch { AlwaysNegative, EventuallyNonnegative };

/// Certificate for the angular dichotomy of the Jordan case, driven by
/// h(t) = a cos^2 theta(t) - b e^{-l t}.
struct HReport {
    /// |cos theta(t_end)| at which a half-pi limit counts as reached.
    static constexpr double cos_flat_tol = 0.02;

    HBranch branch = HBranch::AlwaysNegative;
    double t1 = 0.0;  // first nonnegative sample (EventuallyNonnegative)
    double h_min_after_t1 = 0.0;
    bool theta_monotone_after_t1 = false;
    bool crossed_half_pi = false;
    std::optional<int> limit_n;  // theta(t_end) near (n + 1/2) pi
    double cos_theta_end = 0.0;

    double worst_theta_step = 0.0;   // most negative theta increment after t1
    double worst_line_margin = 0.0;  // closest approach beyond a half-pi line
    long samples_checked = 0;
    double slack_used = 0.0;

    /// All sub-checks of the taken branch pass.
    bool ok() const;
};

/// Evaluates h at every sample with t >= p.t0 and reports the branch taken.
/// AlwaysNegative additionally requires cos(theta) to have flattened onto a
/// half-pi line at the final sample; EventuallyNonnegative verifies
/// h >= -slack from t1 on, theta nondecreasing up to slack, and that theta
/// never crosses a (n + 1/2) pi line after t1.
/// InconsistentParams when b > 0 and e^{l t0} <= 16ab/l^2.
HReport monitor_h(const Trajectory& traj, const BoundParams& p, double slack);

/// Both sides of the sign identity used by the h-monitor's persistence
/// argument, evaluated on the crossing manifold cos^2 theta = b e^{-ls}/a
/// with the positive root of sin*cos:
///   lhs = (l b e^{-ls})^2 - {2a cos sin (a cos^2 + b e^{-ls})}^2
///   rhs = l^2 b^2 e^{-3ls} (e^{ls} - 16ab/l^2) + 16 b^4 e^{-4ls}
struct SignIdentityResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool positive = false;  // lhs > 0
};

/// DomainError when b e^{-ls} > a (the crossing manifold is empty).
SignIdentityResult crossing_sign_identity(double a, double b, double l, double s);

}  // namespace planode
