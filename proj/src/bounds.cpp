#include "planode/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace planode {

namespace {

void require_window(double r0) {
    if (!(r0 > 0.0) || !(r0 < 1.0)) {
        throw DomainError("bounds: r0 must lie in (0, 1)");
    }
}

// Index of the nearest half-pi line strictly above theta, as the integer n
// of (n + 1/2) pi; theta in ((n-1/2) pi, (n+1/2) pi] maps to n.
double line_above(double theta) {
    const double n = std::floor(theta / M_PI + 0.5);
    return (n + 0.5) * M_PI;
}

}  // namespace

BoundParams BoundParams::counterexample_rates(double epsilon) {
    if (!(epsilon >= 0.0) || !(epsilon < 2.0)) {
        throw ParameterOutOfRange(
            "BoundParams: counterexample epsilon must lie in [0, 2)");
    }
    BoundParams p;
    p.k1 = 1.0 + 0.5 * epsilon;
    p.k2 = 1.0 - 0.5 * epsilon;
    return p;
}

namespace {

BoundParams holder_params(double lambda, double alpha, double m, double r0,
                          double fraction) {
    if (!(lambda < 0.0)) {
        throw ParameterOutOfRange("BoundParams: lambda must be negative");
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw ParameterOutOfRange("BoundParams: alpha must lie in (0, 1)");
    }
    if (!(m >= 0.0)) {
        throw ParameterOutOfRange("BoundParams: m must be >= 0");
    }
    require_window(r0);

    BoundParams p;
    p.a = std::fabs(lambda);
    p.k = fraction * p.a;
    p.l = alpha * p.k;
    p.m = m;
    p.b = m * std::pow(r0, alpha);
    if (p.b >= p.a * fraction) {
        throw InconsistentParams(
            "BoundParams: m r0^alpha must stay below the contraction budget");
    }
    p.d = m > 0.0
              ? std::min(0.99, std::pow(p.a * fraction / m, 1.0 / alpha))
              : 0.99;
    p.c = p.d;
    return p;
}

}  // namespace

BoundParams BoundParams::holder_case1(double lambda, double alpha, double m,
                                      double r0) {
    return holder_params(lambda, alpha, m, r0, 0.5);
}

BoundParams BoundParams::jordan_case2(double lambda, double alpha, double m,
                                      double r0) {
    BoundParams p = holder_params(lambda, alpha, m, r0, 0.25);
    if (p.b > 0.0) {
        const double threshold = 16.0 * p.a * p.b / (p.l * p.l);
        p.t0 = std::max(0.0, std::log(threshold) / p.l) + 1.0;
    }
    return p;
}

BoundParams BoundParams::holder_case1_estimated(double lambda,
                                                const HolderEstimate& est,
                                                double r0) {
    if (est.diverging) {
        throw InconsistentParams(
            "BoundParams: estimator reports a diverging Holder ratio");
    }
    return holder_case1(lambda, est.alpha, 2.0 * est.m_hat, r0);
}

BoundParams BoundParams::jordan_case2_estimated(double lambda,
                                                const HolderEstimate& est,
                                                double r0) {
    if (est.diverging) {
        throw InconsistentParams(
            "BoundParams: estimator reports a diverging Holder ratio");
    }
    return jordan_case2(lambda, est.alpha, 2.0 * est.m_hat, r0);
}

BoundReport check_envelope(const Trajectory& traj, double rate_lower,
                           double rate_upper, double slack) {
    BoundReport rep;
    rep.name = "envelope";
    rep.slack_used = slack;
    rep.worst_margin = std::numeric_limits<double>::infinity();

    const double rho0 = traj.samples.front().rho;
    const bool two_sided = std::isfinite(rate_lower);
    for (const TrajectorySample& s : traj.samples) {
        const double upper = rho0 - rate_upper * s.t - s.rho;
        double margin = upper;
        if (two_sided) {
            margin = std::min(margin, s.rho - (rho0 - rate_lower * s.t));
        }
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_t = s.t;
        }
        ++rep.samples_checked;
    }
    rep.holds = rep.worst_margin >= -slack;
    return rep;
}

double counterexample_theta_lower(double r0, double epsilon, double t) {
    require_window(r0);
    if (!(t >= 0.0)) {
        throw DomainError("counterexample_theta_lower: t must be >= 0");
    }
    const double k1 = 1.0 + 0.5 * epsilon;
    const double log_r0 = std::log(r0);
    return (std::log(k1 * t - log_r0) - std::log(-log_r0)) / k1;
}

BoundReport check_counterexample_winding(const Trajectory& traj, double r0,
                                         double epsilon, double slack) {
    BoundReport rep;
    rep.name = "winding_lower";
    rep.slack_used = slack;
    rep.worst_margin = std::numeric_limits<double>::infinity();

    const double theta0 = traj.samples.front().theta;
    for (const TrajectorySample& s : traj.samples) {
        const double margin =
            (s.theta - theta0) - counterexample_theta_lower(r0, epsilon, s.t);
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_t = s.t;
        }
        ++rep.samples_checked;
    }
    rep.holds = rep.worst_margin >= -slack;
    return rep;
}

BoundReport check_theta_tail(const Trajectory& traj, const BoundParams& p,
                             double t_from, double slack) {
    BoundReport rep;
    rep.name = "theta_tail";
    rep.slack_used = slack;
    rep.worst_margin = std::numeric_limits<double>::infinity();

    const double theta_star = traj.theta_end();
    for (const TrajectorySample& s : traj.samples) {
        if (s.t < t_from) {
            continue;
        }
        const double bound = (p.b / p.l) * std::exp(-p.l * s.t);
        const double margin = bound - std::fabs(theta_star - s.theta);
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_t = s.t;
        }
        ++rep.samples_checked;
    }
    rep.holds = rep.worst_margin >= -slack;
    return rep;
}

bool HReport::ok() const {
    if (branch == HBranch::AlwaysNegative) {
        return limit_n.has_value();
    }
    return h_min_after_t1 >= -slack_used && theta_monotone_after_t1 &&
           !crossed_half_pi;
}

HReport monitor_h(const Trajectory& traj, const BoundParams& p, double slack) {
    if (p.b > 0.0) {
        if (!(p.l > 0.0) ||
            !(std::exp(p.l * p.t0) > 16.0 * p.a * p.b / (p.l * p.l))) {
            throw InconsistentParams(
                "monitor_h: need e^{l t0} > 16ab/l^2 when b > 0");
        }
    }

    const auto begin = std::find_if(
        traj.samples.begin(), traj.samples.end(),
        [&](const TrajectorySample& s) { return s.t >= p.t0; });
    if (begin == traj.samples.end()) {
        throw DomainError("monitor_h: no samples at or after t0");
    }

    auto h_of = [&](const TrajectorySample& s) {
        const double c = std::cos(s.theta);
        return p.a * c * c - p.b * std::exp(-p.l * s.t);
    };

    HReport rep;
    rep.slack_used = slack;
    rep.t1 = std::numeric_limits<double>::quiet_NaN();

    rep.samples_checked = traj.samples.end() - begin;

    auto first_nonneg = traj.samples.end();
    for (auto it = begin; it != traj.samples.end(); ++it) {
        if (h_of(*it) >= 0.0) {
            first_nonneg = it;
            break;
        }
    }

    const double theta_end = traj.theta_end();
    rep.cos_theta_end = std::cos(theta_end);
    const bool flat = std::fabs(rep.cos_theta_end) <= HReport::cos_flat_tol;
    if (flat) {
        rep.limit_n = static_cast<int>(std::lround(theta_end / M_PI - 0.5));
    }

    if (first_nonneg == traj.samples.end()) {
        rep.branch = HBranch::AlwaysNegative;
        double h_min = std::numeric_limits<double>::infinity();
        for (auto it = begin; it != traj.samples.end(); ++it) {
            h_min = std::min(h_min, h_of(*it));
        }
        rep.h_min_after_t1 = h_min;
        rep.theta_monotone_after_t1 = true;
        return rep;
    }

    rep.branch = HBranch::EventuallyNonnegative;
    rep.t1 = first_nonneg->t;
    rep.h_min_after_t1 = std::numeric_limits<double>::infinity();
    rep.worst_theta_step = std::numeric_limits<double>::infinity();
    rep.worst_line_margin = -std::numeric_limits<double>::infinity();

    for (auto it = first_nonneg; it != traj.samples.end(); ++it) {
        rep.h_min_after_t1 = std::min(rep.h_min_after_t1, h_of(*it));
        if (it + 1 != traj.samples.end()) {
            const auto next = it + 1;
            rep.worst_theta_step =
                std::min(rep.worst_theta_step, next->theta - it->theta);
            // theta may approach but not pass the next half-pi line
            rep.worst_line_margin = std::max(
                rep.worst_line_margin, next->theta - line_above(it->theta));
        }
    }
    if (first_nonneg + 1 == traj.samples.end()) {
        rep.worst_theta_step = 0.0;
        rep.worst_line_margin = 0.0;
    }
    rep.theta_monotone_after_t1 = rep.worst_theta_step >= -slack;
    rep.crossed_half_pi = rep.worst_line_margin > slack;
    return rep;
}

SignIdentityResult crossing_sign_identity(double a, double b, double l,
                                          double s) {
    if (!(a > 0.0) || !(l > 0.0) || !(b >= 0.0)) {
        throw DomainError("crossing_sign_identity: need a > 0, l > 0, b >= 0");
    }
    const double decay = std::exp(-l * s);
    const double beta = b * decay;  // = a cos^2 theta on the crossing manifold
    if (beta > a) {
        throw DomainError("crossing_sign_identity: b e^{-ls} must not exceed a");
    }

    const double cos_sq = beta / a;
    const double sin_cos = std::sqrt(cos_sq * (1.0 - cos_sq));
    const double lhs_first = l * beta;
    const double lhs_second = 2.0 * a * sin_cos * (a * cos_sq + beta);
    SignIdentityResult res;
    res.lhs = lhs_first * lhs_first - lhs_second * lhs_second;
    res.rhs = l * l * b * b * std::exp(-3.0 * l * s) *
                  (std::exp(l * s) - 16.0 * a * b / (l * l)) +
              16.0 * b * b * b * b * std::exp(-4.0 * l * s);
    res.positive = res.lhs > 0.0;
    return res;
}

}  // namespace planode
