#include "planode/classifier.hpp"

#include <cmath>

namespace planode {

namespace {

double wrap_2pi(double x) {
    const double two_pi = 2.0 * M_PI;
    double w = x - two_pi * std::floor(x / two_pi);
    if (w >= two_pi) {
        w -= two_pi;
    }
    return w;
}

Stability stability_from(double re1, double re2) {
    if (re1 < 0.0 && re2 < 0.0) {
        return Stability::Attracting;
    }
    if (re1 > 0.0 && re2 > 0.0) {
        return Stability::Repelling;
    }
    return Stability::NotApplicable;
}

}  // namespace

RegularityClass RegularityClass::c1_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw ParameterOutOfRange("RegularityClass: alpha must lie in (0, 1)");
    }
    return RegularityClass(true, alpha);
}

Classification spectral_classify(const Spectrum& s, const RegularityClass& reg) {
    const double re1 = s.lambda1.real();
    const double re2 = s.lambda2.real();
    const double scale = std::max({1.0, std::abs(s.lambda1), std::abs(s.lambda2)});
    const double zero_tol = 1e-12 * scale;

    Classification c;
    c.evidence = s.repeated() && reg.is_holder()
                     ? Evidence::SpectralRepeatedHolder
                     : Evidence::SpectralDistinct;

    if (std::fabs(re1) <= zero_tol || std::fabs(re2) <= zero_tol) {
        c.shape = Shape::Undetermined;
        c.stability = Stability::NotApplicable;
        return c;
    }
    c.stability = stability_from(re1, re2);

    switch (s.structure) {
        case SpectrumStructure::DistinctReal:
            c.shape = re1 * re2 > 0.0 ? Shape::Node : Shape::Saddle;
            break;
        case SpectrumStructure::ComplexPair:
            c.shape = Shape::Focus;
            break;
        case SpectrumStructure::RepeatedDiagonalizable:
        case SpectrumStructure::RepeatedDefective:
            // Under plain C1 a repeated spectrum cannot decide node vs focus.
            c.shape = reg.is_holder() ? Shape::Node : Shape::Undetermined;
            break;
    }
    if (c.shape == Shape::Saddle) {
        c.stability = Stability::NotApplicable;
    }
    return c;
}

Classification empirical_classify(const PlanarSystem& sys, double rho0,
                                  double theta0, const IntegratorConfig& cfg,
                                  const EmpiricalOptions& opt) {
    const Spectrum s = eigen(sys.J);
    const double re1 = s.lambda1.real();
    const double re2 = s.lambda2.real();
    if (re1 == 0.0 || re2 == 0.0 || re1 * re2 < 0.0) {
        throw SpectrumMismatch(
            "empirical_classify: eigenvalue real parts must be nonzero with "
            "a common sign");
    }
    const bool repelling = re1 > 0.0;
    const Trajectory traj =
        integrate(sys, rho0, theta0, cfg,
                  repelling ? TimeDirection::Reversed : TimeDirection::Forward);

    Classification c;
    c.evidence = Evidence::Empirical;
    c.stability = repelling ? Stability::Repelling : Stability::Attracting;

    const TrajectorySample& last = traj.samples.back();
    {
        const PolarRate rate = polar_rhs(sys, last.rho, last.theta);
        c.f_angle = wrap_2pi(last.theta +
                             std::atan2(rate.angular, rate.log_radial));
    }

    const double turns = std::fabs(winding(traj, traj.samples.front().t));
    if (turns >= opt.turns_threshold) {
        c.shape = Shape::Focus;
        c.turns = turns;
        return c;
    }

    const double span = traj.t_end() - traj.samples.front().t;
    const double t_from = traj.t_end() - opt.tail_window_fraction * span;
    if (theta_tail_variation(traj, t_from) < opt.tail_threshold) {
        c.shape = Shape::Node;
        c.theta_limit = wrap_2pi(last.theta);
        return c;
    }
    c.shape = Shape::Undetermined;  // horizon too short to decide
    return c;
}

std::string to_string(Shape s) {
    switch (s) {
        case Shape::Node: return "Node";
        case Shape::Focus: return "Focus";
        case Shape::Saddle: return "Saddle";
        case Shape::Undetermined: return "Undetermined";
    }
    return "?";
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::Repelling: return "repelling";
        case Stability::Attracting: return "attracting";
        case Stability::NotApplicable: return "n/a";
    }
    return "?";
}

}  // namespace planode
