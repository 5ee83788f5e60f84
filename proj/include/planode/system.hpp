#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "planode/linalg2.hpp"

namespace planode {

enum class RemainderKind { None, LogRotation, HolderPolar, Custom };

/// Polar remainder values: phi perturbs r'/r, psi perturbs theta'.
struct PolarRemainder {
    double phi = 0.0;
    double psi = 0.0;
};

/// Right-hand side in log-polar coordinates: (r'/r, theta').
struct PolarRate {
    double log_radial = 0.0;
    double angular = 0.0;
};

/// Planar system x' = Jx + (u, v) with remainder vanishing at the origin.
///
/// Builtin remainders are stored by kind and parameters so polar-form
/// evaluation is analytic; Custom systems supply their own hooks. The polar
/// hook receives rho = ln r so remainders like m r^alpha stay evaluable far
/// below the underflow radius of r itself. Systems are immutable after
/// construction and all evaluation is pure.
struct PlanarSystem {
    Mat2 J;
    RemainderKind kind = RemainderKind::None;

    double epsilon = 0.0;  // LogRotation coupling

    double alpha = 0.0;  // HolderPolar exponent
    double amplitude = 0.0;
    int wavenumber = 0;

    bool jordan_form = false;  // builtin/config hint, informational

    std::function<Vec2(const Vec2&)> custom_cartesian;
    std::function<PolarRemainder(double, double)> custom_polar;  // (rho, theta)
};

/// Pure linear system x' = Jx.
PlanarSystem linear_system(const Mat2& J);

/// Attracting system with repeated eigenvalue -1 whose origin is a focus:
/// J = [[-1, 0], [epsilon, -1]] plus the log-rotation remainder
/// -2/ln(x^2+y^2) * (-y, x). Requires 0 <= epsilon < 2.
PlanarSystem counterexample(double epsilon);

/// Family with linear part diag(lambda, lambda), or the scaled Jordan block
/// [[lambda, 0], [-lambda, lambda]] when jordan is set, plus the polar
/// remainder phi = m r^alpha cos(k theta), psi = m r^alpha sin(k theta).
/// Both remainder components are bounded by m r^alpha exactly.
/// Requires lambda < 0, alpha in (0,1), amplitude >= 0.
PlanarSystem holder_family(double lambda, double alpha, double amplitude,
                           int wavenumber, bool jordan);

/// Remainder in polar form at rho = ln r. DomainError for LogRotation at
/// rho >= 0 (the ln r singularity sits at r = 1).
PolarRemainder polar_remainder(const PlanarSystem& sys, double rho, double theta);

/// Remainder (u, v) at a Cartesian point; defined as (0,0) at the origin.
Vec2 cartesian_remainder(const PlanarSystem& sys, const Vec2& p);

/// (r'/r, theta') evaluated analytically from J and the remainder kind,
/// never by dividing near-zero Cartesian values.
PolarRate polar_rhs(const PlanarSystem& sys, double rho, double theta);

/// Jp + remainder(p).
Vec2 cartesian_rhs(const PlanarSystem& sys, const Vec2& p);

/// Grid and refinement controls for the Hölder-constant estimator.
///
/// The divergence test refines r_min by refine_factor `refinements` times
/// and flags divergence when the estimate grows monotonically with total
/// growth above divergence_ratio. The stated exponent-0.5 blow-up of the
/// log-rotation remainder grows by ~8x over two decade refinements at
/// r_min = 1e-8, so the default ratio is set below that and well above the
/// grid noise of genuinely Hölder remainders.
struct HolderGridOptions {
    double refine_factor = 10.0;
    int refinements = 2;
    double divergence_ratio = 4.0;
    double min_growth = 1e-9;  // per-refinement monotonicity guard
};

/// Estimated Hölder constant: sup of max(|phi|, |psi|) / r^alpha over the
/// sampling window [r_min, r_max].
struct HolderEstimate {
    double alpha = 0.0;
    double m_hat = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
    bool diverging = false;
};

/// Sup of max(|phi|,|psi|)/r^alpha over a log-spaced r grid (n_r points,
/// endpoints included) times a uniform theta grid on [0, 2pi).
/// DomainError unless 0 < r_min < r_max < 1 and both grid sizes >= 2.
HolderEstimate estimate_holder_constant(const PlanarSystem& sys, double alpha,
                                        double r_min, double r_max, int n_r,
                                        int n_theta,
                                        const HolderGridOptions& opt = {});

/// Parse a system from the JSON configuration format:
///   {"linear": [[a11,a12],[a21,a22]],
///    "remainder": {"kind": "none"|"log_rotation"|"holder_polar",
///                  "epsilon": e, "alpha": a, "amplitude": m,
///                  "wavenumber": k, "jordan": bool}}
PlanarSystem load_system_json(std::istream& in);
PlanarSystem load_system_file(const std::string& path);

}  // namespace planode
