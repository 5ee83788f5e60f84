#include "planode/system.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace planode {

PlanarSystem linear_system(const Mat2& J) {
    PlanarSystem sys;
    sys.J = J;
    sys.kind = RemainderKind::None;
    return sys;
}

PlanarSystem counterexample(double epsilon) {
    if (!(epsilon >= 0.0) || !(epsilon < 2.0)) {
        throw ParameterOutOfRange("counterexample: epsilon must lie in [0, 2)");
    }
    PlanarSystem sys;
    sys.J = {-1.0, 0.0, epsilon, -1.0};
    sys.kind = RemainderKind::LogRotation;
    sys.epsilon = epsilon;
    return sys;
}

PlanarSystem holder_family(double lambda, double alpha, double amplitude,
                           int wavenumber, bool jordan) {
    if (!(lambda < 0.0)) {
        throw ParameterOutOfRange("holder_family: lambda must be negative");
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw ParameterOutOfRange("holder_family: alpha must lie in (0, 1)");
    }
    if (!(amplitude >= 0.0)) {
        throw ParameterOutOfRange("holder_family: amplitude must be >= 0");
    }
    PlanarSystem sys;
    sys.J = jordan ? Mat2{lambda, 0.0, -lambda, lambda}
                   : Mat2{lambda, 0.0, 0.0, lambda};
    sys.kind = RemainderKind::HolderPolar;
    sys.alpha = alpha;
    sys.amplitude = amplitude;
    sys.wavenumber = wavenumber;
    sys.jordan_form = jordan;
    return sys;
}

PolarRemainder polar_remainder(const PlanarSystem& sys, double rho,
                               double theta) {
    switch (sys.kind) {
        case RemainderKind::None:
            return {};
        case RemainderKind::LogRotation:
            if (!(rho < 0.0)) {
                throw DomainError(
                    "polar_remainder: log-rotation remainder needs rho < 0");
            }
            return {0.0, -1.0 / rho};
        case RemainderKind::HolderPolar: {
            // m r^alpha evaluated as exp(alpha rho): stays finite far below
            // the underflow radius of r.
            const double envelope = sys.amplitude * std::exp(sys.alpha * rho);
            const double arg = sys.wavenumber * theta;
            return {envelope * std::cos(arg), envelope * std::sin(arg)};
        }
        case RemainderKind::Custom:
            return sys.custom_polar(rho, theta);
    }
    return {};
}

Vec2 cartesian_remainder(const PlanarSystem& sys, const Vec2& p) {
    if (p.x == 0.0 && p.y == 0.0) {
        return {0.0, 0.0};  // defined by continuity
    }
    switch (sys.kind) {
        case RemainderKind::None:
            return {0.0, 0.0};
        case RemainderKind::LogRotation: {
            const double s = std::log(p.x * p.x + p.y * p.y);
            return {2.0 * p.y / s, -2.0 * p.x / s};
        }
        case RemainderKind::HolderPolar: {
            const double r = p.norm();
            const double theta = std::atan2(p.y, p.x);
            const PolarRemainder rem = polar_remainder(sys, std::log(r), theta);
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            return {r * (rem.phi * c - rem.psi * s),
                    r * (rem.phi * s + rem.psi * c)};
        }
        case RemainderKind::Custom:
            return sys.custom_cartesian(p);
    }
    return {0.0, 0.0};
}

PolarRate polar_rhs(const PlanarSystem& sys, double rho, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Mat2& J = sys.J;
    // r r' = x.x' + y.y' and r^2 theta' = x y' - y x' applied to the linear
    // part; the remainder enters directly as (phi, psi).
    PolarRate rate;
    rate.log_radial = J.a11 * c * c + (J.a12 + J.a21) * c * s + J.a22 * s * s;
    rate.angular = J.a21 * c * c - J.a12 * s * s + (J.a22 - J.a11) * c * s;
    const PolarRemainder rem = polar_remainder(sys, rho, theta);
    rate.log_radial += rem.phi;
    rate.angular += rem.psi;
    return rate;
}

Vec2 cartesian_rhs(const PlanarSystem& sys, const Vec2& p) {
    return sys.J.apply(p) + cartesian_remainder(sys, p);
}

namespace {

double grid_max_ratio(const PlanarSystem& sys, double alpha, double rho_min,
                      double rho_max, int n_r, int n_theta) {
    const double dtheta = 2.0 * M_PI / n_theta;
    const double drho = (rho_max - rho_min) / (n_r - 1);
    double worst = 0.0;
    for (int i = 0; i < n_r; ++i) {
        const double rho = i == n_r - 1 ? rho_max : rho_min + i * drho;
        const double inv_envelope = std::exp(-alpha * rho);
        for (int j = 0; j < n_theta; ++j) {
            const PolarRemainder rem = polar_remainder(sys, rho, j * dtheta);
            const double mag = std::max(std::fabs(rem.phi), std::fabs(rem.psi));
            worst = std::max(worst, mag * inv_envelope);
        }
    }
    return worst;
}

}  // namespace

HolderEstimate estimate_holder_constant(const PlanarSystem& sys, double alpha,
                                        double r_min, double r_max, int n_r,
                                        int n_theta,
                                        const HolderGridOptions& opt) {
    if (!(r_min > 0.0) || !(r_min < r_max) || !(r_max < 1.0)) {
        throw DomainError(
            "estimate_holder_constant: need 0 < r_min < r_max < 1");
    }
    if (n_r < 2 || n_theta < 2) {
        throw DomainError("estimate_holder_constant: grid sizes must be >= 2");
    }

    const double rho_min = std::log(r_min);
    const double rho_max = std::log(r_max);

    HolderEstimate est;
    est.alpha = alpha;
    est.r_min = r_min;
    est.r_max = r_max;
    est.m_hat = grid_max_ratio(sys, alpha, rho_min, rho_max, n_r, n_theta);

    // Divergence probe: push r_min down by refine_factor per round, keeping
    // the radial grid density, and watch the estimate.
    const double density = (n_r - 1) / (rho_max - rho_min);
    double prev = est.m_hat;
    bool monotone = true;
    double last = est.m_hat;
    for (int round = 1; round <= opt.refinements; ++round) {
        const double lo = rho_min - round * std::log(opt.refine_factor);
        const int n = 2 + static_cast<int>(std::ceil(density * (rho_max - lo)));
        last = grid_max_ratio(sys, alpha, lo, rho_max, n, n_theta);
        if (!(last > prev * (1.0 + opt.min_growth))) {
            monotone = false;
        }
        prev = last;
    }
    est.diverging =
        monotone && est.m_hat > 0.0 && last / est.m_hat > opt.divergence_ratio;
    return est;
}

namespace {

PlanarSystem system_from_json(const nlohmann::json& j) {
    if (!j.contains("linear")) {
        throw DomainError("system config: missing \"linear\" matrix");
    }
    const auto& lin = j.at("linear");
    if (!lin.is_array() || lin.size() != 2 || lin[0].size() != 2 ||
        lin[1].size() != 2) {
        throw DomainError("system config: \"linear\" must be a 2x2 array");
    }
    Mat2 J{lin[0][0].get<double>(), lin[0][1].get<double>(),
           lin[1][0].get<double>(), lin[1][1].get<double>()};

    if (!j.contains("remainder")) {
        return linear_system(J);
    }
    const auto& rem = j.at("remainder");
    const std::string kind = rem.value("kind", "none");
    if (kind == "none") {
        PlanarSystem sys = linear_system(J);
        sys.jordan_form = rem.value("jordan", false);
        return sys;
    }
    if (kind == "log_rotation") {
        const double eps = rem.value("epsilon", 0.0);
        if (!(eps >= 0.0) || !(eps < 2.0)) {
            throw ParameterOutOfRange(
                "system config: log_rotation epsilon must lie in [0, 2)");
        }
        PlanarSystem sys;
        sys.J = J;
        sys.kind = RemainderKind::LogRotation;
        sys.epsilon = eps;
        sys.jordan_form = rem.value("jordan", false);
        return sys;
    }
    if (kind == "holder_polar") {
        const double alpha = rem.value("alpha", 0.5);
        const double amplitude = rem.value("amplitude", 0.0);
        if (!(alpha > 0.0) || !(alpha < 1.0)) {
            throw ParameterOutOfRange(
                "system config: holder_polar alpha must lie in (0, 1)");
        }
        if (!(amplitude >= 0.0)) {
            throw ParameterOutOfRange(
                "system config: holder_polar amplitude must be >= 0");
        }
        PlanarSystem sys;
        sys.J = J;
        sys.kind = RemainderKind::HolderPolar;
        sys.alpha = alpha;
        sys.amplitude = amplitude;
        sys.wavenumber = rem.value("wavenumber", 0);
        sys.jordan_form = rem.value("jordan", false);
        return sys;
    }
    throw DomainError("system config: unknown remainder kind \"" + kind + "\"");
}

}  // namespace

PlanarSystem load_system_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("system config: parse error: ") +
                          e.what());
    }
    return system_from_json(j);
}

PlanarSystem load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("system config: cannot open " + path);
    }
    return load_system_json(in);
}

}  // namespace planode
