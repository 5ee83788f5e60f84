#include "planode/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <random>

#include "json.hpp"
#include "planode/classifier.hpp"

namespace planode {

namespace {

/// Deterministic uniform doubles: engine output mapped through the usual
/// 53-bit ladder rather than std distributions, whose streams differ across
/// standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(
                                                  hi - lo + 1));
    }
    double sign() { return (eng_() & 1u) != 0u ? 1.0 : -1.0; }

  private:
    std::mt19937_64 eng_;
};

std::string draw_tag(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d", i);
    return buf;
}

constexpr double kEpsilonGrid[] = {0.0, 0.5, 1.0, 1.5};

Trajectory counterexample_run(double epsilon) {
    IntegratorConfig cfg;
    cfg.t_max = 1e3;
    return integrate(counterexample(epsilon), -1.0, 0.0, cfg);
}

std::vector<BoundReport> envelope_suite(std::uint64_t) {
    std::vector<BoundReport> out;
    for (double eps : kEpsilonGrid) {
        const BoundParams p = BoundParams::counterexample_rates(eps);
        BoundReport rep = check_envelope(counterexample_run(eps), p.k1, p.k2, 1e-6);
        char name[64];
        std::snprintf(name, sizeof(name), "envelope/counterexample/eps=%.1f", eps);
        rep.name = name;
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<BoundReport> winding_suite(std::uint64_t) {
    std::vector<BoundReport> out;
    const double r0 = std::exp(-1.0);
    for (double eps : kEpsilonGrid) {
        BoundReport rep =
            check_counterexample_winding(counterexample_run(eps), r0, eps, 1e-6);
        char name[64];
        std::snprintf(name, sizeof(name), "winding_lower/counterexample/eps=%.1f",
                      eps);
        rep.name = name;
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<BoundReport> tail_suite(std::uint64_t) {
    std::vector<BoundReport> out;
    const PlanarSystem sys = holder_family(-1.0, 0.5, 0.1, 3, false);
    IntegratorConfig cfg;
    cfg.t_max = 100.0;

    {
        const double r0 = 0.01;
        const Trajectory traj = integrate(sys, std::log(r0), 0.3, cfg);
        const BoundParams p = BoundParams::holder_case1(-1.0, 0.5, 0.1, r0);

        BoundReport env = check_envelope(
            traj, std::numeric_limits<double>::infinity(), p.k, 1e-6);
        env.name = "envelope_upper/holder_case1";
        out.push_back(std::move(env));

        BoundReport tail = check_theta_tail(traj, p, 0.0, 1e-4);
        tail.name = "theta_tail/holder_case1";
        out.push_back(std::move(tail));

        const Classification cls = empirical_classify(sys, std::log(r0), 0.3, cfg);
        const double tv = theta_tail_variation(traj, 0.5 * traj.t_end());
        BoundReport node;
        node.name = "node/holder_case1";
        node.slack_used = 0.0;
        node.samples_checked = static_cast<long>(traj.samples.size());
        node.worst_margin = 1e-3 - tv;
        node.worst_t = traj.t_end();
        node.holds = cls.shape == Shape::Node && node.worst_margin >= 0.0;
        out.push_back(std::move(node));
    }
    {
        const double r0 = 0.001;
        const Trajectory traj = integrate(sys, std::log(r0), 0.3, cfg);
        const BoundParams p = BoundParams::holder_case1(-1.0, 0.5, 0.1, r0);
        BoundReport tail = check_theta_tail(traj, p, 0.0, 1e-4);
        tail.name = "theta_tail/holder_case1_small_r0";
        out.push_back(std::move(tail));
    }
    return out;
}

BoundReport report_from_h(const std::string& name, const HReport& h,
                          bool classified_node, double worst_t) {
    BoundReport r;
    r.name = name;
    r.slack_used = h.slack_used;
    r.samples_checked = h.samples_checked;
    r.worst_t = worst_t;
    if (h.branch == HBranch::AlwaysNegative) {
        r.worst_margin = HReport::cos_flat_tol - std::fabs(h.cos_theta_end);
    } else {
        r.worst_margin = std::min(
            {h.h_min_after_t1, h.worst_theta_step, -h.worst_line_margin});
    }
    if (!classified_node) {
        r.worst_margin = std::min(r.worst_margin, -1.0);
    }
    r.holds = h.ok() && classified_node && r.worst_margin >= -h.slack_used;
    return r;
}

std::vector<BoundReport> jordan_suite(std::uint64_t seed) {
    std::vector<BoundReport> out;
    constexpr double kAlphaGrid[] = {0.3, 0.5, 0.7};
    Rng rng(seed + 0x6a6f7264);

    for (int i = 0; i < 50; ++i) {
        const double alpha = kAlphaGrid[i % 3];
        const double lambda = -rng.uniform(0.5, 2.0);
        const double a = -lambda;
        const double m = rng.uniform(0.01, 0.2);
        const int wavenumber = rng.uniform_int(1, 5);
        const double theta0 = rng.uniform(-M_PI, M_PI);
        // Keep m r0^alpha at or below a/8, half the allowed budget.
        const double r0 =
            std::min(0.01, std::pow(a / (8.0 * m), 1.0 / alpha));

        const PlanarSystem sys =
            holder_family(lambda, alpha, m, wavenumber, true);
        IntegratorConfig cfg;
        cfg.t_max = std::max(4000.0, 6000.0 / a);

        const Trajectory traj = integrate(sys, std::log(r0), theta0, cfg);
        const BoundParams p = BoundParams::jordan_case2(lambda, alpha, m, r0);
        const HReport h = monitor_h(traj, p, 1e-6);
        const Classification cls =
            empirical_classify(sys, std::log(r0), theta0, cfg);
        out.push_back(report_from_h("jordan_case2/draw=" + draw_tag(i), h,
                                    cls.shape == Shape::Node, traj.t_end()));
    }
    return out;
}

std::vector<BoundReport> identity_suite(std::uint64_t seed) {
    Rng rng(seed + 0x65713230);
    const int n = 10000;

    BoundReport precision;
    precision.name = "crossing_sign_identity/precision";
    precision.slack_used = 0.0;
    precision.worst_margin = std::numeric_limits<double>::infinity();

    BoundReport positivity;
    positivity.name = "crossing_sign_identity/positivity";
    positivity.slack_used = 0.0;
    positivity.worst_margin = std::numeric_limits<double>::infinity();

    for (int i = 0; i < n; ++i) {
        const double a = rng.uniform(0.2, 3.0);
        const double b = rng.uniform(0.02, 3.0);
        const double l = rng.uniform(0.05, 2.0);
        const double ls_min = std::max(0.0, std::log(b / a));
        const double s = (ls_min + rng.uniform(0.0, 20.0)) / l;

        const SignIdentityResult res = crossing_sign_identity(a, b, l, s);
        const double tol = 1e-10 * std::max(1.0, std::fabs(res.rhs));
        const double margin = tol - std::fabs(res.lhs - res.rhs);
        if (margin < precision.worst_margin) {
            precision.worst_margin = margin;
            precision.worst_t = s;
        }
        ++precision.samples_checked;

        if (std::exp(l * s) > 16.0 * a * b / (l * l)) {
            const double pos_margin = res.positive ? res.lhs : -1.0;
            if (pos_margin < positivity.worst_margin) {
                positivity.worst_margin = pos_margin;
                positivity.worst_t = s;
            }
            ++positivity.samples_checked;
        }
    }
    precision.holds = precision.worst_margin >= 0.0;
    positivity.holds = positivity.worst_margin > 0.0;
    return {precision, positivity};
}

std::vector<BoundReport> holder_suite(std::uint64_t) {
    std::vector<BoundReport> out;
    const int n_theta = 256;

    {
        // 200 radii per decade over [1e-8, 0.1].
        const int n_r = 1 + static_cast<int>(200 * std::log10(0.1 / 1e-8));
        const HolderEstimate est = estimate_holder_constant(
            counterexample(0.0), 0.5, 1e-8, 0.1, n_r, n_theta);
        BoundReport rep;
        rep.name = "holder_estimate/counterexample_diverges";
        rep.samples_checked = static_cast<long>(n_r) * n_theta;
        rep.worst_margin = est.m_hat - 500.0;
        rep.worst_t = est.r_min;
        rep.holds = est.diverging && rep.worst_margin >= 0.0;
        out.push_back(std::move(rep));
    }
    {
        const int n_r = 1 + static_cast<int>(200 * std::log10(0.5 / 1e-6));
        const PlanarSystem sys = holder_family(-1.0, 0.5, 1.0, 3, false);
        const HolderEstimate est =
            estimate_holder_constant(sys, 0.5, 1e-6, 0.5, n_r, n_theta);

        BoundReport stab;
        stab.name = "holder_estimate/family_stabilizes";
        stab.samples_checked = static_cast<long>(n_r) * n_theta;
        stab.worst_margin = 0.02 - std::fabs(est.m_hat - 1.0);
        stab.worst_t = est.r_min;
        stab.holds = !est.diverging && stab.worst_margin >= 0.0;
        out.push_back(std::move(stab));

        BoundReport exact;
        exact.name = "holder_estimate/family_exact_bound";
        exact.samples_checked = static_cast<long>(n_r) * n_theta;
        exact.worst_margin = 1.0 + 1e-12 - est.m_hat;
        exact.worst_t = est.r_min;
        exact.holds = exact.worst_margin >= 0.0;
        out.push_back(std::move(exact));
    }
    return out;
}

Mat2 random_basis(Rng& rng) {
    while (true) {
        const Mat2 Q{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                     rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        if (std::fabs(Q.det()) >= 0.3) {
            return Q;
        }
    }
}

Mat2 conjugated(const Mat2& core, Rng& rng) {
    const Mat2 Q = random_basis(rng);
    return Q * core * Q.inverse();
}

std::vector<BoundReport> agreement_suite(std::uint64_t seed) {
    Rng rng(seed + 0x61677265);

    BoundReport agree;
    agree.name = "agreement/empirical_vs_spectral";
    agree.slack_used = 0.0;
    agree.worst_margin = 0.0;

    for (int i = 0; i < 100; ++i) {
        const bool want_focus = i % 2 == 1;
        const double stable_sign = rng.sign();
        Mat2 J;
        double t_max;
        if (want_focus) {
            const double re = stable_sign * rng.uniform(0.3, 2.0);
            const double omega = rng.sign() * rng.uniform(0.3, 2.0);
            J = conjugated(Mat2{re, omega, -omega, re}, rng);
            t_max = std::max(50.0, 20.0 / std::fabs(omega));
        } else {
            const double l1 = stable_sign * rng.uniform(0.3, 1.2);
            const double gap = rng.uniform(0.2, 1.3);
            const double l2 = l1 + stable_sign * gap;
            J = conjugated(Mat2{l1, 0.0, 0.0, l2}, rng);
            t_max = std::max(50.0, 30.0 / gap);
        }

        const Spectrum sj = eigen(J);
        const double min_re = std::min(std::fabs(sj.lambda1.real()),
                                       std::fabs(sj.lambda2.real()));

        PlanarSystem sys;
        sys.J = J;
        sys.kind = RemainderKind::HolderPolar;
        sys.alpha = rng.uniform(0.3, 0.8);
        sys.amplitude = rng.uniform(0.0, 0.1 * min_re);
        sys.wavenumber = rng.uniform_int(1, 4);

        IntegratorConfig cfg;
        cfg.t_max = t_max;
        const Classification spectral =
            spectral_classify(sj, RegularityClass::c1());
        const Classification empirical = empirical_classify(
            sys, std::log(0.01), rng.uniform(-M_PI, M_PI), cfg);

        if (empirical.shape != spectral.shape ||
            empirical.stability != spectral.stability) {
            agree.worst_margin -= 1.0;
            agree.worst_t = i;
        }
        ++agree.samples_checked;
    }
    agree.holds = agree.worst_margin >= 0.0;

    BoundReport saddles;
    saddles.name = "agreement/saddles_spectral";
    saddles.slack_used = 0.0;
    saddles.worst_margin = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Mat2 J = conjugated(
            Mat2{rng.uniform(0.2, 2.0), 0.0, 0.0, -rng.uniform(0.2, 2.0)}, rng);
        const Classification c =
            spectral_classify(eigen(J), RegularityClass::c1());
        if (c.shape != Shape::Saddle || c.stability != Stability::NotApplicable) {
            saddles.worst_margin -= 1.0;
            saddles.worst_t = i;
        }
        ++saddles.samples_checked;
    }
    saddles.holds = saddles.worst_margin >= 0.0;

    return {agree, saddles};
}

using SuiteFn = std::vector<BoundReport> (*)(std::uint64_t);

struct SuiteEntry {
    const char* name;
    SuiteFn fn;
};

constexpr SuiteEntry kSuites[] = {
    {"agreement", agreement_suite}, {"envelope", envelope_suite},
    {"identity", identity_suite},           {"holder", holder_suite},
    {"jordan", jordan_suite},       {"tail", tail_suite},
    {"winding", winding_suite},
};

}  // namespace

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const SuiteEntry& e : kSuites) {
            v.emplace_back(e.name);
        }
        return v;
    }();
    return names;
}

std::vector<BoundReport> run_verify_suite(const std::string& suite,
                                          const VerifyOptions& opt) {
    std::vector<SuiteEntry> selected;
    for (const SuiteEntry& e : kSuites) {
        if (suite == "all" || suite == e.name) {
            selected.push_back(e);
        }
    }
    if (selected.empty()) {
        throw ParameterOutOfRange("run_verify_suite: unknown suite \"" + suite +
                                  "\"");
    }

    std::vector<BoundReport> reports;
    if (opt.parallel && selected.size() > 1) {
        std::vector<std::future<std::vector<BoundReport>>> futures;
        futures.reserve(selected.size());
        for (const SuiteEntry& e : selected) {
            futures.push_back(std::async(std::launch::async, e.fn, opt.seed));
        }
        for (auto& f : futures) {
            auto part = f.get();
            reports.insert(reports.end(), part.begin(), part.end());
        }
    } else {
        for (const SuiteEntry& e : selected) {
            auto part = e.fn(opt.seed);
            reports.insert(reports.end(), part.begin(), part.end());
        }
    }

    // Output order is fixed by name, not completion order.
    std::sort(reports.begin(), reports.end(),
              [](const BoundReport& a, const BoundReport& b) {
                  return a.name < b.name;
              });
    return reports;
}

bool all_hold(const std::vector<BoundReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const BoundReport& r) { return r.holds; });
}

void write_reports_json(std::ostream& out,
                        const std::vector<BoundReport>& reports) {
    // Flat known schema, emitted directly so doubles carry 17 significant
    // digits and reports are reproducible byte for byte.
    const auto finite = [](double v) {
        // Infinite sentinels (e.g. a check with no qualifying samples) are
        // clamped: bare inf is not valid JSON.
        if (std::isfinite(v)) return v;
        return std::copysign(std::numeric_limits<double>::max(), v);
    };
    out << "[";
    char buf[96];
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const BoundReport& r = reports[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "  {\n    \"name\": \"" << r.name << "\",\n";
        out << "    \"holds\": " << (r.holds ? "true" : "false") << ",\n";
        std::snprintf(buf, sizeof(buf), "%.17g", finite(r.worst_margin));
        out << "    \"worst_margin\": " << buf << ",\n";
        std::snprintf(buf, sizeof(buf), "%.17g", finite(r.worst_t));
        out << "    \"worst_t\": " << buf << ",\n";
        out << "    \"samples_checked\": " << r.samples_checked << "\n  }";
    }
    out << "\n]\n";
}

}  // namespace planode
