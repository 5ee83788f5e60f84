#include "planode/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "planode/classifier.hpp"
#include "planode/portrait.hpp"
#include "planode/verify.hpp"

namespace planode {

namespace {

struct SystemArgs {
    std::string builtin = "linear";
    std::string config_path;
    std::string matrix;
    double epsilon = 0.0;
    double lambda = -1.0;
    double alpha = 0.5;
    double amplitude = 0.1;
    int wavenumber = 3;
    bool jordan = false;
};

void add_system_flags(CLI::App* cmd, SystemArgs& args) {
    cmd->add_option("--builtin", args.builtin,
                    "Builtin system: linear | counterexample | holder_family")
        ->check(CLI::IsMember({"linear", "counterexample", "holder_family"}));
    cmd->add_option("--config", args.config_path,
                    "System configuration file (JSON)");
    cmd->add_option("--matrix", args.matrix,
                    "Linear part a11,a12,a21,a22 (builtin linear)");
    cmd->add_option("--epsilon", args.epsilon,
                    "Counterexample coupling, in [0,2)");
    cmd->add_option("--lambda", args.lambda, "holder_family eigenvalue (< 0)");
    cmd->add_option("--alpha", args.alpha, "holder_family exponent, in (0,1)");
    cmd->add_option("--amplitude", args.amplitude,
                    "holder_family remainder amplitude (>= 0)");
    cmd->add_option("--wavenumber", args.wavenumber,
                    "holder_family angular wavenumber");
    cmd->add_flag("--jordan", args.jordan,
                  "holder_family: use the scaled Jordan linear part");
}

Mat2 parse_matrix(const std::string& text) {
    Mat2 J;
    char tail = 0;
    const int n = std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf%c", &J.a11,
                              &J.a12, &J.a21, &J.a22, &tail);
    if (n != 4) {
        throw ParameterOutOfRange(
            "--matrix expects exactly four comma-separated entries");
    }
    return J;
}

PlanarSystem build_system(const SystemArgs& args) {
    if (!args.config_path.empty()) {
        return load_system_file(args.config_path);
    }
    if (args.builtin == "counterexample") {
        return counterexample(args.epsilon);
    }
    if (args.builtin == "holder_family") {
        return holder_family(args.lambda, args.alpha, args.amplitude,
                             args.wavenumber, args.jordan);
    }
    if (args.matrix.empty()) {
        throw ParameterOutOfRange("builtin linear requires --matrix");
    }
    return linear_system(parse_matrix(args.matrix));
}

struct IntegrationArgs {
    double r0 = 0.1;
    double theta0 = 0.0;
    IntegratorConfig cfg;
};

void add_integration_flags(CLI::App* cmd, IntegrationArgs& args) {
    cmd->add_option("--r0", args.r0, "Initial radius, in (0, 0.5)");
    cmd->add_option("--theta0", args.theta0, "Initial angle (radians)");
    cmd->add_option("--t-max", args.cfg.t_max, "Time horizon");
    cmd->add_option("--rel-tol", args.cfg.rel_tol, "Relative tolerance");
    cmd->add_option("--abs-tol", args.cfg.abs_tol, "Absolute tolerance");
    cmd->add_option("--rho-floor", args.cfg.rho_floor,
                    "Stop when ln r falls below this");
    cmd->add_option("--stride", args.cfg.sample_stride,
                    "Output spacing in t (0 = automatic)");
    cmd->add_option("--samples-per-decade", args.cfg.samples_per_decade,
                    "Log-spaced output density for long horizons");
    cmd->add_option("--max-steps", args.cfg.max_steps, "Step budget");
}

std::string spectral_reason(const Spectrum& s, const RegularityClass& reg,
                            const Classification& c) {
    switch (s.structure) {
        case SpectrumStructure::DistinctReal:
            if (c.shape == Shape::Node) return "real with the same sign";
            if (c.shape == Shape::Saddle) return "real with opposite signs";
            return "eigenvalue with zero real part";
        case SpectrumStructure::ComplexPair:
            return c.shape == Shape::Focus ? "imaginary with nonzero real part"
                                           : "purely imaginary pair";
        case SpectrumStructure::RepeatedDiagonalizable:
        case SpectrumStructure::RepeatedDefective:
            if (c.shape == Shape::Node) {
                return "repeated eigenvalues, Holder-continuous first "
                       "derivatives";
            }
            if (!reg.is_holder() && c.stability != Stability::NotApplicable) {
                return "repeated eigenvalues, C1 regularity cannot decide";
            }
            return "repeated eigenvalue with zero real part";
    }
    return "unclassified spectrum";
}

std::string shape_with_stability(const Classification& c) {
    std::string text = to_string(c.shape);
    if (c.stability != Stability::NotApplicable) {
        text += " (" + to_string(c.stability) + ")";
    }
    return text;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int cmd_classify(const SystemArgs& sys_args, const IntegrationArgs& int_args,
                 const std::string& regularity, double regularity_alpha,
                 bool empirical, const EmpiricalOptions& emp_opt,
                 std::ostream& out) {
    const PlanarSystem sys = build_system(sys_args);
    const RegularityClass reg =
        regularity == "c1alpha" ? RegularityClass::c1_alpha(regularity_alpha)
                                : RegularityClass::c1();
    const Spectrum s = eigen(sys.J);
    const Classification spectral = spectral_classify(s, reg);
    out << shape_with_stability(spectral)
        << ", spectral: " << spectral_reason(s, reg, spectral) << "\n";

    if (empirical) {
        const Classification emp = empirical_classify(
            sys, std::log(int_args.r0), int_args.theta0, int_args.cfg, emp_opt);
        out << "empirical: " << shape_with_stability(emp);
        if (emp.turns) {
            out << ", turns=" << format_value(*emp.turns);
        }
        if (emp.theta_limit) {
            out << ", theta_limit=" << format_value(*emp.theta_limit);
        }
        if (emp.shape == Shape::Undetermined) {
            out << " (horizon too short)";
        }
        out << "\n";
    }
    return 0;
}

int cmd_simulate(const SystemArgs& sys_args, const IntegrationArgs& int_args,
                 const std::string& out_path, std::ostream& out) {
    const PlanarSystem sys = build_system(sys_args);
    const Trajectory traj = integrate(sys, std::log(int_args.r0),
                                      int_args.theta0, int_args.cfg);
    std::ofstream file(out_path);
    if (!file) {
        throw DomainError("simulate: cannot open " + out_path);
    }
    write_trajectory_csv(file, traj);
    const char* event = traj.terminal_event == TerminalEvent::TimeLimit
                            ? "time limit"
                            : traj.terminal_event == TerminalEvent::RadiusFloor
                                  ? "radius floor"
                                  : "step failure";
    out << "wrote " << traj.samples.size() << " samples to " << out_path
        << " (" << event << ")\n";
    return 0;
}

int cmd_portrait(const SystemArgs& sys_args, PortraitOptions opt,
                 bool radius_given, const std::string& out_path,
                 std::ostream& out) {
    const PlanarSystem sys = build_system(sys_args);
    if (sys.kind == RemainderKind::LogRotation && !radius_given) {
        // The log-rotation remainder is singular on the unit circle; seed
        // inside the trust region instead.
        opt.seed_radius = 0.4;
    }
    std::ofstream file(out_path);
    if (!file) {
        throw DomainError("portrait: cannot open " + out_path);
    }
    file << render_portrait_svg(sys, opt);
    out << "wrote portrait to " << out_path << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed,
               const std::string& out_path, std::ostream& out) {
    VerifyOptions opt;
    opt.seed = seed;
    const std::vector<BoundReport> reports = run_verify_suite(suite, opt);

    if (out_path.empty()) {
        write_reports_json(out, reports);
    } else {
        for (const BoundReport& r : reports) {
            char line[192];
            std::snprintf(line, sizeof(line),
                          "[%s] %-42s margin=% .3e at t=%-10.6g n=%ld\n",
                          r.holds ? " ok " : "FAIL", r.name.c_str(),
                          r.worst_margin, r.worst_t, r.samples_checked);
            out << line;
        }
        std::ofstream file(out_path);
        if (!file) {
            throw DomainError("verify: cannot open " + out_path);
        }
        write_reports_json(file, reports);
        const long failed = static_cast<long>(
            std::count_if(reports.begin(), reports.end(),
                          [](const BoundReport& r) { return !r.holds; }));
        out << reports.size() << " checks, " << failed << " failed; report in "
            << out_path << "\n";
    }
    return all_hold(reports) ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"planode: planar ODE equilibrium analysis"};
    app.require_subcommand(1);

    SystemArgs sys_args;
    IntegrationArgs int_args;

    // classify
    auto* classify = app.add_subcommand(
        "classify", "Classify the equilibrium at the origin");
    add_system_flags(classify, sys_args);
    add_integration_flags(classify, int_args);
    std::string regularity = "c1";
    double regularity_alpha = 0.5;
    bool empirical = false;
    EmpiricalOptions emp_opt;
    classify->add_option("--regularity", regularity, "Assumed smoothness")
        ->check(CLI::IsMember({"c1", "c1alpha"}));
    classify->add_option("--regularity-alpha", regularity_alpha,
                         "Holder exponent for --regularity c1alpha");
    classify->add_flag("--empirical", empirical,
                       "Also classify from a simulated trajectory");
    classify->add_option("--turns-threshold", emp_opt.turns_threshold,
                         "Turns that certify a focus");
    classify->add_option("--tail-threshold", emp_opt.tail_threshold,
                         "Tail variation (radians) that certifies a node");
    classify->add_option("--tail-window", emp_opt.tail_window_fraction,
                         "Fraction of the span used for the tail check");

    // simulate
    auto* simulate =
        app.add_subcommand("simulate", "Integrate and export a trajectory CSV");
    SystemArgs sim_sys;
    IntegrationArgs sim_int;
    std::string sim_out;
    add_system_flags(simulate, sim_sys);
    add_integration_flags(simulate, sim_int);
    simulate->add_option("--out", sim_out, "Output CSV path")->required();

    // portrait
    auto* portrait =
        app.add_subcommand("portrait", "Render an SVG phase portrait");
    SystemArgs por_sys;
    PortraitOptions por_opt;
    std::string por_out;
    add_system_flags(portrait, por_sys);
    portrait->add_option("--out", por_out, "Output SVG path")->required();
    portrait->add_option("--seeds", por_opt.seed_count, "Streamline seeds");
    auto* radius_opt =
        portrait->add_option("--radius", por_opt.seed_radius, "Seed ring radius");
    portrait->add_option("--t-span", por_opt.time_span,
                         "Integration horizon per direction");

    // verify
    auto* verify =
        app.add_subcommand("verify", "Run the bound-certification suites");
    std::string suite = "all";
    std::uint64_t seed = 0;
    std::string ver_out;
    std::vector<std::string> suite_choices = verify_suite_names();
    suite_choices.push_back("all");
    verify->add_option("--suite", suite, "Suite name or \"all\"")
        ->check(CLI::IsMember(suite_choices));
    verify->add_option("--seed", seed, "Seed for the randomized suites");
    verify->add_option("--out", ver_out,
                       "JSON report path (default: JSON to stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (classify->parsed()) {
            return cmd_classify(sys_args, int_args, regularity,
                                regularity_alpha, empirical, emp_opt, out);
        }
        if (simulate->parsed()) {
            return cmd_simulate(sim_sys, sim_int, sim_out, out);
        }
        if (portrait->parsed()) {
            return cmd_portrait(por_sys, por_opt, radius_opt->count() > 0,
                                por_out, out);
        }
        if (verify->parsed()) {
            return cmd_verify(suite, seed, ver_out, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand given\n";
    return 2;
}

}  // namespace planode
