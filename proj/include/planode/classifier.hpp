#pragma once

#include <optional>
#include <string>

#include "planode/integrator.hpp"
#include "planode/linalg2.hpp"

namespace planode {

enum class Shape { Node, Focus, Saddle, Undetermined };
enum class Stability { Repelling, Attracting, NotApplicable };
enum class Evidence { SpectralDistinct, SpectralRepeatedHolder, Empirical };

struct Classification {
    Shape shape = Shape::Undetermined;
    Stability stability = Stability::NotApplicable;
    Evidence evidence = Evidence::SpectralDistinct;
    std::optional<double> theta_limit;  // empirical nodes: final theta mod 2pi
    std::optional<double> turns;        // empirical foci: observed net turns
    std::optional<double> f_angle;      // direction of the field at the final
                                        // sample, mod 2pi (cross-check only)
};

/// Smoothness assumption on the vector field: C1, or C1 with alpha-Hölder
/// first derivatives.
class RegularityClass {
  public:
    static RegularityClass c1() { return RegularityClass(false, 0.0); }
    static RegularityClass c1_alpha(double alpha);  // requires alpha in (0,1)

    bool is_holder() const { return holder_; }
    double alpha() const { return alpha_; }

  private:
    RegularityClass(bool holder, double alpha) : holder_(holder), alpha_(alpha) {}
    bool holder_;
    double alpha_;
};

/// Eigenvalue-based classification.
///
/// Distinct real same-sign -> Node; opposite signs -> Saddle; complex with
/// nonzero real part -> Focus. Repeated eigenvalues give a Node only under
/// C1_alpha regularity; under plain C1 the shape is Undetermined (a focus
/// is possible). Any eigenvalue with zero real part -> Undetermined.
/// Stability is Attracting (Repelling) when all real parts are negative
/// (positive).
Classification spectral_classify(const Spectrum& s, const RegularityClass& reg);

struct EmpiricalOptions {
    double turns_threshold = 2.0;        // full turns that certify a focus
    double tail_threshold = 1e-3;        // radians of allowed tail variation
    double tail_window_fraction = 0.5;   // fraction of the span inspected
};

/// Node-vs-focus decision from a simulated trajectory.
///
/// Requires both eigenvalue real parts nonzero and of the same sign
/// (SpectrumMismatch otherwise); repelling systems are integrated with the
/// field negated. A run winding at least turns_threshold turns is a Focus;
/// otherwise a tail variation below tail_threshold over the last
/// tail_window_fraction of the span is a Node; otherwise Undetermined
/// (horizon too short).
Classification empirical_classify(const PlanarSystem& sys, double rho0,
                                  double theta0, const IntegratorConfig& cfg,
                                  const EmpiricalOptions& opt = {});

std::string to_string(Shape s);
std::string to_string(Stability s);

}  // namespace planode
