#pragma once

// Design calculations for a four-rod guide with a concentric differential
// pumping tube: can a thermally excited particle clear the tube bore?

#include <optional>
#include <string_view>
#include <vector>

#include "paultrap/model.hpp"

namespace paultrap {

class GuideGeometry {
 public:
  /// Every length in metres. Throws InvalidParameter unless all are positive and
  /// the tube fits between the rods: tube_diameter < 2 (rod_offset − rod_diameter/2).
  GuideGeometry(double rod_diameter = 2.4e-3, double rod_offset = 2.35e-3,
                double tube_diameter = 1.5e-3, double tube_length = 6e-3);

  double rod_diameter() const { return rod_diameter_; }
  double rod_offset() const { return rod_offset_; }
  double tube_diameter() const { return tube_diameter_; }
  double tube_length() const { return tube_length_; }
  double tube_radius() const { return 0.5 * tube_diameter_; }

  GuideGeometry with_tube_diameter(double d) const;

 private:
  double rod_diameter_;
  double rod_offset_;
  double tube_diameter_;
  double tube_length_;
};

enum class MarginPolicy { Literal, Conservative, Custom };
std::string_view to_string(MarginPolicy policy);

/// Fraction of the tube radius the thermal amplitude may occupy.
struct Margin {
  MarginPolicy policy{MarginPolicy::Literal};
  double factor{1.0};

  static Margin literal() { return {MarginPolicy::Literal, 1.0}; }
  static Margin conservative() { return {MarginPolicy::Conservative, 0.5}; }
  static Margin custom(double factor);
};

struct TransitVerdict {
  double q{0.0};              // largest |q_i|
  double omega_secular{0.0};  // radial, rad/s
  double r0{0.0};             // m
  double clearance_ratio{0.0};
  Margin margin;
  bool passes{false};
};

/// Throws DomainError("no confined transit") if the drive is not stable.
TransitVerdict transit_feasibility(const Particle& p, const Environment& env,
                                   const TrapDrive& drive, const GuideGeometry& geom,
                                   Margin margin = Margin::literal());

struct SweepSpec {
  Topology topology{Topology::Guide2D};
  double length_scale{2.35e-3};
  double dc_voltage{0.0};
  std::vector<double> rf_amplitudes;  // V
  std::vector<double> drive_omegas;   // rad/s
  Margin margin;
};

struct WindowPoint {
  double rf_amplitude{0.0};
  double drive_omega{0.0};
  double q{0.0};
  double omega_secular{0.0};  // NaN when undefined
  double r0{0.0};             // NaN when undefined
  double clearance_ratio{0.0};
  bool stable{false};
  bool passes{false};
  bool feasible{false};
  double score{0.0};  // min(0.908 − |q|, 1 − clearance_ratio); meaningful only when feasible
};

struct OperatingWindow {
  std::vector<WindowPoint> grid;  // ordered V-major, then Ω
  std::vector<std::size_t> feasible;
  std::optional<std::size_t> optimum;

  bool empty() const { return feasible.empty(); }
};

OperatingWindow operating_window(const Particle& p, const Environment& env,
                                 const GuideGeometry& geom, const SweepSpec& spec);

}  // namespace paultrap
