#pragma once

// Quantity parsing at the input boundary: "75 nm", "1.2kHz", "10 mJ/m^2".
// Everything past this point is SI.

#include <string>
#include <string_view>
#include <vector>

#include "paultrap/error.hpp"

namespace paultrap {

enum class Dimension {
  Dimensionless,
  Length,
  Velocity,
  Density,
  Charge,
  Voltage,
  Frequency,         // cycles per second; result in Hz
  AngularFrequency,  // rad/s
  Rate,              // 1/s
  Temperature,
  Conductivity,
  SurfaceEnergy,
};

std::string_view to_string(Dimension d);

class UnitError : public Error {
 public:
  using Error::Error;
};

/// Parses "<number>[ ]<unit>". A bare number is taken as `bare_scale` times the
/// SI unit (so a key named `diameter_nm` passes 1e-9). Throws UnitError.
double parse_quantity(std::string_view text, Dimension dim, double bare_scale = 1.0);

/// "v", "v1,v2,...", or "start:stop:count[:log]", each value a quantity.
std::vector<double> parse_range(std::string_view text, Dimension dim, double bare_scale = 1.0);

}  // namespace paultrap
