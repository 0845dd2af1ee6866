#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace raguav::units {

enum class Dimension {
  dimensionless,
  speed,          // m/s
  angular_speed,  // rad/s
  length,         // m
  frequency,      // Hz
  angle,          // degrees
  decibel,        // dB
  power,          // W
  force,          // N
  density,        // kg/m^3
  area,           // m^2
  data,           // bit
  data_rate,      // bit/s
  time,           // s
};

const char* to_string(Dimension d) noexcept;
const char* canonical_unit(Dimension d) noexcept;

struct Quantity {
  double value = 0.0;
  std::string unit;  // "" means already in the canonical unit
};

struct UnitInfo {
  Dimension dimension;
  double multiplier;  // canonical = value * multiplier / divisor
  double divisor;
};

/// Entry from the explicit conversion table, or nullopt for unknown units.
std::optional<UnitInfo> lookup(std::string_view unit) noexcept;

/// Converts into the canonical unit of `expected`. Throws OracleError
/// (unknown_unit or unit_mismatch) naming `param`.
double to_canonical(const Quantity& q, Dimension expected, std::string_view param);

/// Splits "110km/h" or "0.4 m" into value and unit. Throws OracleError
/// (bad_value) on a missing or malformed number.
Quantity parse_quantity(std::string_view text, std::string_view param);

}  // namespace raguav::units
