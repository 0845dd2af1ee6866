#include "raguav/units.hpp"

#include <array>
#include <charconv>
#include <numbers>

#include "raguav/oracle.hpp"

namespace raguav::units {

namespace {

struct TableRow {
  std::string_view unit;
  UnitInfo info;
};

constexpr double kPi = std::numbers::pi;

// The only place unit conversions happen. canonical = value * multiplier / divisor.
constexpr std::array kTable{
    TableRow{"1", {Dimension::dimensionless, 1.0, 1.0}},
    TableRow{"m/s", {Dimension::speed, 1.0, 1.0}},
    TableRow{"km/h", {Dimension::speed, 1.0, 3.6}},
    TableRow{"rad/s", {Dimension::angular_speed, 1.0, 1.0}},
    TableRow{"rpm", {Dimension::angular_speed, 2.0 * kPi, 60.0}},
    TableRow{"m", {Dimension::length, 1.0, 1.0}},
    TableRow{"km", {Dimension::length, 1000.0, 1.0}},
    TableRow{"cm", {Dimension::length, 1.0, 100.0}},
    TableRow{"Hz", {Dimension::frequency, 1.0, 1.0}},
    TableRow{"kHz", {Dimension::frequency, 1e3, 1.0}},
    TableRow{"MHz", {Dimension::frequency, 1e6, 1.0}},
    TableRow{"GHz", {Dimension::frequency, 1e9, 1.0}},
    TableRow{"deg", {Dimension::angle, 1.0, 1.0}},
    TableRow{"degree", {Dimension::angle, 1.0, 1.0}},
    TableRow{"degrees", {Dimension::angle, 1.0, 1.0}},
    TableRow{"\xC2\xB0", {Dimension::angle, 1.0, 1.0}},  // U+00B0
    TableRow{"rad", {Dimension::angle, 180.0, kPi}},
    TableRow{"dB", {Dimension::decibel, 1.0, 1.0}},
    TableRow{"W", {Dimension::power, 1.0, 1.0}},
    TableRow{"mW", {Dimension::power, 1.0, 1000.0}},
    TableRow{"kW", {Dimension::power, 1000.0, 1.0}},
    TableRow{"N", {Dimension::force, 1.0, 1.0}},
    TableRow{"kg/m^3", {Dimension::density, 1.0, 1.0}},
    TableRow{"kg/m\xC2\xB3", {Dimension::density, 1.0, 1.0}},
    TableRow{"m^2", {Dimension::area, 1.0, 1.0}},
    TableRow{"m\xC2\xB2", {Dimension::area, 1.0, 1.0}},
    TableRow{"bit", {Dimension::data, 1.0, 1.0}},
    TableRow{"bits", {Dimension::data, 1.0, 1.0}},
    TableRow{"kbit", {Dimension::data, 1e3, 1.0}},
    TableRow{"Mbit", {Dimension::data, 1e6, 1.0}},
    TableRow{"byte", {Dimension::data, 8.0, 1.0}},
    TableRow{"bit/s", {Dimension::data_rate, 1.0, 1.0}},
    TableRow{"bps", {Dimension::data_rate, 1.0, 1.0}},
    TableRow{"kbps", {Dimension::data_rate, 1e3, 1.0}},
    TableRow{"Mbps", {Dimension::data_rate, 1e6, 1.0}},
    TableRow{"s", {Dimension::time, 1.0, 1.0}},
    TableRow{"ms", {Dimension::time, 1.0, 1000.0}},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

const char* to_string(Dimension d) noexcept {
  switch (d) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::speed: return "speed";
    case Dimension::angular_speed: return "angular speed";
    case Dimension::length: return "length";
    case Dimension::frequency: return "frequency";
    case Dimension::angle: return "angle";
    case Dimension::decibel: return "decibel";
    case Dimension::power: return "power";
    case Dimension::force: return "force";
    case Dimension::density: return "density";
    case Dimension::area: return "area";
    case Dimension::data: return "data";
    case Dimension::data_rate: return "data rate";
    case Dimension::time: return "time";
  }
  return "unknown";
}

const char* canonical_unit(Dimension d) noexcept {
  switch (d) {
    case Dimension::dimensionless: return "";
    case Dimension::speed: return "m/s";
    case Dimension::angular_speed: return "rad/s";
    case Dimension::length: return "m";
    case Dimension::frequency: return "Hz";
    case Dimension::angle: return "deg";
    case Dimension::decibel: return "dB";
    case Dimension::power: return "W";
    case Dimension::force: return "N";
    case Dimension::density: return "kg/m^3";
    case Dimension::area: return "m^2";
    case Dimension::data: return "bit";
    case Dimension::data_rate: return "bit/s";
    case Dimension::time: return "s";
  }
  return "";
}

std::optional<UnitInfo> lookup(std::string_view unit) noexcept {
  for (const auto& row : kTable) {
    if (row.unit == unit) return row.info;
  }
  return std::nullopt;
}

double to_canonical(const Quantity& q, Dimension expected, std::string_view param) {
  using oracle::OracleErrc;
  using oracle::OracleError;
  if (q.unit.empty()) return q.value;
  auto info = lookup(q.unit);
  if (!info)
    throw OracleError(OracleErrc::unknown_unit,
                      "unknown unit '" + q.unit + "' for parameter " + std::string(param),
                      std::string(param));
  if (info->dimension != expected)
    throw OracleError(OracleErrc::unit_mismatch,
                      "parameter " + std::string(param) + " expects a " + to_string(expected) +
                          " unit, got '" + q.unit + "'",
                      std::string(param));
  if (info->multiplier == 1.0 && info->divisor == 1.0) return q.value;
  return q.value * info->multiplier / info->divisor;
}

Quantity parse_quantity(std::string_view text, std::string_view param) {
  using oracle::OracleErrc;
  using oracle::OracleError;
  text = trim(text);
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{})
    throw OracleError(OracleErrc::bad_value,
                      "parameter " + std::string(param) + " has no numeric value in '" +
                          std::string(text) + "'",
                      std::string(param));
  return {value, std::string(trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr))))};
}

}  // namespace raguav::units
