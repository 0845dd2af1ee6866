#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "raguav/error.hpp"
#include "raguav/units.hpp"

namespace raguav::oracle {

enum class OracleErrc {
  unknown_formula,
  missing_param,
  extra_param,
  unknown_unit,
  unit_mismatch,
  bad_value,
  domain,       // precondition on an input violated
  singularity,  // formula undefined at the input
  infeasible,   // no finite answer exists
};

const char* to_string(OracleErrc code) noexcept;

class OracleError : public Error {
 public:
  OracleError(OracleErrc code, const std::string& what, std::string param = {})
      : Error(ErrorKind::oracle, what), code_(code), param_(std::move(param)) {}
  OracleErrc code() const noexcept { return code_; }
  const std::string& param() const noexcept { return param_; }

 private:
  OracleErrc code_;
  std::string param_;
};

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Rotary-wing propulsion. Speeds in m/s, powers in the unit of the constant.

/// P0 * (1 + 3 V^2 / (omega^2 R^2)).
double blade_power(double p0, double speed, double omega, double rotor_radius);

/// Pi * sqrt( sqrt(1 + V^4 / (4 v0^4)) - V^2 / (2 v0^2) ). v0 is the mean
/// rotor induced velocity in hover.
double induced_power(double induced_hover_power, double v0, double speed);

/// 0.5 * d0 * rho * s * A * V^3.
double parasite_power(double drag_ratio, double rho, double solidity, double rotor_area,
                      double speed);

/// W^(3/2) / sqrt(2 rho A).
double hover_power(double thrust, double rho, double rotor_area);

double total_forward_power(double blade, double induced, double parasite);

// Air-to-ground channel. Angles are degrees at every interface.

/// atan(z / horizontal distance) in degrees, 90 when directly overhead.
double elevation_angle(Point2 user, Point3 uav);

/// Sigmoid LoS model 1 / (1 + a exp(-b (theta - a))).
double los_probability(double a, double b, double theta_deg);

/// 20 log10(4 pi f d / c) + eta_los.
double path_loss_los(double frequency_hz, double distance_m, double eta_los_db);

double avg_path_loss(double p_los, double pl_los_db, double pl_nlos_db);

/// B log2(1 + snr).
double shannon_rate(double bandwidth_hz, double snr);

/// rate / log2(1 + snr); inverse of shannon_rate in the bandwidth.
double required_bandwidth(double rate_bps, double snr);

/// S / (B log2(1 + P g / N0)).
double transmission_delay(double bits, double bandwidth_hz, double tx_power_w, double gain,
                          double noise_w);

// Registry

struct ParamSpec {
  std::string name;
  units::Dimension dimension;
};

/// Canonical-unit values keyed by parameter name.
using CanonicalParams = std::map<std::string, double>;
using Params = std::map<std::string, units::Quantity>;

struct FormulaBinding {
  std::string formula_id;
  std::vector<ParamSpec> required_params;
  std::function<double(const CanonicalParams&)> compute;
  std::string reference;
};

class FormulaRegistry {
 public:
  void add(FormulaBinding binding);  // throws std::invalid_argument on duplicates
  const FormulaBinding* find(std::string_view formula_id) const;
  const FormulaBinding& at(std::string_view formula_id) const;  // OracleError if unknown
  std::vector<std::string> ids() const;

  /// Converts every parameter through the unit table, checks that the set
  /// of names matches exactly, then delegates to the bound compute.
  double evaluate(std::string_view formula_id, const Params& params) const;

 private:
  std::map<std::string, FormulaBinding, std::less<>> bindings_;
};

/// The built-in bindings for every oracle formula.
const FormulaRegistry& default_registry();

inline double evaluate(std::string_view formula_id, const Params& params) {
  return default_registry().evaluate(formula_id, params);
}

}  // namespace raguav::oracle
