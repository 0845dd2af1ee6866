#include "raguav/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace raguav::oracle {

namespace {

using units::Dimension;

void require(bool ok, OracleErrc code, const std::string& what, std::string param = {}) {
  if (!ok) throw OracleError(code, what, std::move(param));
}

void require_finite(std::initializer_list<double> values, const char* formula) {
  for (double v : values)
    require(std::isfinite(v), OracleErrc::domain, std::string(formula) + ": non-finite input");
}

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

}  // namespace

const char* to_string(OracleErrc code) noexcept {
  switch (code) {
    case OracleErrc::unknown_formula: return "unknown_formula";
    case OracleErrc::missing_param: return "missing_param";
    case OracleErrc::extra_param: return "extra_param";
    case OracleErrc::unknown_unit: return "unknown_unit";
    case OracleErrc::unit_mismatch: return "unit_mismatch";
    case OracleErrc::bad_value: return "bad_value";
    case OracleErrc::domain: return "domain";
    case OracleErrc::singularity: return "singularity";
    case OracleErrc::infeasible: return "infeasible";
  }
  return "unknown";
}

double blade_power(double p0, double speed, double omega, double rotor_radius) {
  require_finite({p0, speed, omega, rotor_radius}, "blade_power");
  require(omega * rotor_radius != 0.0, OracleErrc::singularity,
          "blade_power: blade tip speed omega*R is zero");
  require(omega > 0.0, OracleErrc::domain, "blade_power: omega must be > 0", "omega");
  require(rotor_radius > 0.0, OracleErrc::domain, "blade_power: R must be > 0", "R");
  require(speed >= 0.0, OracleErrc::domain, "blade_power: V must be >= 0", "V");
  const double tip = omega * rotor_radius;
  return p0 * (1.0 + 3.0 * speed * speed / (tip * tip));
}

double induced_power(double induced_hover_power, double v0, double speed) {
  require_finite({induced_hover_power, v0, speed}, "induced_power");
  require(v0 > 0.0, OracleErrc::domain, "induced_power: v0 must be > 0", "v0");
  require(speed >= 0.0, OracleErrc::domain, "induced_power: V must be >= 0", "V");
  // sqrt(1 + x^2) - x rewritten without cancellation, x = V^2 / (2 v0^2).
  const double x = speed * speed / (2.0 * v0 * v0);
  const double bracket = 1.0 / (std::sqrt(1.0 + x * x) + x);
  return induced_hover_power * std::sqrt(bracket);
}

double parasite_power(double drag_ratio, double rho, double solidity, double rotor_area,
                      double speed) {
  require_finite({drag_ratio, rho, solidity, rotor_area, speed}, "parasite_power");
  require(drag_ratio > 0.0, OracleErrc::domain, "parasite_power: d0 must be > 0", "d0");
  require(rho > 0.0, OracleErrc::domain, "parasite_power: rho must be > 0", "rho");
  require(solidity > 0.0, OracleErrc::domain, "parasite_power: s must be > 0", "s");
  require(rotor_area > 0.0, OracleErrc::domain, "parasite_power: A must be > 0", "A");
  require(speed >= 0.0, OracleErrc::domain, "parasite_power: V must be >= 0", "V");
  return 0.5 * drag_ratio * rho * solidity * rotor_area * speed * speed * speed;
}

double hover_power(double thrust, double rho, double rotor_area) {
  require_finite({thrust, rho, rotor_area}, "hover_power");
  require(thrust >= 0.0, OracleErrc::domain, "hover_power: W must be >= 0", "W");
  require(rho > 0.0, OracleErrc::domain, "hover_power: rho must be > 0", "rho");
  require(rotor_area > 0.0, OracleErrc::domain, "hover_power: A must be > 0", "A");
  return thrust * std::sqrt(thrust) / std::sqrt(2.0 * rho * rotor_area);
}

double total_forward_power(double blade, double induced, double parasite) {
  require_finite({blade, induced, parasite}, "total_forward_power");
  require(blade >= 0.0 && induced >= 0.0 && parasite >= 0.0, OracleErrc::domain,
          "total_forward_power: components must be >= 0");
  return blade + induced + parasite;
}

double elevation_angle(Point2 user, Point3 uav) {
  require_finite({user.x, user.y, uav.x, uav.y, uav.z}, "elevation_angle");
  require(uav.z >= 0.0, OracleErrc::domain, "elevation_angle: UAV altitude must be >= 0",
          "uav_z");
  const double horizontal = std::hypot(uav.x - user.x, uav.y - user.y);
  if (horizontal == 0.0) {
    require(uav.z > 0.0, OracleErrc::singularity,
            "elevation_angle: user and UAV coincide, angle undefined");
    return 90.0;
  }
  return std::atan(uav.z / horizontal) * kRadToDeg;
}

double los_probability(double a, double b, double theta_deg) {
  require_finite({a, b}, "los_probability");
  require(b > 0.0, OracleErrc::domain, "los_probability: b must be > 0", "b");
  require(!std::isnan(theta_deg), OracleErrc::domain, "los_probability: theta is NaN", "theta");
  return 1.0 / (1.0 + a * std::exp(-b * (theta_deg - a)));
}

double path_loss_los(double frequency_hz, double distance_m, double eta_los_db) {
  require_finite({frequency_hz, distance_m, eta_los_db}, "path_loss_los");
  require(frequency_hz > 0.0, OracleErrc::domain, "path_loss_los: f must be > 0", "f");
  require(distance_m > 0.0, OracleErrc::domain, "path_loss_los: d must be > 0", "d");
  return 20.0 * std::log10(4.0 * std::numbers::pi * frequency_hz * distance_m / kSpeedOfLight) +
         eta_los_db;
}

double avg_path_loss(double p_los, double pl_los_db, double pl_nlos_db) {
  require_finite({p_los, pl_los_db, pl_nlos_db}, "avg_path_loss");
  require(p_los >= 0.0 && p_los <= 1.0, OracleErrc::domain,
          "avg_path_loss: p_los must be in [0, 1]", "p_los");
  return p_los * pl_los_db + (1.0 - p_los) * pl_nlos_db;
}

double shannon_rate(double bandwidth_hz, double snr) {
  require_finite({bandwidth_hz, snr}, "shannon_rate");
  require(bandwidth_hz > 0.0, OracleErrc::domain, "shannon_rate: B must be > 0", "B");
  require(snr >= 0.0, OracleErrc::domain, "shannon_rate: snr must be >= 0", "snr");
  return bandwidth_hz * std::log2(1.0 + snr);
}

double required_bandwidth(double rate_bps, double snr) {
  require_finite({rate_bps, snr}, "required_bandwidth");
  require(rate_bps > 0.0, OracleErrc::domain, "required_bandwidth: rate must be > 0", "rate");
  require(snr >= 0.0, OracleErrc::domain, "required_bandwidth: snr must be >= 0", "snr");
  const double spectral_efficiency = std::log2(1.0 + snr);
  require(spectral_efficiency > 0.0, OracleErrc::infeasible,
          "required_bandwidth: zero snr cannot carry any rate", "snr");
  return rate_bps / spectral_efficiency;
}

double transmission_delay(double bits, double bandwidth_hz, double tx_power_w, double gain,
                          double noise_w) {
  require_finite({bits, bandwidth_hz, tx_power_w, gain, noise_w}, "transmission_delay");
  require(bits > 0.0, OracleErrc::domain, "transmission_delay: S must be > 0", "S");
  require(bandwidth_hz > 0.0, OracleErrc::domain, "transmission_delay: B must be > 0", "B");
  require(tx_power_w > 0.0, OracleErrc::domain, "transmission_delay: P must be > 0", "P");
  require(gain > 0.0, OracleErrc::domain, "transmission_delay: g must be > 0", "g");
  require(noise_w > 0.0, OracleErrc::domain, "transmission_delay: N0 must be > 0", "N0");
  const double rate = bandwidth_hz * std::log2(1.0 + tx_power_w * gain / noise_w);
  require(rate > 0.0 && std::isfinite(rate), OracleErrc::infeasible,
          "transmission_delay: achievable rate is zero");
  return bits / rate;
}

// ---------------------------------------------------------------------------

void FormulaRegistry::add(FormulaBinding binding) {
  std::map<std::string, int> names;
  for (const auto& p : binding.required_params) {
    if (++names[p.name] > 1)
      throw std::invalid_argument("duplicate parameter " + p.name + " in " + binding.formula_id);
  }
  auto id = binding.formula_id;
  if (!bindings_.emplace(id, std::move(binding)).second)
    throw std::invalid_argument("formula " + id + " registered twice");
}

const FormulaBinding* FormulaRegistry::find(std::string_view formula_id) const {
  auto it = bindings_.find(formula_id);
  return it == bindings_.end() ? nullptr : &it->second;
}

const FormulaBinding& FormulaRegistry::at(std::string_view formula_id) const {
  if (const auto* b = find(formula_id)) return *b;
  throw OracleError(OracleErrc::unknown_formula,
                    "unknown formula_id '" + std::string(formula_id) + "'");
}

std::vector<std::string> FormulaRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : bindings_) out.push_back(id);
  return out;
}

double FormulaRegistry::evaluate(std::string_view formula_id, const Params& params) const {
  const auto& binding = at(formula_id);
  CanonicalParams canonical;
  for (const auto& spec : binding.required_params) {
    auto it = params.find(spec.name);
    if (it == params.end())
      throw OracleError(OracleErrc::missing_param,
                        binding.formula_id + ": missing parameter " + spec.name, spec.name);
    canonical[spec.name] = units::to_canonical(it->second, spec.dimension, spec.name);
  }
  for (const auto& [name, _] : params) {
    if (!canonical.contains(name))
      throw OracleError(OracleErrc::extra_param,
                        binding.formula_id + ": unexpected parameter " + name, name);
  }
  return binding.compute(canonical);
}

namespace {

constexpr const char* kRotaryWingRef =
    "rotary-wing UAV propulsion power model (Zeng, Xu, Zhang, IEEE Trans. Wireless Commun., 2019)";
constexpr const char* kAtgRef =
    "air-to-ground LoS probability model (Al-Hourani, Kandeepan, Lardner, IEEE WCL, 2014)";

FormulaRegistry build_default_registry() {
  FormulaRegistry reg;
  reg.add({"blade_power",
           {{"P0", Dimension::power},
            {"V", Dimension::speed},
            {"omega", Dimension::angular_speed},
            {"R", Dimension::length}},
           [](const CanonicalParams& p) {
             return blade_power(p.at("P0"), p.at("V"), p.at("omega"), p.at("R"));
           },
           kRotaryWingRef});
  reg.add({"elevation_angle",
           {{"user_x", Dimension::length},
            {"user_y", Dimension::length},
            {"uav_x", Dimension::length},
            {"uav_y", Dimension::length},
            {"uav_z", Dimension::length}},
           [](const CanonicalParams& p) {
             return elevation_angle({p.at("user_x"), p.at("user_y")},
                                    {p.at("uav_x"), p.at("uav_y"), p.at("uav_z")});
           },
           "plane geometry, atan(height / horizontal distance)"});
  reg.add({"los_probability",
           {{"a", Dimension::dimensionless},
            {"b", Dimension::dimensionless},
            {"theta", Dimension::angle}},
           [](const CanonicalParams& p) {
             return los_probability(p.at("a"), p.at("b"), p.at("theta"));
           },
           kAtgRef});
  reg.add({"shannon_rate",
           {{"B", Dimension::frequency}, {"snr", Dimension::dimensionless}},
           [](const CanonicalParams& p) { return shannon_rate(p.at("B"), p.at("snr")); },
           "Shannon channel capacity"});
  reg.add({"required_bandwidth",
           {{"rate", Dimension::data_rate}, {"snr", Dimension::dimensionless}},
           [](const CanonicalParams& p) { return required_bandwidth(p.at("rate"), p.at("snr")); },
           "Shannon channel capacity solved for bandwidth"});
  reg.add({"path_loss_los",
           {{"f", Dimension::frequency}, {"d", Dimension::length}, {"eta_los", Dimension::decibel}},
           [](const CanonicalParams& p) {
             return path_loss_los(p.at("f"), p.at("d"), p.at("eta_los"));
           },
           "free-space path loss plus LoS excess loss"});
  reg.add({"avg_path_loss",
           {{"p_los", Dimension::dimensionless},
            {"pl_los", Dimension::decibel},
            {"pl_nlos", Dimension::decibel}},
           [](const CanonicalParams& p) {
             return avg_path_loss(p.at("p_los"), p.at("pl_los"), p.at("pl_nlos"));
           },
           kAtgRef});
  reg.add({"induced_power",
           {{"Pi", Dimension::power}, {"v0", Dimension::speed}, {"V", Dimension::speed}},
           [](const CanonicalParams& p) {
             return induced_power(p.at("Pi"), p.at("v0"), p.at("V"));
           },
           kRotaryWingRef});
  reg.add({"parasite_power",
           {{"d0", Dimension::dimensionless},
            {"rho", Dimension::density},
            {"s", Dimension::dimensionless},
            {"A", Dimension::area},
            {"V", Dimension::speed}},
           [](const CanonicalParams& p) {
             return parasite_power(p.at("d0"), p.at("rho"), p.at("s"), p.at("A"), p.at("V"));
           },
           kRotaryWingRef});
  reg.add({"hover_power",
           {{"W", Dimension::force}, {"rho", Dimension::density}, {"A", Dimension::area}},
           [](const CanonicalParams& p) { return hover_power(p.at("W"), p.at("rho"), p.at("A")); },
           "momentum-theory hover power"});
  reg.add({"transmission_delay",
           {{"S", Dimension::data},
            {"B", Dimension::frequency},
            {"P", Dimension::power},
            {"g", Dimension::dimensionless},
            {"N0", Dimension::power}},
           [](const CanonicalParams& p) {
             return transmission_delay(p.at("S"), p.at("B"), p.at("P"), p.at("g"), p.at("N0"));
           },
           "payload size over Shannon rate"});
  reg.add({"total_forward_power",
           {{"blade", Dimension::power}, {"induced", Dimension::power}, {"parasite", Dimension::power}},
           [](const CanonicalParams& p) {
             return total_forward_power(p.at("blade"), p.at("induced"), p.at("parasite"));
           },
           kRotaryWingRef});
  reg.add({"forward_flight_power",
           {{"P0", Dimension::power},
            {"omega", Dimension::angular_speed},
            {"R", Dimension::length},
            {"Pi", Dimension::power},
            {"v0", Dimension::speed},
            {"d0", Dimension::dimensionless},
            {"rho", Dimension::density},
            {"s", Dimension::dimensionless},
            {"A", Dimension::area},
            {"V", Dimension::speed}},
           [](const CanonicalParams& p) {
             const double v = p.at("V");
             return total_forward_power(
                 blade_power(p.at("P0"), v, p.at("omega"), p.at("R")),
                 induced_power(p.at("Pi"), p.at("v0"), v),
                 parasite_power(p.at("d0"), p.at("rho"), p.at("s"), p.at("A"), v));
           },
           kRotaryWingRef});
  return reg;
}

}  // namespace

const FormulaRegistry& default_registry() {
  static const FormulaRegistry reg = build_default_registry();
  return reg;
}

}  // namespace raguav::oracle
