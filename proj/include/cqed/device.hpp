#pragma once

// Declarative chip description and its JSON document form. Quantities are plain numbers in
// fF / nA / nH / um; unknown keys are rejected with a JSON-pointer path.

#include <array>
#include <cmath>
#include <initializer_list>
#include <span>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cqed/errors.hpp"
#include "cqed/resonator.hpp"
#include "cqed/units.hpp"

namespace cqed {

/// Externally reported values attached to an element, surfaced as annotations next to ours.
using ReferenceValues = std::map<std::string, double>;

enum class QubitKind { qubit, coupler };

struct QubitSpec {
  std::string name;
  QubitKind kind = QubitKind::qubit;
  Capacitance shunt_capacitance;
  Current ic_total;
  std::optional<double> width_ratio;  // present iff flux-tunable
  ReferenceValues reference;

  bool tunable() const noexcept { return width_ratio.has_value(); }
};

struct ResonatorSpec {
  std::string name;
  Inductance l_total;
  Capacitance c_total;
  ResonatorMode mode = ResonatorMode::quarter_wave;
  std::optional<Length> length;
  ReferenceValues reference;
};

struct CouplingSpec {
  std::string name;
  std::string from;
  std::string to;
  Capacitance capacitance;
  ReferenceValues reference;
};

struct DriveLineSpec {
  std::string name;
  std::string qubit;
  Capacitance capacitance;
};

struct DeviceSpec {
  std::vector<QubitSpec> qubits;
  std::vector<ResonatorSpec> resonators;
  std::vector<CouplingSpec> couplings;
  std::vector<DriveLineSpec> drive_lines;
  double substrate_epsilon = kDefaultSubstrateEpsilon;

  const QubitSpec* find_qubit(std::string_view name) const {
    for (const auto& q : qubits)
      if (q.name == name) return &q;
    return nullptr;
  }
  const ResonatorSpec* find_resonator(std::string_view name) const {
    for (const auto& r : resonators)
      if (r.name == name) return &r;
    return nullptr;
  }

  ResonatorParams resonator_params(const ResonatorSpec& r) const {
    return {r.l_total, r.c_total, r.mode, r.length, substrate_epsilon};
  }
};

inline std::string_view to_string(QubitKind k) { return k == QubitKind::coupler ? "coupler" : "qubit"; }

namespace detail {

using nlohmann::json;

class DocumentReader {
 public:
  DocumentReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  void require_object() const {
    if (!node_.is_object()) throw SchemaError(path_.empty() ? "/" : path_, "expected an object");
  }

  void reject_unknown(std::span<const std::string_view> allowed) const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      bool known = false;
      for (auto a : allowed) known = known || it.key() == a;
      if (!known) throw SchemaError(path_ + "/" + it.key(), "unknown key");
    }
  }

  bool has(std::string_view key) const { return node_.contains(key); }

  std::string string(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_string() || v.get<std::string>().empty()) throw SchemaError(sub(key), "expected a non-empty string");
    return v.get<std::string>();
  }

  double number(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_number()) throw SchemaError(sub(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(sub(key), "expected a finite number");
    return d;
  }

  double positive(std::string_view key) const {
    const double d = number(key);
    if (!(d > 0.0)) throw SchemaError(sub(key), "must be positive, got " + std::to_string(d));
    return d;
  }

  double non_negative(std::string_view key) const {
    const double d = number(key);
    if (!(d >= 0.0)) throw SchemaError(sub(key), "must be non-negative, got " + std::to_string(d));
    return d;
  }

  bool boolean(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_boolean()) throw SchemaError(sub(key), "expected a boolean");
    return v.get<bool>();
  }

  void reject_unknown(std::initializer_list<std::string_view> allowed) const {
    reject_unknown(std::span<const std::string_view>(allowed.begin(), allowed.size()));
  }

  ReferenceValues reference(std::span<const std::string_view> allowed) const {
    ReferenceValues out;
    if (!has("reference")) return out;
    DocumentReader r(at("reference"), sub("reference"));
    r.require_object();
    r.reject_unknown(allowed);
    for (auto it = r.node_.begin(); it != r.node_.end(); ++it) out[it.key()] = r.number(it.key());
    return out;
  }

  std::string sub(std::string_view key) const { return path_ + "/" + std::string(key); }

 private:
  const json& at(std::string_view key) const {
    auto it = node_.find(key);
    if (it == node_.end()) throw SchemaError(sub(key), "missing required key");
    return *it;
  }

  const json& node_;
  std::string path_;
};

inline const json& array_at(const json& doc, const char* key) {
  static const json empty = json::array();
  auto it = doc.find(key);
  if (it == doc.end()) return empty;
  if (!it->is_array()) throw SchemaError(std::string("/") + key, "expected an array");
  return *it;
}

}  // namespace detail

inline constexpr std::array<std::string_view, 4> kQubitReferenceKeys = {"e01_ghz", "f_min_ghz", "anharmonicity_mhz",
                                                                        "ej_over_ec"};
inline constexpr std::array<std::string_view, 2> kResonatorReferenceKeys = {"frequency_ghz", "analytic_frequency_ghz"};
inline constexpr std::array<std::string_view, 2> kCouplingReferenceKeys = {"g_mhz", "chi_khz"};

/// Parses and validates a device document; defaults: mode = quarter_wave, substrate_epsilon = 11.45.
inline DeviceSpec parse_device_json(const nlohmann::json& doc) {
  using detail::DocumentReader;
  DocumentReader top(doc, "");
  top.require_object();
  top.reject_unknown({"qubits", "resonators", "couplings", "drive_lines", "substrate_epsilon"});

  DeviceSpec spec;
  if (top.has("substrate_epsilon")) {
    spec.substrate_epsilon = top.number("substrate_epsilon");
    if (!(spec.substrate_epsilon >= 1.0)) throw SchemaError("/substrate_epsilon", "must be >= 1");
  }

  std::set<std::string> names;
  const auto claim = [&](const std::string& name, const std::string& path) {
    if (!names.insert(name).second) throw SchemaError(path + "/name", "duplicate element name '" + name + "'");
  };

  const auto& qubits = detail::array_at(doc, "qubits");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    DocumentReader r(qubits[i], "/qubits/" + std::to_string(i));
    r.require_object();
    r.reject_unknown({"name", "kind", "shunt_capacitance_ff", "ic_total_na", "width_ratio", "fixed_frequency", "reference"});
    QubitSpec q;
    q.name = r.string("name");
    claim(q.name, "/qubits/" + std::to_string(i));
    if (r.has("kind")) {
      const auto kind = r.string("kind");
      if (kind == "qubit") q.kind = QubitKind::qubit;
      else if (kind == "coupler") q.kind = QubitKind::coupler;
      else throw SchemaError(r.sub("kind"), "expected 'qubit' or 'coupler', got '" + kind + "'");
    }
    q.shunt_capacitance = Capacitance(r.positive("shunt_capacitance_ff"));
    q.ic_total = Current(r.positive("ic_total_na"));
    const bool fixed = r.has("fixed_frequency") && r.boolean("fixed_frequency");
    if (r.has("width_ratio")) {
      if (fixed) throw SchemaError(r.sub("width_ratio"), "a fixed-frequency qubit cannot have a SQUID width ratio");
      q.width_ratio = r.number("width_ratio");
      if (!(*q.width_ratio >= 1.0)) throw SchemaError(r.sub("width_ratio"), "must be >= 1 (W1 is the wider junction)");
    } else if (!fixed) {
      throw SchemaError(r.sub("width_ratio"), "required unless fixed_frequency is true");
    }
    q.reference = r.reference(kQubitReferenceKeys);
    spec.qubits.push_back(std::move(q));
  }

  const auto& resonators = detail::array_at(doc, "resonators");
  for (std::size_t i = 0; i < resonators.size(); ++i) {
    DocumentReader r(resonators[i], "/resonators/" + std::to_string(i));
    r.require_object();
    r.reject_unknown({"name", "l_total_nh", "c_total_ff", "length_um", "mode", "reference"});
    ResonatorSpec res;
    res.name = r.string("name");
    claim(res.name, "/resonators/" + std::to_string(i));
    res.l_total = Inductance(r.positive("l_total_nh"));
    res.c_total = Capacitance(r.positive("c_total_ff"));
    if (r.has("length_um")) res.length = Length(r.positive("length_um"));
    if (r.has("mode")) {
      const auto mode = resonator_mode_from_string(r.string("mode"));
      if (!mode) throw SchemaError(r.sub("mode"), "expected quarter_wave, half_wave or lumped");
      res.mode = *mode;
    }
    res.reference = r.reference(kResonatorReferenceKeys);
    spec.resonators.push_back(std::move(res));
  }

  const auto& couplings = detail::array_at(doc, "couplings");
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    const std::string path = "/couplings/" + std::to_string(i);
    DocumentReader r(couplings[i], path);
    r.require_object();
    r.reject_unknown({"name", "from", "to", "capacitance_ff", "reference"});
    CouplingSpec c;
    c.name = r.string("name");
    claim(c.name, path);
    c.from = r.string("from");
    c.to = r.string("to");
    c.capacitance = Capacitance(r.non_negative("capacitance_ff"));
    c.reference = r.reference(kCouplingReferenceKeys);
    spec.couplings.push_back(std::move(c));
  }

  const auto& drives = detail::array_at(doc, "drive_lines");
  for (std::size_t i = 0; i < drives.size(); ++i) {
    const std::string path = "/drive_lines/" + std::to_string(i);
    DocumentReader r(drives[i], path);
    r.require_object();
    r.reject_unknown({"name", "qubit", "capacitance_ff"});
    DriveLineSpec d;
    d.name = r.string("name");
    claim(d.name, path);
    d.qubit = r.string("qubit");
    d.capacitance = Capacitance(r.non_negative("capacitance_ff"));
    spec.drive_lines.push_back(std::move(d));
  }

  // References resolve only after every element is declared.
  for (std::size_t i = 0; i < spec.couplings.size(); ++i) {
    const auto& c = spec.couplings[i];
    const std::string path = "/couplings/" + std::to_string(i);
    for (const auto& [end, key] : {std::pair{c.from, "from"}, std::pair{c.to, "to"}}) {
      if (!spec.find_qubit(end) && !spec.find_resonator(end)) {
        throw SchemaError(path + "/" + key, "dangling reference to undeclared element '" + end + "'");
      }
    }
    if (c.from == c.to) throw SchemaError(path + "/to", "coupling endpoints must differ");
  }
  for (std::size_t i = 0; i < spec.drive_lines.size(); ++i) {
    if (!spec.find_qubit(spec.drive_lines[i].qubit)) {
      throw SchemaError("/drive_lines/" + std::to_string(i) + "/qubit",
                        "dangling reference to undeclared qubit '" + spec.drive_lines[i].qubit + "'");
    }
  }
  return spec;
}

inline DeviceSpec parse_device_spec(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  return parse_device_json(doc);
}

inline nlohmann::json to_json(const DeviceSpec& spec) {
  using nlohmann::json;
  const auto with_reference = [](json& node, const ReferenceValues& ref) {
    if (!ref.empty()) node["reference"] = ref;
  };
  json doc = json::object();
  doc["substrate_epsilon"] = spec.substrate_epsilon;
  doc["qubits"] = json::array();
  for (const auto& q : spec.qubits) {
    json node = {{"name", q.name},
                 {"kind", to_string(q.kind)},
                 {"shunt_capacitance_ff", q.shunt_capacitance.value()},
                 {"ic_total_na", q.ic_total.value()}};
    if (q.width_ratio) node["width_ratio"] = *q.width_ratio;
    else node["fixed_frequency"] = true;
    with_reference(node, q.reference);
    doc["qubits"].push_back(std::move(node));
  }
  doc["resonators"] = json::array();
  for (const auto& r : spec.resonators) {
    json node = {{"name", r.name},
                 {"l_total_nh", r.l_total.value()},
                 {"c_total_ff", r.c_total.value()},
                 {"mode", to_string(r.mode)}};
    if (r.length) node["length_um"] = r.length->value();
    with_reference(node, r.reference);
    doc["resonators"].push_back(std::move(node));
  }
  doc["couplings"] = json::array();
  for (const auto& c : spec.couplings) {
    json node = {{"name", c.name}, {"from", c.from}, {"to", c.to}, {"capacitance_ff", c.capacitance.value()}};
    with_reference(node, c.reference);
    doc["couplings"].push_back(std::move(node));
  }
  doc["drive_lines"] = json::array();
  for (const auto& d : spec.drive_lines) {
    doc["drive_lines"].push_back({{"name", d.name}, {"qubit", d.qubit}, {"capacitance_ff", d.capacitance.value()}});
  }
  return doc;
}

}  // namespace cqed
