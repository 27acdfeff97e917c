#pragma once

// Full analysis pipeline over a DeviceSpec, plus the JSON and aligned-text report forms.

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/coupling.hpp"
#include "cqed/design_rules.hpp"
#include "cqed/device.hpp"
#include "cqed/resonator.hpp"
#include "cqed/result.hpp"
#include "cqed/squid.hpp"
#include "cqed/transmon.hpp"

namespace cqed {

struct AnalysisOptions {
  std::size_t oracle_qubit_levels = 6;
  std::size_t oracle_photon_levels = 8;
};

namespace detail {

template <typename F>
auto for_element(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const AnalysisError&) {
    throw;
  } catch (const Error& e) {
    throw AnalysisError(name, e.what());
  }
}

inline QubitResult analyze_qubit(const QubitSpec& q) {
  QubitResult r;
  r.name = q.name;
  r.kind = q.kind;
  r.tunable = q.tunable();
  r.shunt_capacitance = q.shunt_capacitance;
  r.ic_total = q.ic_total;
  r.ec = charging_energy(q.shunt_capacitance);
  r.ej_sigma = josephson_energy(q.ic_total);
  r.spectrum = transmon_spectrum({r.ec, r.ej_sigma});
  if (q.width_ratio) {
    r.asymmetry_d = junction_asymmetry(*q.width_ratio);
    const auto ext = frequency_extrema({q.ic_total, *q.width_ratio, q.shunt_capacitance});
    r.f_max = ext.f_max;
    r.f_min = ext.f_min;
  } else {
    r.f_max = r.f_min = r.spectrum.e01;
  }
  return r;
}

inline ResonatorResult analyze_resonator(const DeviceSpec& spec, const ResonatorSpec& res) {
  ResonatorResult r;
  r.name = res.name;
  r.mode = res.mode;
  r.l_total = res.l_total;
  r.c_total = res.c_total;
  r.length = res.length;
  r.substrate_epsilon = spec.substrate_epsilon;
  r.frequency = resonant_frequency(spec.resonator_params(res));
  if (res.length) r.analytic_frequency = cpw_analytic_frequency(*res.length, spec.substrate_epsilon);
  return r;
}

inline CouplingResult analyze_coupling(const DeviceSpec& spec, const CouplingSpec& c,
                                       const std::vector<QubitResult>& qubits,
                                       const std::vector<ResonatorResult>& resonators, const AnalysisOptions& opt) {
  CouplingResult out;
  out.name = c.name;
  out.capacitance = c.capacitance;
  out.qubit = c.from;
  out.other = c.to;

  const QubitSpec* q = spec.find_qubit(c.from);
  const ResonatorSpec* res = spec.find_resonator(c.to);
  if (!q || !res) {
    q = spec.find_qubit(c.to);
    res = spec.find_resonator(c.from);
  }
  if (!q || !res) return out;  // qubit-qubit or resonator-resonator: capacitance only

  out.kind = CouplingKind::qubit_resonator;
  out.qubit = q->name;
  out.other = res->name;
  const auto& qr = *std::find_if(qubits.begin(), qubits.end(), [&](const auto& x) { return x.name == q->name; });
  const auto& rr = *std::find_if(resonators.begin(), resonators.end(), [&](const auto& x) { return x.name == res->name; });

  CouplingReport rep;
  rep.beta = participation_beta(c.capacitance, q->shunt_capacitance);
  rep.v_rms = vacuum_rms_voltage(rr.frequency, res->c_total);
  rep.g = coupling_g({c.capacitance, q->shunt_capacitance, spec.resonator_params(*res), qr.spectrum});
  rep.detuning = qr.spectrum.e01 - rr.frequency;
  rep.chi_closed_form = dispersive_shift(rep.g, qr.spectrum.e01, rr.frequency, qr.spectrum.anharmonicity_signed);
  rep.chi_perturbative =
      dispersive_shift_multilevel(transmon_eigensystem({qr.ec, qr.ej_sigma}, opt.oracle_qubit_levels), rr.frequency, rep.g);
  try {
    rep.chi_exact = chi_exact_oracle({qr.ec, qr.ej_sigma}, rr.frequency, rep.g, opt.oracle_qubit_levels,
                                     opt.oracle_photon_levels);
  } catch (const LabelingError&) {
    rep.chi_exact.reset();
  }
  out.report = rep;
  return out;
}

inline void annotate(std::vector<Annotation>& out, const std::string& element, const ReferenceValues& ref,
                     const std::string& key, std::optional<double> computed) {
  auto it = ref.find(key);
  if (it == ref.end() || !computed) return;
  out.push_back({element, key, *computed, it->second});
}

inline std::vector<Annotation> build_annotations(const DeviceSpec& spec, const AnalysisResult& a) {
  std::vector<Annotation> out;
  for (std::size_t i = 0; i < spec.qubits.size(); ++i) {
    const auto& ref = spec.qubits[i].reference;
    const auto& q = a.qubits[i];
    annotate(out, q.name, ref, "anharmonicity_mhz", std::abs(q.spectrum.anharmonicity_signed.value()) * 1e3);
    annotate(out, q.name, ref, "e01_ghz", q.spectrum.e01.value());
    annotate(out, q.name, ref, "ej_over_ec", q.spectrum.ej_over_ec);
    annotate(out, q.name, ref, "f_min_ghz", q.f_min.value());
  }
  for (std::size_t i = 0; i < spec.resonators.size(); ++i) {
    const auto& ref = spec.resonators[i].reference;
    const auto& r = a.resonators[i];
    std::optional<double> analytic;
    if (r.analytic_frequency) analytic = r.analytic_frequency->value();
    annotate(out, r.name, ref, "analytic_frequency_ghz", analytic);
    annotate(out, r.name, ref, "frequency_ghz", r.frequency.value());
  }
  for (std::size_t i = 0; i < spec.couplings.size(); ++i) {
    const auto& ref = spec.couplings[i].reference;
    const auto& c = a.couplings[i];
    if (!c.report) continue;
    annotate(out, c.name, ref, "chi_khz", std::abs(c.report->chi_perturbative.value()) * 1e6);
    annotate(out, c.name, ref, "g_mhz", c.report->g.value() * 1e3);
  }
  return out;
}

}  // namespace detail

/// Runs every physics stage per element (declaration order), then annotations and design rules.
/// All-or-nothing: any element failure throws AnalysisError naming the element.
inline AnalysisResult analyze_device(const DeviceSpec& spec, const RuleThresholds& thresholds,
                                     Provenance provenance = {}, const AnalysisOptions& options = {}) {
  thresholds.validate();
  AnalysisResult a;
  a.provenance = std::move(provenance);
  for (const auto& q : spec.qubits) a.qubits.push_back(detail::for_element(q.name, [&] { return detail::analyze_qubit(q); }));
  for (const auto& r : spec.resonators)
    a.resonators.push_back(detail::for_element(r.name, [&] { return detail::analyze_resonator(spec, r); }));
  for (const auto& c : spec.couplings)
    a.couplings.push_back(detail::for_element(
        c.name, [&] { return detail::analyze_coupling(spec, c, a.qubits, a.resonators, options); }));
  for (const auto& d : spec.drive_lines) a.drive_lines.push_back({d.name, d.qubit, d.capacitance});
  a.annotations = detail::build_annotations(spec, a);
  a.rules = run_design_rules(a, thresholds);
  return a;
}

// ---------------------------------------------------------------------------------------------
// JSON

namespace detail {

using nlohmann::json;

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> read_optional(const json& node, const char* key) {
  const auto& v = node.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace detail

inline nlohmann::json to_json(const DesignRuleReport& report) {
  using nlohmann::json;
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"rule_id", e.rule_id},
                       {"subject", e.subject},
                       {"measured", e.measured},
                       {"threshold", e.threshold},
                       {"margin", e.margin},
                       {"passed", e.passed}});
  }
  return {{"overall_pass", report.overall_pass}, {"entries", std::move(entries)}};
}

inline nlohmann::json to_json(const AnalysisResult& a) {
  using nlohmann::json;
  using detail::optional_number;
  json doc = json::object();
  doc["provenance"] = {{"input_sha256", a.provenance.input_digest},
                       {"tool_version", a.provenance.tool_version},
                       {"constants", a.provenance.constants_version}};

  doc["qubits"] = json::array();
  for (const auto& q : a.qubits) {
    doc["qubits"].push_back({
        {"name", q.name},
        {"kind", to_string(q.kind)},
        {"tunable", q.tunable},
        {"shunt_capacitance_ff", q.shunt_capacitance.value()},
        {"ic_total_na", q.ic_total.value()},
        {"ec_ghz", q.ec.value()},
        {"ej_sigma_ghz", q.ej_sigma.value()},
        {"ej_over_ec", q.spectrum.ej_over_ec},
        {"asymmetry_d", optional_number(q.asymmetry_d)},
        {"e01_ghz", q.spectrum.e01.value()},
        {"e12_ghz", q.spectrum.e12.value()},
        {"anharmonicity_signed_ghz", q.spectrum.anharmonicity_signed.value()},
        {"anharmonicity_magnitude_ghz", std::abs(q.spectrum.anharmonicity_signed.value())},
        {"charge_me_01", q.spectrum.charge_me_01},
        {"levels_ghz", q.spectrum.levels},
        {"ncut", q.spectrum.ncut_used},
        {"f_max_ghz", q.f_max.value()},
        {"f_min_ghz", q.f_min.value()},
    });
  }

  doc["resonators"] = json::array();
  for (const auto& r : a.resonators) {
    std::optional<double> len, analytic;
    if (r.length) len = r.length->value();
    if (r.analytic_frequency) analytic = r.analytic_frequency->value();
    doc["resonators"].push_back({
        {"name", r.name},
        {"mode", to_string(r.mode)},
        {"l_total_nh", r.l_total.value()},
        {"c_total_ff", r.c_total.value()},
        {"frequency_ghz", r.frequency.value()},
        {"length_um", optional_number(len)},
        {"substrate_epsilon", r.substrate_epsilon},
        {"analytic_frequency_ghz", optional_number(analytic)},
    });
  }

  doc["couplings"] = json::array();
  for (const auto& c : a.couplings) {
    json node = {{"name", c.name},
                 {"kind", c.kind == CouplingKind::qubit_resonator ? "qubit_resonator" : "capacitive"},
                 {"qubit", c.qubit},
                 {"other", c.other},
                 {"capacitance_ff", c.capacitance.value()}};
    std::optional<double> beta, v, g, det, chi, chi_closed, chi_exact;
    if (c.report) {
      beta = c.report->beta;
      v = c.report->v_rms;
      g = c.report->g.value();
      det = c.report->detuning.value();
      chi = c.report->chi_perturbative.value();
      chi_closed = c.report->chi_closed_form.value();
      if (c.report->chi_exact) chi_exact = c.report->chi_exact->value();
    }
    node["beta"] = optional_number(beta);
    node["v_rms_v"] = optional_number(v);
    node["g_ghz"] = optional_number(g);
    node["detuning_ghz"] = optional_number(det);
    node["chi_ghz"] = optional_number(chi);
    node["chi_closed_form_ghz"] = optional_number(chi_closed);
    node["chi_exact_ghz"] = optional_number(chi_exact);
    doc["couplings"].push_back(std::move(node));
  }

  doc["drive_lines"] = json::array();
  for (const auto& d : a.drive_lines) {
    doc["drive_lines"].push_back({{"name", d.name}, {"qubit", d.qubit}, {"capacitance_ff", d.capacitance.value()}});
  }

  doc["annotations"] = json::array();
  for (const auto& n : a.annotations) {
    doc["annotations"].push_back({{"element", n.element},
                                  {"quantity", n.quantity},
                                  {"computed", n.computed},
                                  {"reference", n.reference},
                                  {"relative_deviation", n.relative_deviation()}});
  }
  doc["design_rules"] = to_json(a.rules);
  return doc;
}

/// Rebuilds an AnalysisResult from its JSON report (used by `check`).
inline AnalysisResult analysis_from_json(const nlohmann::json& doc) {
  using detail::read_optional;
  AnalysisResult a;
  try {
    const auto& prov = doc.at("provenance");
    a.provenance = {prov.at("input_sha256").get<std::string>(), prov.at("tool_version").get<std::string>(),
                    prov.at("constants").get<std::string>()};
    for (const auto& n : doc.at("qubits")) {
      QubitResult q;
      q.name = n.at("name").get<std::string>();
      q.kind = n.at("kind").get<std::string>() == "coupler" ? QubitKind::coupler : QubitKind::qubit;
      q.tunable = n.at("tunable").get<bool>();
      q.shunt_capacitance = Capacitance(n.at("shunt_capacitance_ff").get<double>());
      q.ic_total = Current(n.at("ic_total_na").get<double>());
      q.ec = Frequency(n.at("ec_ghz").get<double>());
      q.ej_sigma = Frequency(n.at("ej_sigma_ghz").get<double>());
      q.asymmetry_d = read_optional(n, "asymmetry_d");
      q.spectrum.ej_over_ec = n.at("ej_over_ec").get<double>();
      q.spectrum.e01 = Frequency(n.at("e01_ghz").get<double>());
      q.spectrum.e12 = Frequency(n.at("e12_ghz").get<double>());
      q.spectrum.anharmonicity_signed = Frequency(n.at("anharmonicity_signed_ghz").get<double>());
      q.spectrum.charge_me_01 = n.at("charge_me_01").get<double>();
      q.spectrum.levels = n.at("levels_ghz").get<std::vector<double>>();
      q.spectrum.ncut_used = n.at("ncut").get<int>();
      q.f_max = Frequency(n.at("f_max_ghz").get<double>());
      q.f_min = Frequency(n.at("f_min_ghz").get<double>());
      a.qubits.push_back(std::move(q));
    }
    for (const auto& n : doc.at("resonators")) {
      ResonatorResult r;
      r.name = n.at("name").get<std::string>();
      const auto mode = resonator_mode_from_string(n.at("mode").get<std::string>());
      if (!mode) throw SchemaError("/resonators", "unknown resonator mode");
      r.mode = *mode;
      r.l_total = Inductance(n.at("l_total_nh").get<double>());
      r.c_total = Capacitance(n.at("c_total_ff").get<double>());
      r.frequency = Frequency(n.at("frequency_ghz").get<double>());
      if (auto len = read_optional(n, "length_um")) r.length = Length(*len);
      r.substrate_epsilon = n.at("substrate_epsilon").get<double>();
      if (auto f = read_optional(n, "analytic_frequency_ghz")) r.analytic_frequency = Frequency(*f);
      a.resonators.push_back(std::move(r));
    }
    for (const auto& n : doc.at("couplings")) {
      CouplingResult c;
      c.name = n.at("name").get<std::string>();
      c.kind = n.at("kind").get<std::string>() == "qubit_resonator" ? CouplingKind::qubit_resonator
                                                                     : CouplingKind::capacitive;
      c.qubit = n.at("qubit").get<std::string>();
      c.other = n.at("other").get<std::string>();
      c.capacitance = Capacitance(n.at("capacitance_ff").get<double>());
      if (c.kind == CouplingKind::qubit_resonator) {
        CouplingReport rep;
        rep.beta = n.at("beta").get<double>();
        rep.v_rms = n.at("v_rms_v").get<double>();
        rep.g = Frequency(n.at("g_ghz").get<double>());
        rep.detuning = Frequency(n.at("detuning_ghz").get<double>());
        rep.chi_perturbative = Frequency(n.at("chi_ghz").get<double>());
        rep.chi_closed_form = Frequency(n.at("chi_closed_form_ghz").get<double>());
        if (auto x = read_optional(n, "chi_exact_ghz")) rep.chi_exact = Frequency(*x);
        c.report = rep;
      }
      a.couplings.push_back(std::move(c));
    }
    for (const auto& n : doc.at("drive_lines")) {
      a.drive_lines.push_back({n.at("name").get<std::string>(), n.at("qubit").get<std::string>(),
                               Capacitance(n.at("capacitance_ff").get<double>())});
    }
    for (const auto& n : doc.at("annotations")) {
      a.annotations.push_back({n.at("element").get<std::string>(), n.at("quantity").get<std::string>(),
                               n.at("computed").get<double>(), n.at("reference").get<double>()});
    }
    const auto& rules = doc.at("design_rules");
    a.rules.overall_pass = rules.at("overall_pass").get<bool>();
    for (const auto& n : rules.at("entries")) {
      a.rules.entries.push_back({n.at("rule_id").get<std::string>(), n.at("subject").get<std::string>(),
                                 n.at("measured").get<double>(), n.at("threshold").get<double>(),
                                 n.at("margin").get<double>(), n.at("passed").get<bool>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("/", std::string("malformed analysis report: ") + e.what());
  }
  return a;
}

inline RuleThresholds thresholds_from_json(const nlohmann::json& doc) {
  detail::DocumentReader r(doc, "");
  r.require_object();
  r.reject_unknown({"ej_ec_min", "ej_ec_max", "g_over_delta_max", "min_pairwise_separation_ghz",
                    "drive_coupling_max_ff", "anharmonicity_min_ghz"});
  RuleThresholds t;
  const auto maybe = [&](const char* key, double& field) {
    if (r.has(key)) field = r.number(key);
  };
  maybe("ej_ec_min", t.ej_ec_min);
  maybe("ej_ec_max", t.ej_ec_max);
  maybe("g_over_delta_max", t.g_over_delta_max);
  maybe("min_pairwise_separation_ghz", t.min_pairwise_separation_ghz);
  maybe("drive_coupling_max_ff", t.drive_coupling_max_ff);
  maybe("anharmonicity_min_ghz", t.anharmonicity_min_ghz);
  t.validate();
  return t;
}

// ---------------------------------------------------------------------------------------------
// Text

namespace detail {

inline std::string format_cell(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_cell(v[i]);
    return out + "]";
  }
  return v.dump();
}

inline std::string pad(const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); }

inline std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) line += (c ? "  " : "") + pad(row[c], width[c]);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

// One row per field, one column per element.
inline std::string render_section(const std::string& title, const json& elements) {
  std::string out = "== " + title + " ==\n";
  if (elements.empty()) return out + "(none)\n\n";
  std::vector<std::vector<std::string>> rows;
  for (auto it = elements[0].begin(); it != elements[0].end(); ++it) {
    std::vector<std::string> row{it.key()};
    for (const auto& e : elements) row.push_back(format_cell(e.at(it.key())));
    rows.push_back(std::move(row));
  }
  return out + render_rows(rows) + '\n';
}

// One row per record, columns are the record fields.
inline std::string render_records(const std::string& title, const json& records) {
  std::string out = "== " + title + " ==\n";
  if (records.empty()) return out + "(none)\n\n";
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;
  for (auto it = records[0].begin(); it != records[0].end(); ++it) header.push_back(it.key());
  rows.push_back(header);
  for (const auto& r : records) {
    std::vector<std::string> row;
    for (const auto& k : header) row.push_back(format_cell(r.at(k)));
    rows.push_back(std::move(row));
  }
  return out + render_rows(rows) + '\n';
}

}  // namespace detail

/// Aligned-column rendering of a JSON analysis report; numbers carry 4 significant digits.
inline std::string render_text(const nlohmann::json& report) {
  std::string out;
  {
    std::vector<std::vector<std::string>> rows;
    for (auto it = report.at("provenance").begin(); it != report.at("provenance").end(); ++it)
      rows.push_back({it.key(), detail::format_cell(it.value())});
    out += "== provenance ==\n" + detail::render_rows(rows) + '\n';
  }
  out += detail::render_section("qubits", report.at("qubits"));
  out += detail::render_section("resonators", report.at("resonators"));
  out += detail::render_section("couplings", report.at("couplings"));
  out += detail::render_records("drive_lines", report.at("drive_lines"));
  out += detail::render_records("annotations", report.at("annotations"));
  out += detail::render_records("design_rules", report.at("design_rules").at("entries"));
  out += "overall_pass: " + detail::format_cell(report.at("design_rules").at("overall_pass")) + '\n';
  return out;
}

}  // namespace cqed
