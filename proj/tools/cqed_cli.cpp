// cqed: command-line front end for the circuit-QED analysis pipeline.
//
// Exit codes: 0 success / all rules pass, 1 design-rule failure, 2 input or validation error.

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqed/cqed.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuleFailure = 1;
constexpr int kExitInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << contents;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

cqed::RuleThresholds load_thresholds(const std::string& path) {
  if (path.empty()) return {};
  return cqed::thresholds_from_json(parse_json_file(path));
}

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run_analyze(const std::string& device_path, const std::string& json_out, bool text, const std::string& thresholds) {
  const std::string bytes = read_file(device_path);
  const auto spec = cqed::parse_device_spec(bytes);
  cqed::Provenance prov;
  prov.input_digest = sha256_hex(bytes);
  const auto result = cqed::analyze_device(spec, load_thresholds(thresholds), prov);
  const json report = cqed::to_json(result);
  if (!json_out.empty()) write_file(json_out, report.dump(2) + "\n");
  if (text) std::cout << cqed::render_text(report);
  if (json_out.empty() && !text) std::cout << report.dump(2) << "\n";
  return result.rules.overall_pass ? kExitOk : kExitRuleFailure;
}

int run_capmatrix(const std::string& path, const std::string& keep_csv, const std::string& ground,
                  const std::string& out_path) {
  const auto m = cqed::parse_capacitance_matrix(read_file(path));
  auto keep_list = split_names(keep_csv);

  if (ground.empty()) {
    const auto reduced = keep_list.empty() ? m : cqed::kron_reduce(m, {keep_list.begin(), keep_list.end()});
    const auto csv = cqed::to_csv(reduced);
    if (out_path.empty()) std::cout << csv;
    else write_file(out_path, csv);
    return kExitOk;
  }

  std::map<std::string, cqed::NetRole> roles{{ground, cqed::NetRole::ground}};
  if (keep_list.empty()) {
    for (const auto& n : m.net_names)
      if (n != ground) keep_list.push_back(n);
  }
  for (const auto& k : keep_list) roles.emplace(k, cqed::NetRole::other);
  const auto caps = cqed::extract_circuit_caps(m, roles);

  json doc;
  doc["ground"] = ground;
  doc["shunt_ff"] = caps.shunt;
  doc["couplings_ff"] = json::array();
  for (const auto& [pair, value] : caps.couplings) {
    doc["couplings_ff"].push_back({{"a", pair.first}, {"b", pair.second}, {"capacitance_ff", value}});
  }
  if (out_path.empty()) std::cout << doc.dump(2) << "\n";
  else write_file(out_path, doc.dump(2) + "\n");
  return kExitOk;
}

int run_tune_curve(const std::string& device_path, const std::string& element, int points, const std::string& csv_out) {
  const auto spec = cqed::parse_device_spec(read_file(device_path));
  const auto* q = spec.find_qubit(element);
  if (!q) throw InputError("no qubit or coupler named '" + element + "' in " + device_path);
  if (!q->tunable()) throw InputError("element '" + element + "' is a fixed-frequency qubit");
  if (points < 2) throw InputError("--points must be at least 2");

  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = -0.5 + static_cast<double>(i) / (points - 1);
  const auto curve = cqed::tuning_curve({q->ic_total, *q->width_ratio, q->shunt_capacitance}, grid);

  std::string csv = "flux_phi0,e01_ghz,anharmonicity_ghz\n";
  char line[128];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", curve.flux_points[i], curve.e01[i], curve.anharmonicity[i]);
    csv += line;
  }
  if (csv_out.empty()) std::cout << csv;
  else write_file(csv_out, csv);
  return kExitOk;
}

int run_check(const std::string& report_path, const std::string& thresholds, bool text) {
  auto result = cqed::analysis_from_json(parse_json_file(report_path));
  const auto rules = cqed::run_design_rules(result, load_thresholds(thresholds));
  const json doc = cqed::to_json(rules);
  if (text) {
    std::cout << cqed::detail::render_records("design_rules", doc.at("entries"))
              << "overall_pass: " << (rules.overall_pass ? "yes" : "no") << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  return rules.overall_pass ? kExitOk : kExitRuleFailure;
}

int run_fit(double f01, double alpha, double tolerance, double resonator_f, double inductance, const std::string& mode) {
  json doc = json::object();
  if (f01 > 0.0 || alpha > 0.0) {
    const auto fit = cqed::fit_transmon({cqed::Frequency(f01), cqed::Frequency(alpha), cqed::Frequency(tolerance)});
    doc["transmon"] = {{"c_shunt_ff", fit.c_shunt.value()},
                       {"ic_total_na", fit.ic.value()},
                       {"f01_ghz", fit.f01.value()},
                       {"anharmonicity_magnitude_ghz", fit.alpha_magnitude.value()}};
  }
  if (resonator_f > 0.0) {
    const auto m = cqed::resonator_mode_from_string(mode);
    if (!m) throw InputError("unknown resonator mode '" + mode + "'");
    const auto c = cqed::fit_resonator(cqed::Frequency(resonator_f), cqed::Inductance(inductance), *m);
    doc["resonator"] = {{"c_total_ff", c.value()}, {"l_total_nh", inductance}, {"mode", mode}};
  }
  if (doc.empty()) throw InputError("fit-targets: give --f01/--alpha and/or --resonator-f/--inductance");
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circuit-QED parameter analysis for superconducting qubit chips"};
  app.require_subcommand(1);

  std::string device, json_out, thresholds;
  bool text = false;
  auto* analyze = app.add_subcommand("analyze", "Analyze a device file and verify design rules");
  analyze->add_option("device", device, "Device JSON")->required();
  analyze->add_option("--json", json_out, "Write the JSON report here");
  analyze->add_flag("--text", text, "Print the aligned-column text report");
  analyze->add_option("--thresholds", thresholds, "Design-rule thresholds JSON");

  std::string matrix, keep, ground, cap_out;
  auto* cap = app.add_subcommand("capmatrix", "Validate, Kron-reduce and extract a Maxwell capacitance matrix");
  cap->add_option("matrix", matrix, "Capacitance matrix CSV")->required();
  cap->add_option("--keep", keep, "Comma-separated nets to keep");
  cap->add_option("--ground", ground, "Ground net (use 0 for the matrix reference); enables extraction");
  cap->add_option("--out", cap_out, "Write output here instead of stdout");

  std::string tune_device, element, csv_out;
  int points = 201;
  auto* tune = app.add_subcommand("tune-curve", "Flux tuning curve of a tunable qubit or coupler");
  tune->add_option("device", tune_device, "Device JSON")->required();
  tune->add_option("--element", element, "Qubit/coupler name")->required();
  tune->add_option("--points", points, "Grid points over [-0.5, 0.5] Phi0");
  tune->add_option("--csv", csv_out, "Write CSV here instead of stdout");

  std::string report;
  auto* check = app.add_subcommand("check", "Re-run design rules on a prior JSON report");
  check->add_option("report", report, "Analysis JSON report")->required();
  check->add_option("--thresholds", thresholds, "Design-rule thresholds JSON");
  check->add_flag("--text", text, "Print aligned-column text");

  double f01 = 0.0, alpha = 0.0, tolerance = 1e-6, resonator_f = 0.0, inductance = 0.0;
  std::string mode = "quarter_wave";
  auto* fit = app.add_subcommand("fit-targets", "Solve for component values that hit target frequencies");
  fit->add_option("--f01", f01, "Target qubit frequency (GHz)");
  fit->add_option("--alpha", alpha, "Target anharmonicity magnitude (GHz)");
  fit->add_option("--tolerance", tolerance, "Frequency tolerance (GHz)");
  fit->add_option("--resonator-f", resonator_f, "Target resonator frequency (GHz)");
  fit->add_option("--inductance", inductance, "Fixed resonator inductance (nH)");
  fit->add_option("--mode", mode, "Resonator mode: quarter_wave, half_wave or lumped");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*analyze) return run_analyze(device, json_out, text, thresholds);
    if (*cap) return run_capmatrix(matrix, keep, ground, cap_out);
    if (*tune) return run_tune_curve(tune_device, element, points, csv_out);
    if (*check) return run_check(report, thresholds, text);
    if (*fit) return run_fit(f01, alpha, tolerance, resonator_f, inductance, mode);
  } catch (const cqed::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
