#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqed/coupling.hpp"
#include "cqed/device.hpp"
#include "cqed/resonator.hpp"
#include "cqed/transmon.hpp"

namespace cqed {

inline constexpr const char* kToolVersion = "0.1.0";

struct QubitResult {
  std::string name;
  QubitKind kind = QubitKind::qubit;
  bool tunable = false;
  Capacitance shunt_capacitance;
  Current ic_total;
  EnergyOverH ec;
  EnergyOverH ej_sigma;
  std::optional<double> asymmetry_d;
  TransmonSpectrum spectrum;  // at zero flux
  Frequency f_max;
  Frequency f_min;
};

struct ResonatorResult {
  std::string name;
  ResonatorMode mode = ResonatorMode::quarter_wave;
  Inductance l_total;
  Capacitance c_total;
  Frequency frequency;
  std::optional<Length> length;
  std::optional<Frequency> analytic_frequency;
  double substrate_epsilon = kDefaultSubstrateEpsilon;
};

enum class CouplingKind { qubit_resonator, capacitive };

struct CouplingResult {
  std::string name;
  std::string qubit;  // for qubit_resonator: the qubit endpoint; otherwise `from`
  std::string other;  // resonator endpoint, or `to`
  CouplingKind kind = CouplingKind::capacitive;
  Capacitance capacitance;
  std::optional<CouplingReport> report;  // qubit_resonator only
};

struct DriveLineResult {
  std::string name;
  std::string qubit;
  Capacitance capacitance;
};

/// Our value next to an externally reported one for the same quantity.
struct Annotation {
  std::string element;
  std::string quantity;
  double computed = 0.0;
  double reference = 0.0;

  double relative_deviation() const { return (computed - reference) / reference; }
};

struct RuleEntry {
  std::string rule_id;
  std::string subject;
  double measured = 0.0;
  double threshold = 0.0;
  double margin = 0.0;  // >= 0 iff passed
  bool passed = false;
};

struct DesignRuleReport {
  std::vector<RuleEntry> entries;
  bool overall_pass = true;
};

struct Provenance {
  std::string input_digest;  // sha256 hex of the device document bytes
  std::string tool_version = kToolVersion;
  std::string constants_version = kConstantsVersion;
};

struct AnalysisResult {
  std::vector<QubitResult> qubits;
  std::vector<ResonatorResult> resonators;
  std::vector<CouplingResult> couplings;
  std::vector<DriveLineResult> drive_lines;
  std::vector<Annotation> annotations;
  DesignRuleReport rules;
  Provenance provenance;
};

}  // namespace cqed
