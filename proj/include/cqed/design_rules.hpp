#pragma once

// Design-rule registry. Every rule emits one entry per subject; entries are ordered by
// rule id then subject so the report does not depend on declaration order.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/result.hpp"

namespace cqed {

struct RuleThresholds {
  double ej_ec_min = 50.0;
  double ej_ec_max = 150.0;
  double g_over_delta_max = 0.1;
  double min_pairwise_separation_ghz = 0.1;
  double drive_coupling_max_ff = 1.0;
  double anharmonicity_min_ghz = 0.15;

  void validate() const {
    const auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigurationError(std::string("threshold ") + name + " must be positive");
    };
    positive(ej_ec_min, "ej_ec_min");
    positive(ej_ec_max, "ej_ec_max");
    positive(g_over_delta_max, "g_over_delta_max");
    positive(min_pairwise_separation_ghz, "min_pairwise_separation_ghz");
    positive(drive_coupling_max_ff, "drive_coupling_max_ff");
    positive(anharmonicity_min_ghz, "anharmonicity_min_ghz");
    if (!(ej_ec_min < ej_ec_max)) throw ConfigurationError("threshold ej_ec_min must be below ej_ec_max");
  }
};

namespace rules {

inline RuleEntry upper_bound(std::string id, std::string subject, double measured, double max) {
  return {std::move(id), std::move(subject), measured, max, max - measured, measured <= max};
}

inline RuleEntry lower_bound(std::string id, std::string subject, double measured, double min) {
  return {std::move(id), std::move(subject), measured, min, measured - min, measured >= min};
}

// Ej/Ec inside [min, max]; the reported threshold is the nearer bound.
inline void transmon_regime(const AnalysisResult& a, const RuleThresholds& t, std::vector<RuleEntry>& out) {
  for (const auto& q : a.qubits) {
    const double r = q.spectrum.ej_over_ec;
    const double lo = r - t.ej_ec_min;
    const double hi = t.ej_ec_max - r;
    out.push_back({"transmon_regime", q.name, r, lo <= hi ? t.ej_ec_min : t.ej_ec_max, std::min(lo, hi),
                   lo >= 0.0 && hi >= 0.0});
  }
}

inline void anharmonicity(const AnalysisResult& a, const RuleThresholds& t, std::vector<RuleEntry>& out) {
  for (const auto& q : a.qubits) {
    out.push_back(lower_bound("anharmonicity", q.name, std::abs(q.spectrum.anharmonicity_signed.value()),
                              t.anharmonicity_min_ghz));
  }
}

inline void dispersive_ratio(const AnalysisResult& a, const RuleThresholds& t, std::vector<RuleEntry>& out) {
  for (const auto& c : a.couplings) {
    if (!c.report) continue;
    const double ratio = c.report->g.value() / std::abs(c.report->detuning.value());
    out.push_back(upper_bound("dispersive_ratio", c.name, ratio, t.g_over_delta_max));
  }
}

inline void drive_coupling(const AnalysisResult& a, const RuleThresholds& t, std::vector<RuleEntry>& out) {
  for (const auto& d : a.drive_lines) {
    out.push_back(upper_bound("drive_coupling", d.name, d.capacitance.value(), t.drive_coupling_max_ff));
  }
}

// Zero-flux qubit frequencies against each other and against resonator fundamentals.
// Couplers are tuned through the qubit band by design and resonator-resonator spacing is a
// linewidth question, so neither enters this rule.
inline void frequency_separation(const AnalysisResult& a, const RuleThresholds& t, std::vector<RuleEntry>& out) {
  struct Mode {
    std::string name;
    double f;
    bool resonator;
  };
  std::vector<Mode> modes;
  for (const auto& q : a.qubits)
    if (q.kind == QubitKind::qubit) modes.push_back({q.name, q.spectrum.e01.value(), false});
  for (const auto& r : a.resonators) modes.push_back({r.name, r.frequency.value(), true});
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = i + 1; j < modes.size(); ++j) {
      if (modes[i].resonator && modes[j].resonator) continue;
      const auto [first, second] = std::minmax(modes[i].name, modes[j].name);
      out.push_back(lower_bound("frequency_separation", first + "/" + second, std::abs(modes[i].f - modes[j].f),
                                t.min_pairwise_separation_ghz));
    }
}

using Rule = std::function<void(const AnalysisResult&, const RuleThresholds&, std::vector<RuleEntry>&)>;

inline const std::vector<Rule>& registry() {
  static const std::vector<Rule> all = {transmon_regime, anharmonicity, dispersive_ratio, drive_coupling,
                                        frequency_separation};
  return all;
}

}  // namespace rules

inline DesignRuleReport run_design_rules(const AnalysisResult& analysis, const RuleThresholds& t) {
  t.validate();
  DesignRuleReport report;
  for (const auto& rule : rules::registry()) rule(analysis, t, report.entries);
  std::sort(report.entries.begin(), report.entries.end(), [](const RuleEntry& a, const RuleEntry& b) {
    return std::tie(a.rule_id, a.subject) < std::tie(b.rule_id, b.subject);
  });
  report.overall_pass =
      std::all_of(report.entries.begin(), report.entries.end(), [](const RuleEntry& e) { return e.passed; });
  return report;
}

}  // namespace cqed
