// Walks the library API on the bundled two-qubit device: spectra, a flux sweep, couplings,
// and an inverse fit back to component values.

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cqed/cqed.hpp"

int main() {
  using namespace cqed;
  using namespace cqed::literals;

  std::ifstream in(CQED_FIXTURE_DIR "/two_qubit_chip.json");
  std::stringstream ss;
  ss << in.rdbuf();
  const DeviceSpec spec = parse_device_spec(ss.str());
  const AnalysisResult result = analyze_device(spec, RuleThresholds{});

  for (const auto& q : result.qubits) {
    std::printf("%-3s  E01 %.3f GHz  |alpha| %.1f MHz  Ej/Ec %.1f  range [%.3f, %.3f] GHz\n", q.name.c_str(),
                q.spectrum.e01.value(), 1e3 * std::abs(q.spectrum.anharmonicity_signed.value()), q.spectrum.ej_over_ec,
                q.f_min.value(), q.f_max.value());
  }
  for (const auto& c : result.couplings) {
    if (!c.report) continue;
    std::printf("%-6s g %.1f MHz  chi %.1f kHz\n", c.name.c_str(), 1e3 * c.report->g.value(),
                1e6 * c.report->chi_perturbative.value());
  }

  const auto curve = tuning_curve({40.0_nA, 3.0, 108.0_fF}, {0.0, 0.125, 0.25, 0.375, 0.5});
  for (std::size_t i = 0; i < curve.e01.size(); ++i) {
    std::printf("q2 at %.3f Phi0: %.4f GHz\n", curve.flux_points[i], curve.e01[i]);
  }

  const auto fit = fit_transmon({4.43_GHz, 0.198_GHz});
  std::printf("fit for 4.43 GHz / 198 MHz: C = %.2f fF, Ic = %.2f nA\n", fit.c_shunt.value(), fit.ic.value());
  return result.rules.overall_pass ? 0 : 1;
}
