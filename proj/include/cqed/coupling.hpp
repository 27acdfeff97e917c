#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "cqed/errors.hpp"
#include "cqed/linalg.hpp"
#include "cqed/resonator.hpp"
#include "cqed/transmon.hpp"
#include "cqed/units.hpp"

namespace cqed {

struct CouplingParams {
  Capacitance c_coupling;
  Capacitance c_qubit;
  ResonatorParams resonator;
  TransmonSpectrum qubit_spectrum;

  void validate() const {
    if (!(c_coupling.value() >= 0.0)) throw DomainError("CouplingParams: coupling capacitance must be >= 0");
    if (!(c_qubit.value() > 0.0)) throw DomainError("CouplingParams: qubit capacitance must be positive");
  }
};

struct CouplingReport {
  double beta = 0.0;
  double v_rms = 0.0;  // volts
  Frequency g;
  Frequency detuning;  // f_q - f_r
  Frequency chi_perturbative;  // second order over all transmon levels
  Frequency chi_closed_form;   // g^2 alpha / (Delta (Delta + alpha))
  std::optional<Frequency> chi_exact;
};

/// Voltage-division fraction Cc / (Cc + Cq).
inline double participation_beta(Capacitance c_coupling, Capacitance c_qubit) {
  if (!(c_qubit.value() > 0.0)) throw DomainError("participation_beta: qubit capacitance must be positive");
  if (!(c_coupling.value() >= 0.0)) throw DomainError("participation_beta: coupling capacitance must be >= 0");
  return c_coupling.value() / (c_coupling.value() + c_qubit.value());
}

/// Zero-point voltage sqrt(h f / (2 C)), in volts.
inline double vacuum_rms_voltage(Frequency f_r, Capacitance c_r) {
  if (!(f_r.value() > 0.0)) throw DomainError("vacuum_rms_voltage: frequency must be positive");
  if (!(c_r.value() > 0.0)) throw DomainError("vacuum_rms_voltage: capacitance must be positive");
  return std::sqrt(PhysicalConstants::h * si::hertz(f_r) / (2.0 * si::farads(c_r)));
}

/// g/h = 2 e beta V_rms <0|n|1> / h.
inline Frequency coupling_g(const CouplingParams& p) {
  p.validate();
  const double beta = participation_beta(p.c_coupling, p.c_qubit);
  const double v = vacuum_rms_voltage(resonant_frequency(p.resonator), p.resonator.c_total);
  return from_hertz(2.0 * PhysicalConstants::e * beta * v * p.qubit_spectrum.charge_me_01 / PhysicalConstants::h);
}

inline constexpr double kDegeneracyThreshold = 1e-6;  // GHz

/// chi = g^2 alpha / (Delta (Delta + alpha)), Delta = f_q - f_r, alpha signed.
inline Frequency dispersive_shift(Frequency g, Frequency f_q, Frequency f_r, Frequency alpha_signed) {
  const double delta = (f_q - f_r).value();
  const double alpha = alpha_signed.value();
  if (std::abs(delta) < kDegeneracyThreshold) {
    throw DegeneracyError("dispersive_shift: qubit and resonator are resonant (|Delta| = " + std::to_string(std::abs(delta)) + " GHz)");
  }
  if (std::abs(delta + alpha) < kDegeneracyThreshold) {
    throw DegeneracyError("dispersive_shift: 1-2 transition is resonant with the resonator (straddling point)");
  }
  return Frequency(g.value() * g.value() * alpha / (delta * (delta + alpha)));
}

/// Second-order dispersive shift using the transmon's own charge matrix elements, including
/// counter-rotating terms: chi = (T1 - T0)/2 with
/// Tj = sum_{j' != j} g_jj'^2 [1/(E_j - E_j' + f_r) + 1/(E_j - E_j' - f_r)], g_jj' = g n_jj'/n01.
inline Frequency dispersive_shift_multilevel(const TransmonEigensystem& sys, Frequency f_r, Frequency g) {
  const std::size_t m = sys.levels.size();
  if (m < 3) throw DomainError("dispersive_shift_multilevel: need at least 3 transmon levels");
  const double n01 = std::abs(sys.charge(0, 1));
  if (!(n01 > 0.0)) throw DomainError("dispersive_shift_multilevel: vanishing <0|n|1>");
  const double fr = f_r.value();
  const auto pull = [&](std::size_t j) {
    double t = 0.0;
    for (std::size_t jp = 0; jp < m; ++jp) {
      if (jp == j) continue;
      const double gjj = g.value() * sys.charge(j, jp) / n01;
      if (gjj == 0.0) continue;
      const double gap = sys.levels[j] - sys.levels[jp];
      if (std::abs(gap + fr) < kDegeneracyThreshold || std::abs(gap - fr) < kDegeneracyThreshold) {
        throw DegeneracyError("dispersive_shift_multilevel: transition " + std::to_string(j) + "-" +
                              std::to_string(jp) + " is resonant with the resonator");
      }
      t += gjj * gjj * (1.0 / (gap + fr) + 1.0 / (gap - fr));
    }
    return t;
  };
  return Frequency(0.5 * (pull(1) - pull(0)));
}

/// Dispersive shift from exact diagonalization of transmon (x) oscillator with charge coupling
/// (g / n01) n (a + a^dag). Dressed states are labeled by maximum overlap with bare states.
inline Frequency chi_exact_oracle(const TransmonParams& qubit, Frequency f_r, Frequency g, std::size_t qubit_levels = 6,
                                  std::size_t photon_levels = 8) {
  if (qubit_levels < 3 || photon_levels < 3) {
    throw DomainError("chi_exact_oracle: need at least 3 qubit levels and 3 photon levels");
  }
  const auto sys = transmon_eigensystem(qubit, qubit_levels);
  const double n01 = std::abs(sys.charge(0, 1));
  if (!(n01 > 0.0)) throw DomainError("chi_exact_oracle: vanishing <0|n|1>");
  const double lambda = g.value() / n01;

  const std::size_t q = qubit_levels;
  const std::size_t p = photon_levels;
  const auto index = [p](std::size_t j, std::size_t k) { return j * p + k; };
  Matrix h(q * p, q * p);
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t k = 0; k < p; ++k) h(index(j, k), index(j, k)) = sys.levels[j] + f_r.value() * static_cast<double>(k);
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t jj = 0; jj < q; ++jj) {
      const double njj = lambda * sys.charge(j, jj);
      if (njj == 0.0) continue;
      for (std::size_t k = 0; k + 1 < p; ++k) {
        const double v = njj * std::sqrt(static_cast<double>(k + 1));
        h(index(j, k), index(jj, k + 1)) = v;
        h(index(jj, k + 1), index(j, k)) = v;
      }
    }

  const auto eig = eigh_dense(h, q * p);
  const auto dressed_energy = [&](std::size_t j, std::size_t k) {
    const std::size_t bare = index(j, k);
    std::size_t best = 0;
    double best_overlap = -1.0;
    for (std::size_t s = 0; s < eig.values.size(); ++s) {
      const double o = eig.vectors[s][bare] * eig.vectors[s][bare];
      if (o > best_overlap) {
        best_overlap = o;
        best = s;
      }
    }
    if (best_overlap < 0.5) {
      throw LabelingError("chi_exact_oracle: bare state |" + std::to_string(j) + "," + std::to_string(k) +
                          "> has maximum dressed overlap " + std::to_string(best_overlap) + " < 0.5");
    }
    return eig.values[best];
  };
  const double e00 = dressed_energy(0, 0);
  const double e01 = dressed_energy(0, 1);
  const double e10 = dressed_energy(1, 0);
  const double e11 = dressed_energy(1, 1);
  return Frequency(0.5 * ((e11 - e10) - (e01 - e00)));
}

}  // namespace cqed
