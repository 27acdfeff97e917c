#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/transmon.hpp"
#include "cqed/units.hpp"

namespace cqed {

struct SquidParams {
  Current ic_total;           // sum over both junctions
  double width_ratio = 1.0;   // W1/W2 >= 1
  Capacitance shunt_capacitance;

  void validate() const {
    if (!(ic_total.value() > 0.0)) throw DomainError("SquidParams: total critical current must be positive");
    if (!(width_ratio >= 1.0)) throw DomainError("SquidParams: width ratio must be >= 1");
    if (!(shunt_capacitance.value() > 0.0)) throw DomainError("SquidParams: shunt capacitance must be positive");
  }
};

struct TuningCurve {
  std::vector<double> flux_points;    // Phi0
  std::vector<double> e01;            // GHz
  std::vector<double> anharmonicity;  // GHz, signed
};

/// d = (r - 1)/(r + 1) with critical currents proportional to junction width.
inline double junction_asymmetry(double width_ratio) {
  if (!(width_ratio >= 1.0) || !std::isfinite(width_ratio)) {
    throw DomainError("junction_asymmetry: width ratio must be finite and >= 1 (orient W1 as the wider junction)");
  }
  return (width_ratio - 1.0) / (width_ratio + 1.0);
}

/// Asymmetric-SQUID Ej(Phi) = EjSigma * sqrt(cos^2(pi Phi) + d^2 sin^2(pi Phi)).
inline EnergyOverH effective_josephson_energy(EnergyOverH ej_sigma, double d, Flux flux) {
  const double x = std::numbers::pi * flux.value();
  const double c = std::cos(x);
  const double s = std::sin(x);
  return ej_sigma * std::sqrt(c * c + d * d * s * s);
}

inline TuningCurve tuning_curve(const SquidParams& sq, const std::vector<double>& flux_grid) {
  sq.validate();
  if (flux_grid.empty()) throw DomainError("tuning_curve: flux grid is empty");
  const auto ec = charging_energy(sq.shunt_capacitance);
  const auto ej_sigma = josephson_energy(sq.ic_total);
  const double d = junction_asymmetry(sq.width_ratio);

  TuningCurve curve;
  curve.flux_points = flux_grid;
  curve.e01.reserve(flux_grid.size());
  curve.anharmonicity.reserve(flux_grid.size());
  for (double phi : flux_grid) {
    const auto s = transmon_spectrum({ec, effective_josephson_energy(ej_sigma, d, Flux(phi))});
    curve.e01.push_back(s.e01.value());
    curve.anharmonicity.push_back(s.anharmonicity_signed.value());
  }
  return curve;
}

struct FrequencyExtrema {
  Frequency f_max;  // Phi = 0
  Frequency f_min;  // Phi = Phi0/2
};

inline FrequencyExtrema frequency_extrema(const SquidParams& sq) {
  sq.validate();
  const auto ec = charging_energy(sq.shunt_capacitance);
  const auto ej_sigma = josephson_energy(sq.ic_total);
  const double d = junction_asymmetry(sq.width_ratio);
  return {transmon_spectrum({ec, ej_sigma}).e01, transmon_spectrum({ec, ej_sigma * d}).e01};
}

}  // namespace cqed
