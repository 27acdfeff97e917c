#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/linalg.hpp"
#include "cqed/units.hpp"

namespace cqed {

struct TransmonParams {
  EnergyOverH ec;
  EnergyOverH ej;
  double ng = 0.0;  // offset charge, Cooper-pair units
  int ncut = 20;    // basis n in [-ncut, ncut]

  void validate() const {
    if (!(ec.value() > 0.0) || !std::isfinite(ec.value())) throw DomainError("TransmonParams: Ec must be positive");
    if (!(ej.value() >= 0.0) || !std::isfinite(ej.value())) throw DomainError("TransmonParams: Ej must be non-negative");
    if (!std::isfinite(ng)) throw DomainError("TransmonParams: ng must be finite");
    if (ncut < 5) throw DomainError("TransmonParams: ncut must be at least 5, got " + std::to_string(ncut));
  }
};

struct TransmonSpectrum {
  std::vector<double> levels;  // GHz, ground-referenced, ascending
  Frequency e01;
  Frequency e12;
  Frequency anharmonicity_signed;  // e12 - e01
  double charge_me_01 = 0.0;       // |<0|n|1>|
  double ej_over_ec = 0.0;
  int ncut_used = 0;
};

/// Charge-basis Hamiltonian: 4 Ec (n - ng)^2 on the diagonal, -Ej/2 hopping between neighbours.
inline SymTridiagonal build_charge_hamiltonian(const TransmonParams& p) {
  p.validate();
  const std::size_t dim = 2 * static_cast<std::size_t>(p.ncut) + 1;
  SymTridiagonal h;
  h.diag.resize(dim);
  h.offdiag.assign(dim - 1, -0.5 * p.ej.value());
  for (std::size_t i = 0; i < dim; ++i) {
    const double n = static_cast<double>(i) - p.ncut - p.ng;
    h.diag[i] = 4.0 * p.ec.value() * n * n;
  }
  return h;
}

namespace detail {

inline constexpr int kMaxNcut = 80;
inline constexpr double kCutoffTolerance = 1e-9;  // GHz

// Grow ncut by doubling until e01 is stable under a further doubling.
template <typename Solve>
auto with_converged_cutoff(TransmonParams p, std::size_t levels_needed, Solve&& solve) {
  p.validate();
  for (;;) {
    const int doubled = 2 * p.ncut;
    if (p.ncut > kMaxNcut) {
      throw CutoffError("transmon spectrum not converged up to ncut = " + std::to_string(kMaxNcut) +
                        " (Ec = " + std::to_string(p.ec.value()) + " GHz, Ej = " + std::to_string(p.ej.value()) +
                        " GHz)");
    }
    if (levels_needed > 2 * static_cast<std::size_t>(p.ncut) + 1) {
      p.ncut = doubled;
      continue;
    }
    auto coarse = solve(p);
    TransmonParams fine = p;
    fine.ncut = doubled;
    const auto check = eigh_tridiagonal(build_charge_hamiltonian(fine), 2, false);
    const double e01_fine = check.values[1] - check.values[0];
    const double e01_coarse = coarse.values[1] - coarse.values[0];
    if (std::abs(e01_fine - e01_coarse) < kCutoffTolerance) return std::pair{p, std::move(coarse)};
    p.ncut = doubled;
  }
}

}  // namespace detail

/// Diagonalize the charge-basis Hamiltonian, returning the `m` lowest ground-referenced levels.
inline TransmonSpectrum transmon_spectrum(const TransmonParams& params, std::size_t m = 3) {
  if (m < 3) throw DomainError("transmon_spectrum: at least 3 levels are required");
  auto [p, eig] = detail::with_converged_cutoff(params, m, [m](const TransmonParams& q) {
    return eigh_tridiagonal(build_charge_hamiltonian(q), m, true);
  });

  TransmonSpectrum s;
  s.ncut_used = p.ncut;
  s.levels.resize(m);
  for (std::size_t i = 0; i < m; ++i) s.levels[i] = eig.values[i] - eig.values[0];
  s.e01 = Frequency(s.levels[1]);
  s.e12 = Frequency(s.levels[2] - s.levels[1]);
  s.anharmonicity_signed = s.e12 - s.e01;
  double me = 0.0;
  const auto& v0 = eig.vectors[0];
  const auto& v1 = eig.vectors[1];
  for (std::size_t i = 0; i < v0.size(); ++i) me += v0[i] * (static_cast<double>(i) - p.ncut) * v1[i];
  s.charge_me_01 = std::abs(me);
  s.ej_over_ec = p.ej / p.ec;
  return s;
}

/// Eigenvalue-only variant for inner loops: (e01, e12 - e01).
inline std::pair<Frequency, Frequency> transmon_e01_alpha(const TransmonParams& params) {
  auto [p, eig] = detail::with_converged_cutoff(params, 3, [](const TransmonParams& q) {
    return eigh_tridiagonal(build_charge_hamiltonian(q), 3, false);
  });
  const double e01 = eig.values[1] - eig.values[0];
  const double e12 = eig.values[2] - eig.values[1];
  return {Frequency(e01), Frequency(e12 - e01)};
}

/// Lowest `m` eigenstates with the charge operator expressed in that eigenbasis.
struct TransmonEigensystem {
  std::vector<double> levels;  // GHz, ground-referenced
  Matrix charge;               // <i|n|j>, m x m
};

inline TransmonEigensystem transmon_eigensystem(const TransmonParams& params, std::size_t m) {
  if (m < 2) throw DomainError("transmon_eigensystem: at least 2 levels are required");
  auto [p, eig] = detail::with_converged_cutoff(params, m, [m](const TransmonParams& q) {
    return eigh_tridiagonal(build_charge_hamiltonian(q), m, true);
  });
  TransmonEigensystem out;
  out.levels.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.levels[i] = eig.values[i] - eig.values[0];
  out.charge = Matrix(m, m);
  const std::size_t dim = eig.vectors[0].size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      double me = 0.0;
      for (std::size_t b = 0; b < dim; ++b)
        me += eig.vectors[i][b] * (static_cast<double>(b) - p.ncut) * eig.vectors[j][b];
      out.charge(i, j) = out.charge(j, i) = me;
    }
  return out;
}

struct PerturbativeSpectrum {
  Frequency e01_est;
  Frequency alpha_est;  // signed, -Ec
  double charge_me_est = 0.0;
};

/// Leading-order transmon asymptotics; valid for Ej/Ec > 20.
inline PerturbativeSpectrum perturbative_spectrum(EnergyOverH ec, EnergyOverH ej) {
  if (!(ec.value() > 0.0)) throw DomainError("perturbative_spectrum: Ec must be positive");
  const double ratio = ej / ec;
  if (!(ratio > 20.0)) {
    throw DomainError("perturbative_spectrum: Ej/Ec = " + std::to_string(ratio) + " is outside the transmon regime (> 20)");
  }
  PerturbativeSpectrum out;
  out.e01_est = Frequency(std::sqrt(8.0 * ej.value() * ec.value()) - ec.value());
  out.alpha_est = -ec;
  out.charge_me_est = std::pow(ratio / 8.0, 0.25) / std::sqrt(2.0);
  return out;
}

}  // namespace cqed
