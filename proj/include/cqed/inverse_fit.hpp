#pragma once

// Inverse design by nested bisection. At fixed C, f01 rises monotonically with Ic (inner loop);
// at fixed f01, |alpha| falls monotonically with C (outer loop).

#include <cmath>
#include <numbers>
#include <optional>

#include "cqed/errors.hpp"
#include "cqed/resonator.hpp"
#include "cqed/transmon.hpp"
#include "cqed/units.hpp"

namespace cqed {

struct TransmonTarget {
  Frequency f01_target;
  Frequency alpha_target_magnitude;
  Frequency tolerance{1e-6};

  void validate() const {
    if (!(f01_target.value() > 0.0)) throw DomainError("TransmonTarget: f01 must be positive");
    if (!(alpha_target_magnitude.value() > 0.0)) throw DomainError("TransmonTarget: anharmonicity must be positive");
    if (!(tolerance.value() > 0.0)) throw DomainError("TransmonTarget: tolerance must be positive");
  }
};

struct FitBrackets {
  Capacitance c_lo{20.0};
  Capacitance c_hi{500.0};
  Current ic_lo{5.0};
  Current ic_hi{200.0};
};

struct TransmonFit {
  Capacitance c_shunt;
  Current ic;
  Frequency f01;
  Frequency alpha_magnitude;
};

namespace detail {

inline constexpr int kMaxBisections = 200;

enum class InnerOutcome { solved, target_too_high, target_too_low };

struct InnerSolution {
  InnerOutcome outcome;
  Current ic;
  Frequency f01;
  Frequency alpha_magnitude;
};

inline std::pair<Frequency, Frequency> forward(Capacitance c, Current ic) {
  const auto [f01, alpha] = transmon_e01_alpha({charging_energy(c), josephson_energy(ic)});
  return {f01, Frequency(std::abs(alpha.value()))};
}

// Bisect Ic at fixed C until f01 matches the target well inside the tolerance.
inline InnerSolution solve_ic(Capacitance c, Frequency target, double tol, const FitBrackets& b) {
  double lo = b.ic_lo.value();
  double hi = b.ic_hi.value();
  auto [f_lo, a_lo] = forward(c, Current(lo));
  if (f_lo.value() > target.value()) return {InnerOutcome::target_too_low, Current(lo), f_lo, a_lo};
  auto [f_hi, a_hi] = forward(c, Current(hi));
  if (f_hi.value() < target.value()) return {InnerOutcome::target_too_high, Current(hi), f_hi, a_hi};

  InnerSolution best{InnerOutcome::solved, Current(lo), f_lo, a_lo};
  for (int i = 0; i < kMaxBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    const auto [f, a] = forward(c, Current(mid));
    best = {InnerOutcome::solved, Current(mid), f, a};
    if (std::abs(f.value() - target.value()) < 1e-3 * tol || mid == lo || mid == hi) break;
    (f.value() < target.value() ? lo : hi) = mid;
  }
  return best;
}

}  // namespace detail

/// Finds (C, Ic) reproducing the target f01 and |alpha| within the target tolerance.
inline TransmonFit fit_transmon(const TransmonTarget& t, const FitBrackets& b = {}) {
  t.validate();
  const double tol = t.tolerance.value();
  double lo = b.c_lo.value();
  double hi = b.c_hi.value();

  // Sign convention of `excess`: positive means C is below the solution.
  const auto excess = [&](double c) {
    const auto s = detail::solve_ic(Capacitance(c), t.f01_target, tol, b);
    switch (s.outcome) {
      case detail::InnerOutcome::target_too_low: return std::pair{1.0, s};
      case detail::InnerOutcome::target_too_high: return std::pair{-1.0, s};
      case detail::InnerOutcome::solved: break;
    }
    return std::pair{s.alpha_magnitude.value() - t.alpha_target_magnitude.value(), s};
  };

  std::optional<std::pair<double, detail::InnerSolution>> best;
  double best_c = lo;
  for (int i = 0; i < detail::kMaxBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    auto [ex, sol] = excess(mid);
    if (sol.outcome == detail::InnerOutcome::solved) {
      if (!best || std::abs(ex) < std::abs(best->first)) {
        best = std::pair{ex, sol};
        best_c = mid;
      }
      if (std::abs(ex) < 1e-3 * tol) break;
    }
    if (mid == lo || mid == hi) break;
    (ex > 0.0 ? lo : hi) = mid;
  }

  if (!best || std::abs(best->first) > tol ||
      std::abs(best->second.f01.value() - t.f01_target.value()) > tol) {
    throw InfeasibleError("fit_transmon: targets f01 = " + std::to_string(t.f01_target.value()) +
                              " GHz, |alpha| = " + std::to_string(t.alpha_target_magnitude.value()) +
                              " GHz are not reachable inside the capacitance bracket (fF)",
                          lo, hi);
  }
  const Capacitance c(best_c);
  const double ratio = josephson_energy(best->second.ic) / charging_energy(c);
  if (ratio < 20.0 || ratio > 500.0) {
    throw InfeasibleError("fit_transmon: solution Ej/Ec = " + std::to_string(ratio) +
                              " lies outside the transmon basin [20, 500]",
                          20.0, 500.0);
  }
  return {c, best->second.ic, best->second.f01, best->second.alpha_magnitude};
}

/// Closed-form inverse of resonant_frequency for the capacitance.
inline Capacitance fit_resonator(Frequency f_target, Inductance l_fixed, ResonatorMode mode) {
  if (!(f_target.value() > 0.0)) throw DomainError("fit_resonator: target frequency must be positive");
  if (!(l_fixed.value() > 0.0)) throw DomainError("fit_resonator: inductance must be positive");
  const double k = detail::mode_factor(mode) * si::hertz(f_target);
  return Capacitance(1.0 / (k * k * si::henries(l_fixed)) * 1e15);
}

}  // namespace cqed
