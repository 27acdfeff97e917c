#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "cqed/errors.hpp"
#include "cqed/units.hpp"

namespace cqed {

enum class ResonatorMode { quarter_wave, half_wave, lumped };

inline std::string_view to_string(ResonatorMode m) {
  switch (m) {
    case ResonatorMode::quarter_wave: return "quarter_wave";
    case ResonatorMode::half_wave: return "half_wave";
    case ResonatorMode::lumped: return "lumped";
  }
  return "?";
}

inline std::optional<ResonatorMode> resonator_mode_from_string(std::string_view s) {
  if (s == "quarter_wave") return ResonatorMode::quarter_wave;
  if (s == "half_wave") return ResonatorMode::half_wave;
  if (s == "lumped") return ResonatorMode::lumped;
  return std::nullopt;
}

inline constexpr double kDefaultSubstrateEpsilon = 11.45;

struct ResonatorParams {
  Inductance l_total;
  Capacitance c_total;
  ResonatorMode mode = ResonatorMode::quarter_wave;
  std::optional<Length> length;
  std::optional<double> substrate_epsilon;

  void validate() const {
    if (!(l_total.value() > 0.0) || !std::isfinite(l_total.value()))
      throw DomainError("ResonatorParams: inductance must be finite and positive");
    if (!(c_total.value() > 0.0) || !std::isfinite(c_total.value()))
      throw DomainError("ResonatorParams: capacitance must be finite and positive");
    if (length && !(length->value() > 0.0)) throw DomainError("ResonatorParams: length must be positive");
  }
};

namespace detail {
// f = 1 / (mode_factor * sqrt(L C))
inline double mode_factor(ResonatorMode m) {
  switch (m) {
    case ResonatorMode::quarter_wave: return 4.0;
    case ResonatorMode::half_wave: return 2.0;
    case ResonatorMode::lumped: return 2.0 * std::numbers::pi;
  }
  return 4.0;
}
}  // namespace detail

/// Fundamental frequency from the extracted totals L and C.
inline Frequency resonant_frequency(const ResonatorParams& r) {
  r.validate();
  const double lc = si::henries(r.l_total) * si::farads(r.c_total);
  return from_hertz(1.0 / (detail::mode_factor(r.mode) * std::sqrt(lc)));
}

/// Quarter-wave CPW estimate c / (4 l sqrt(eps_eff)) with eps_eff = (eps_sub + 1)/2.
inline Frequency cpw_analytic_frequency(Length length, double substrate_epsilon) {
  if (!(length.value() > 0.0)) throw DomainError("cpw_analytic_frequency: length must be positive");
  if (!(substrate_epsilon >= 1.0)) throw DomainError("cpw_analytic_frequency: substrate permittivity must be >= 1");
  const double eps_eff = 0.5 * (substrate_epsilon + 1.0);
  return from_hertz(PhysicalConstants::c / (4.0 * si::meters(length) * std::sqrt(eps_eff)));
}

}  // namespace cqed
