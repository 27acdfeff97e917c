#pragma once

#include <cmath>
#include <compare>
#include <numbers>

#include "cqed/errors.hpp"

namespace cqed {

/// Exact SI-2019 constants. The flux quantum is derived, never stored.
struct PhysicalConstants {
  static constexpr double e = 1.602176634e-19;  // C
  static constexpr double h = 6.62607015e-34;   // J s
  static constexpr double c = 299792458.0;      // m/s
  static constexpr double flux_quantum = h / (2.0 * e);  // Wb
};

inline constexpr const char* kConstantsVersion = "SI-2019";

/// A finite scalar tagged with its unit. Arithmetic is limited to what keeps the unit intact.
template <typename Tag>
class Quantity {
 public:
  constexpr Quantity() = default;
  constexpr explicit Quantity(double v) : value_(v) {}

  constexpr double value() const noexcept { return value_; }

  constexpr auto operator<=>(const Quantity&) const = default;

  constexpr Quantity operator+(Quantity o) const { return Quantity(value_ + o.value_); }
  constexpr Quantity operator-(Quantity o) const { return Quantity(value_ - o.value_); }
  constexpr Quantity operator-() const { return Quantity(-value_); }
  constexpr Quantity operator*(double s) const { return Quantity(value_ * s); }
  constexpr Quantity operator/(double s) const { return Quantity(value_ / s); }
  constexpr double operator/(Quantity o) const { return value_ / o.value_; }
  friend constexpr Quantity operator*(double s, Quantity q) { return q * s; }

 private:
  double value_ = 0.0;
};

struct FemtofaradTag {};
struct NanohenryTag {};
struct NanoampereTag {};
struct GigahertzTag {};
struct MicrometerTag {};
struct FluxQuantumTag {};

using Capacitance = Quantity<FemtofaradTag>;  // fF
using Inductance = Quantity<NanohenryTag>;    // nH
using Current = Quantity<NanoampereTag>;      // nA
using Frequency = Quantity<GigahertzTag>;     // GHz
using EnergyOverH = Frequency;                // E/h in GHz
using Length = Quantity<MicrometerTag>;       // um
using Flux = Quantity<FluxQuantumTag>;        // units of Phi0

namespace literals {
constexpr Capacitance operator""_fF(long double v) { return Capacitance(static_cast<double>(v)); }
constexpr Capacitance operator""_fF(unsigned long long v) { return Capacitance(static_cast<double>(v)); }
constexpr Inductance operator""_nH(long double v) { return Inductance(static_cast<double>(v)); }
constexpr Inductance operator""_nH(unsigned long long v) { return Inductance(static_cast<double>(v)); }
constexpr Current operator""_nA(long double v) { return Current(static_cast<double>(v)); }
constexpr Current operator""_nA(unsigned long long v) { return Current(static_cast<double>(v)); }
constexpr Frequency operator""_GHz(long double v) { return Frequency(static_cast<double>(v)); }
constexpr Frequency operator""_GHz(unsigned long long v) { return Frequency(static_cast<double>(v)); }
constexpr Length operator""_um(long double v) { return Length(static_cast<double>(v)); }
constexpr Length operator""_um(unsigned long long v) { return Length(static_cast<double>(v)); }
}  // namespace literals

namespace si {
constexpr double farads(Capacitance c) { return c.value() * 1e-15; }
constexpr double henries(Inductance l) { return l.value() * 1e-9; }
constexpr double amperes(Current i) { return i.value() * 1e-9; }
constexpr double hertz(Frequency f) { return f.value() * 1e9; }
constexpr double meters(Length l) { return l.value() * 1e-6; }
}  // namespace si

inline Frequency from_hertz(double hz) { return Frequency(hz * 1e-9); }

/// E_C / h = e^2 / (2 C h).
inline EnergyOverH charging_energy(Capacitance c_shunt) {
  if (!std::isfinite(c_shunt.value()) || c_shunt.value() <= 0.0) {
    throw DomainError("charging_energy: capacitance must be finite and positive, got " +
                      std::to_string(c_shunt.value()) + " fF");
  }
  constexpr double e = PhysicalConstants::e;
  return from_hertz(e * e / (2.0 * si::farads(c_shunt) * PhysicalConstants::h));
}

/// E_J / h = Phi0 I_c / (2 pi h) = I_c / (4 pi e).
inline EnergyOverH josephson_energy(Current i_c) {
  if (!std::isfinite(i_c.value()) || i_c.value() < 0.0) {
    throw DomainError("josephson_energy: critical current must be finite and non-negative, got " +
                      std::to_string(i_c.value()) + " nA");
  }
  return from_hertz(si::amperes(i_c) / (4.0 * std::numbers::pi * PhysicalConstants::e));
}

}  // namespace cqed
