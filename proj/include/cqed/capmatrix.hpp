#pragma once

// Maxwell capacitance matrices: CSV ingestion, Kron (Schur-complement) reduction and
// extraction of effective shunt / mutual capacitances.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqed/errors.hpp"
#include "cqed/linalg.hpp"

namespace cqed {

inline constexpr double kCapAsymmetryTolerance = 1e-6;  // relative
inline constexpr double kCapRowSumTolerance = 1e-6;     // fF
inline constexpr double kMaxReductionCondition = 1e12;

/// Reserved net name for the matrix reference conductor (SPICE-style node 0).
inline constexpr std::string_view kReferenceNet = "0";

struct CapacitanceMatrix {
  std::vector<std::string> net_names;
  Matrix values;  // fF

  std::size_t size() const noexcept { return net_names.size(); }

  std::size_t index_of(std::string_view name) const {
    auto it = std::find(net_names.begin(), net_names.end(), name);
    if (it == net_names.end()) throw ConfigurationError("unknown net '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - net_names.begin());
  }

  double operator()(std::string_view a, std::string_view b) const { return values(index_of(a), index_of(b)); }

  /// Checks the Maxwell invariants; symmetrizes asymmetries within tolerance.
  void validate_and_symmetrize() {
    const std::size_t n = size();
    if (n == 0) throw ValidationError("capacitance matrix has no nets");
    if (values.rows() != n || values.cols() != n) throw ValidationError("capacitance matrix shape does not match net count");
    std::set<std::string> seen;
    for (const auto& name : net_names) {
      if (name.empty()) throw ValidationError("empty net name");
      if (!seen.insert(name).second) throw ValidationError("duplicate net name '" + name + "'");
    }
    const auto cell = [&](std::size_t i, std::size_t j) { return "(" + net_names[i] + ", " + net_names[j] + ")"; };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(values(i, j))) throw ValidationError("non-finite capacitance at " + cell(i, j));
      }
      if (!(values(i, i) > 0.0)) {
        throw ValidationError("sign convention: diagonal entry at " + cell(i, i) + " must be positive, got " +
                              std::to_string(values(i, i)));
      }
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = values(i, j);
        const double b = values(j, i);
        if (std::abs(a - b) > kCapAsymmetryTolerance * std::max(std::abs(a), std::abs(b))) {
          throw ValidationError("asymmetry beyond tolerance at " + cell(i, j) + ": " + std::to_string(a) + " vs " +
                                std::to_string(b));
        }
        if (a > 0.0 || b > 0.0) {
          throw ValidationError("sign convention: off-diagonal entry at " + cell(i, j) + " must be <= 0, got " +
                                std::to_string(a > 0.0 ? a : b));
        }
        values(i, j) = values(j, i) = 0.5 * (a + b);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += values(i, j);
      if (sum < -kCapRowSumTolerance) {
        throw ValidationError("negative capacitance to ground for net '" + net_names[i] + "' (row sum " +
                              std::to_string(sum) + " fF)");
      }
    }
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Parses `# units: fF`, a header of net names, then N rows of N decimals.
inline CapacitanceMatrix parse_capacitance_matrix(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  auto lines = detail::split(text, '\n');
  while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("empty capacitance matrix file", 1, 1);

  {
    auto first = detail::trim(lines[0]);
    bool ok = first.starts_with('#');
    if (ok) {
      first.remove_prefix(1);
      first = detail::trim(first);
      ok = first.starts_with("units:") && detail::trim(first.substr(6)) == "fF";
    }
    if (!ok) throw ParseError("first line must be '# units: fF'", 1, 1);
  }
  if (lines.size() < 2) throw ParseError("missing net-name header", 2, 1);

  CapacitanceMatrix m;
  for (auto name : detail::split(lines[1], ',')) m.net_names.emplace_back(detail::trim(name));
  const std::size_t n = m.net_names.size();
  {
    std::set<std::string> seen;
    for (std::size_t j = 0; j < n; ++j) {
      if (m.net_names[j].empty()) throw ParseError("empty net name", 2, j + 1);
      if (!seen.insert(m.net_names[j]).second) throw ParseError("duplicate net name '" + m.net_names[j] + "'", 2, j + 1);
    }
  }
  if (lines.size() - 2 != n) {
    throw ParseError("expected " + std::to_string(n) + " matrix rows, found " + std::to_string(lines.size() - 2),
                     lines.size(), 1);
  }
  m.values = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cells = detail::split(lines[i + 2], ',');
    if (cells.size() != n) {
      throw ParseError("row '" + m.net_names[i] + "' has " + std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(n),
                       i + 3, 1);
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto cell = detail::trim(cells[j]);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("cell (" + m.net_names[i] + ", " + m.net_names[j] + ") is not a decimal: '" +
                             std::string(cell) + "'",
                         i + 3, j + 1);
      }
      m.values(i, j) = v;
    }
  }
  m.validate_and_symmetrize();
  return m;
}

inline std::string to_csv(const CapacitanceMatrix& m) {
  std::string out = "# units: fF\n";
  for (std::size_t j = 0; j < m.size(); ++j) out += (j ? "," : "") + m.net_names[j];
  out += '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out += (j ? "," : "") + detail::format_double(m.values(i, j));
    out += '\n';
  }
  return out;
}

namespace detail {

// Cholesky solve of S X = B for symmetric positive-definite S.
inline Matrix cholesky_solve(const Matrix& s, const Matrix& b) {
  const std::size_t n = s.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw ReductionError("eliminated block is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  Matrix x = b;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = x(i, c);
      for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x(k, c);
      x(i, c) = v / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double v = x(i, c);
      for (std::size_t k = i + 1; k < n; ++k) v -= l(k, i) * x(k, c);
      x(i, c) = v / l(i, i);
    }
  }
  return x;
}

inline CapacitanceMatrix submatrix(const CapacitanceMatrix& m, const std::vector<std::size_t>& idx) {
  CapacitanceMatrix out;
  out.values = Matrix(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    out.net_names.push_back(m.net_names[idx[a]]);
    for (std::size_t b = 0; b < idx.size(); ++b) out.values(a, b) = m.values(idx[a], idx[b]);
  }
  return out;
}

}  // namespace detail

/// Schur complement A - B D^-1 B^T eliminating every net not in `keep`; kept nets retain input order.
inline CapacitanceMatrix kron_reduce(const CapacitanceMatrix& m, const std::set<std::string>& keep) {
  if (keep.empty()) throw ConfigurationError("kron_reduce: keep set is empty");
  for (const auto& k : keep) (void)m.index_of(k);

  std::vector<std::size_t> kept;
  std::vector<std::size_t> eliminated;
  for (std::size_t i = 0; i < m.size(); ++i) (keep.contains(m.net_names[i]) ? kept : eliminated).push_back(i);
  if (eliminated.empty()) return m;

  const std::size_t nk = kept.size();
  const std::size_t ne = eliminated.size();
  Matrix d(ne, ne);
  Matrix bt(ne, nk);
  for (std::size_t a = 0; a < ne; ++a) {
    for (std::size_t b = 0; b < ne; ++b) d(a, b) = m.values(eliminated[a], eliminated[b]);
    for (std::size_t b = 0; b < nk; ++b) bt(a, b) = m.values(eliminated[a], kept[b]);
  }

  const auto spectrum = eigh_dense(d, ne);
  const double lo = spectrum.values.front();
  const double hi = spectrum.values.back();
  if (!(lo > 0.0) || hi / lo > kMaxReductionCondition) {
    throw ReductionError("kron_reduce: eliminated block is singular or ill-conditioned (eigenvalues " +
                         std::to_string(lo) + " .. " + std::to_string(hi) + ")");
  }
  const Matrix x = detail::cholesky_solve(d, bt);  // D^-1 B^T

  CapacitanceMatrix out = detail::submatrix(m, kept);
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < nk; ++j) {
      double corr = 0.0;
      for (std::size_t a = 0; a < ne; ++a) corr += bt(a, i) * x(a, j);
      out.values(i, j) -= corr;
    }
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = i + 1; j < nk; ++j) {
      const double avg = 0.5 * (out.values(i, j) + out.values(j, i));
      out.values(i, j) = out.values(j, i) = std::min(avg, 0.0);
    }
  out.validate_and_symmetrize();
  return out;
}

enum class NetRole { ground, qubit, coupler, resonator, drive_line, other };

struct CircuitCaps {
  std::map<std::string, double> shunt;                                  // fF to ground
  std::map<std::pair<std::string, std::string>, double> couplings;      // fF, key ordered (a < b)
};

/// Shorts ground-role nets to the reference, Kron-reduces onto the remaining role-bearing nets,
/// and reads shunts as row sums and couplings as negated off-diagonals.
inline CircuitCaps extract_circuit_caps(const CapacitanceMatrix& m, const std::map<std::string, NetRole>& roles) {
  bool has_ground = false;
  std::set<std::string> grounded;
  std::set<std::string> keep;
  for (const auto& [net, role] : roles) {
    if (role == NetRole::ground) {
      has_ground = true;
      if (net != kReferenceNet) {
        (void)m.index_of(net);
        grounded.insert(net);
      }
    } else {
      (void)m.index_of(net);
      keep.insert(net);
    }
  }
  if (!has_ground) throw ConfigurationError("extract_circuit_caps: no net has the ground role");
  if (keep.empty()) throw ConfigurationError("extract_circuit_caps: no non-ground role-bearing nets");

  std::vector<std::size_t> floating;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!grounded.contains(m.net_names[i])) floating.push_back(i);
  const CapacitanceMatrix reduced = kron_reduce(detail::submatrix(m, floating), keep);

  CircuitCaps caps;
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < reduced.size(); ++j) sum += reduced.values(i, j);
    caps.shunt[reduced.net_names[i]] = std::max(sum, 0.0);
    for (std::size_t j = i + 1; j < reduced.size(); ++j) {
      auto key = std::minmax(reduced.net_names[i], reduced.net_names[j]);
      caps.couplings[{key.first, key.second}] = -reduced.values(i, j);
    }
  }
  return caps;
}

}  // namespace cqed
