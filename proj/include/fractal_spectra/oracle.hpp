#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fractal_spectra/energy.hpp"

namespace fractal_spectra {

enum class BoundaryCondition { kDirichlet, kNeumann };

namespace detail {

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below x,
/// by the Sturm sign count of the shifted LDL^T recurrence.
inline std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                               double x) {
  std::size_t count = 0;
  double q = diag[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    const double e = off[i - 1];
    if (q == 0.0) q = 1e-300;  // graze: nudge off the breakdown
    q = diag[i] - x - e * e / q;
    if (q < 0) ++count;
  }
  return count;
}

}  // namespace detail

/// All eigenvalues of a symmetric tridiagonal matrix, ascending, by bisection
/// on Sturm counts. Brackets are certified by the counts themselves; shared
/// interval refinement keeps the work near O(n^2) over all eigenvalues.
inline std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& diag,
                                                   const std::vector<double>& off) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (off.size() + 1 != n) throw std::invalid_argument("tridiagonal_eigenvalues: band size");
  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0;
    if (i > 0) r += std::fabs(off[i - 1]);
    if (i + 1 < n) r += std::fabs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  lo -= 1e-12;
  hi += 1e-12;
  const double width_tol = 1e-14 * std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));

  std::vector<double> eig(n);
  struct Task {
    double lo, hi;
    std::size_t klo, khi;  // eigenvalue indices in [klo, khi) lie in (lo, hi]
  };
  std::vector<Task> stack{{lo, hi, 0, n}};
  while (!stack.empty()) {
    Task t = stack.back();
    stack.pop_back();
    if (t.hi - t.lo <= width_tol) {
      const double v = 0.5 * (t.lo + t.hi);
      for (std::size_t k = t.klo; k < t.khi; ++k) eig[k] = v;
      continue;
    }
    const double mid = 0.5 * (t.lo + t.hi);
    const std::size_t c = std::clamp(detail::sturm_count(diag, off, mid), t.klo, t.khi);
    if (c > t.klo) stack.push_back({t.lo, mid, t.klo, c});
    if (c < t.khi) stack.push_back({mid, t.hi, c, t.khi});
  }
  return eig;
}

/// Eigenvector by inverse iteration at a converged eigenvalue; the nearly
/// singular shifted solve is done with partial pivoting on the tridiagonal
/// band. Normalized to unit sup norm with positive first nonzero entry.
inline std::vector<double> tridiagonal_eigenvector(const std::vector<double>& diag,
                                                   const std::vector<double>& off,
                                                   double lambda) {
  const std::size_t n = diag.size();
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = unif(rng);

  for (int iter = 0; iter < 4; ++iter) {
    // LU with row swaps on [lower | diag-lambda | upper]; fill-in adds one band
    std::vector<double> d(n), u1(n, 0.0), u2(n, 0.0), low(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = diag[i] - lambda;
      if (i + 1 < n) u1[i] = off[i];
      if (i > 0) low[i] = off[i - 1];
    }
    std::vector<double> b = v;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::fabs(low[i + 1]) > std::fabs(d[i])) {
        std::swap(d[i], low[i + 1]);
        std::swap(u1[i], d[i + 1]);
        std::swap(u2[i], u1[i + 1]);
        std::swap(b[i], b[i + 1]);
      }
      if (d[i] == 0.0) d[i] = 1e-300;
      const double f = low[i + 1] / d[i];
      d[i + 1] -= f * u1[i];
      u1[i + 1] -= f * u2[i];
      b[i + 1] -= f * b[i];
    }
    if (d[n - 1] == 0.0) d[n - 1] = 1e-300;
    for (std::size_t i = n; i-- > 0;) {
      double s = b[i];
      if (i + 1 < n) s -= u1[i] * b[i + 1];
      if (i + 2 < n) s -= u2[i] * b[i + 2];
      b[i] = s / d[i];
    }
    double norm = 0.0;
    for (double x : b) norm = std::max(norm, std::fabs(x));
    for (auto& x : b) x /= norm;
    v = std::move(b);
  }
  for (double x : v) {
    if (x != 0.0) {
      if (x < 0)
        for (auto& y : v) y = -y;
      break;
    }
  }
  return v;
}

struct DenseSpectrum {
  int level = 0;
  BoundaryCondition bc = BoundaryCondition::kDirichlet;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;  // filled only on request
};

/// Spectrum of the explicit path Laplacian at level m: the (8^m - 1)-point
/// interior matrix for Dirichlet data, or the (8^m + 1)-point matrix with
/// unit corner diagonals for Neumann data.
inline DenseSpectrum dense_spectrum(int m, BoundaryCondition bc, bool with_vectors = false) {
  if (m < 1) throw std::invalid_argument("dense_spectrum: level must be >= 1");
  if (m > 4) throw std::length_error("dense_spectrum: dense solve capped at level 4");
  const std::size_t full = static_cast<std::size_t>(vertex_count(m));
  const std::size_t n = bc == BoundaryCondition::kDirichlet ? full - 2 : full;
  std::vector<double> diag(n, 2.0), off(n - 1, -1.0);
  if (bc == BoundaryCondition::kNeumann) diag.front() = diag.back() = 1.0;
  DenseSpectrum s;
  s.level = m;
  s.bc = bc;
  s.eigenvalues = tridiagonal_eigenvalues(diag, off);
  if (with_vectors) {
    s.eigenvectors.reserve(n);
    for (double lam : s.eigenvalues)
      s.eigenvectors.push_back(tridiagonal_eigenvector(diag, off, lam));
  }
  return s;
}

/// Trigonometric eigenvalues of the Dirichlet path: 2 - 2 cos(k pi / 8^m),
/// evaluated as 4 sin^2 to stay accurate near zero.
inline double closed_form_eigenvalue(int m, std::uint64_t k) {
  if (m < 0 || m > 10) throw std::invalid_argument("closed_form_eigenvalue: level out of range");
  const double cells = std::ldexp(1.0, 3 * m);  // 8^m
  const double s = std::sin(static_cast<double>(k) * 3.14159265358979323846 / (2.0 * cells));
  return 4.0 * s * s;
}

inline std::vector<double> closed_form_spectrum(int m) {
  if (m < 1 || m > 8) throw std::invalid_argument("closed_form_spectrum: level out of range");
  const std::uint64_t n = vertex_count(m) - 2;
  std::vector<double> v(n);
  for (std::uint64_t k = 1; k <= n; ++k) v[k - 1] = closed_form_eigenvalue(m, k);
  return v;
}

/// Determinant of the n-point interior eigenvalue matrix (diagonal 2-lambda,
/// off-diagonal -1) by the continuant recurrence.
inline double path_determinant(int n, double lambda) {
  double prev = 1.0, cur = 2.0 - lambda;
  for (int i = 2; i <= n; ++i) {
    const double next = (2.0 - lambda) * cur - prev;
    prev = cur;
    cur = next;
  }
  return n == 0 ? 1.0 : cur;
}

struct EigenvectorCheck {
  double lambda = 0.0;
  double residual = 0.0;
  std::string label;
};

struct EigenvectorReport {
  int level = 0;
  std::vector<EigenvectorCheck> checks;
  std::vector<std::size_t> permutation;  // printed position -> arc-order interior index

  double max_residual() const {
    double r = 0;
    for (const auto& c : checks) r = std::max(r, c.residual);
    return r;
  }
};

namespace detail {

/// The seven level-1 interior eigenvectors in arc order, as printed pattern
/// families parameterized by eps.
inline std::vector<std::pair<double, std::vector<double>>> level1_eigenvectors() {
  const double s2 = std::sqrt(2.0);
  std::vector<std::pair<double, std::vector<double>>> out;
  out.push_back({2.0, {-1, 0, 1, 0, -1, 0, 1}});
  for (double eps : {1.0, -1.0}) {
    out.push_back({2.0 + eps * s2, {-1, eps * s2, -1, 0, 1, -eps * s2, 1}});
    const double a = std::sqrt(2.0 + s2);
    out.push_back({2.0 + eps * a,
                   {1, -eps * a, 1 + s2, -eps * std::sqrt(2.0 * (2.0 + s2)), 1 + s2, -eps * a, 1}});
    const double b = std::sqrt(2.0 - s2);
    out.push_back({2.0 + eps * b,
                   {1, -eps * b, 1 - s2, eps * std::sqrt(2.0 * (2.0 - s2)), 1 - s2, -eps * b, 1}});
  }
  return out;
}

inline double interior_residual(const std::vector<double>& v, double lambda) {
  double r = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = (2.0 - lambda) * v[i];
    if (i > 0) s -= v[i - 1];
    if (i + 1 < n) s -= v[i + 1];
    r = std::max(r, std::fabs(s));
  }
  return r;
}

}  // namespace detail

/// Residuals of the tabulated level-1 and level-2 interior eigenvectors
/// against their eigenvalue equations. Level-2 vectors are listed cell by
/// cell after the level-1 vertices; the report records the permutation taking
/// that listing order to arc order.
inline EigenvectorReport verify_level_eigenvectors(int m) {
  if (m != 1 && m != 2) throw std::invalid_argument("verify_level_eigenvectors: m must be 1 or 2");
  EigenvectorReport rep;
  rep.level = m;
  const auto fams = detail::level1_eigenvectors();
  if (m == 1) {
    rep.permutation.resize(7);
    for (std::size_t i = 0; i < 7; ++i) rep.permutation[i] = i;
    for (const auto& [lam, v] : fams)
      rep.checks.push_back({lam, detail::interior_residual(v, lam), "level1"});
    return rep;
  }

  // listing order: X_1..X_7 (the level-1 vertices), then cells Z^i_1..Z^i_7
  rep.permutation.resize(63);
  for (std::size_t p = 0; p < 7; ++p) rep.permutation[p] = (p + 1) * 8 - 1;
  for (std::size_t p = 7; p < 63; ++p) {
    const std::size_t cell = (p - 7) / 7;
    const std::size_t j = (p - 7) % 7;
    rep.permutation[p] = cell * 8 + j;
  }

  for (const auto& [lam, v1] : fams) {
    // the level-1 pattern repeats in every cell; symmetric patterns alternate
    // sign so that the zero values on the level-1 vertices stay harmonic
    const bool alternate = v1.front() == v1.back();
    std::vector<double> listed(63, 0.0);
    for (std::size_t cell = 0; cell < 8; ++cell) {
      const double sgn = alternate ? (cell % 2 == 0 ? -1.0 : 1.0) : 1.0;
      for (std::size_t j = 0; j < 7; ++j) listed[7 + cell * 7 + j] = sgn * v1[j];
    }
    std::vector<double> arc(63, 0.0);
    for (std::size_t p = 0; p < 63; ++p) arc[rep.permutation[p]] = listed[p];
    rep.checks.push_back({lam, detail::interior_residual(arc, lam), "level2"});
  }
  return rep;
}

/// Effective resistance between the curve endpoints at level m: the inverse
/// of the minimal (harmonic) energy separating them.
inline double series_resistance(int m, Normalization n) {
  if (m < 0) throw std::invalid_argument("series_resistance: negative level");
  if (m == 0) {
    const LevelGraph g = build_level(0);
    VertexFunction u{0, {0.0, 1.0}};
    return 1.0 / energy(g, u, n);
  }
  return 1.0 / harmonic_extension(0.0, 1.0, m, n).energy_out;
}

/// Exponent d with resistance_scale^d = measure_weight.
inline double resistance_dimension(double measure_weight, double resistance_scale) {
  if (!(measure_weight > 0.0 && measure_weight < 1.0) ||
      !(resistance_scale > 0.0 && resistance_scale < 1.0))
    throw std::domain_error("resistance_dimension: arguments must lie in (0, 1)");
  return std::log(measure_weight) / std::log(resistance_scale);
}

}  // namespace fractal_spectra
