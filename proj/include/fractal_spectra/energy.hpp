#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fractal_spectra/geometry.hpp"
#include "fractal_spectra/linalg.hpp"

namespace fractal_spectra {

/// Per-level prefactor applied to the raw sum of squared edge differences.
///
/// kRaw        : 1           (plain graph sum)
/// kConserved  : 8^m         (keeps the energy of harmonic extensions
///                            level-invariant; the library default)
/// kGeometric  : 8^m * 64^m  (ramification times geometric factor, 512^m)
enum class Normalization { kRaw, kConserved, kGeometric };

/// Prefactors are powers of two, so ldexp keeps them exact in floating point.
inline double normalization_prefactor(Normalization n, int level) {
  if (level < 0) throw std::invalid_argument("normalization_prefactor: negative level");
  switch (n) {
    case Normalization::kRaw: return 1.0;
    case Normalization::kConserved: return std::ldexp(1.0, 3 * level);
    case Normalization::kGeometric: return std::ldexp(1.0, 9 * level);
  }
  throw std::logic_error("normalization_prefactor: bad enum");
}

/// Pointwise renormalizer 64^m for the graph Laplacian.
inline double laplacian_renormalizer(int m) {
  if (m < 0) throw std::invalid_argument("laplacian_renormalizer: negative level");
  if (6 * m > 1023) throw std::overflow_error("laplacian_renormalizer: 64^m overflows double");
  return std::ldexp(1.0, 6 * m);
}

/// Common weight of the self-similar measure, one per map.
inline double self_similar_weight() { return 0.125; }

/// Integral of the level-m unit spline against the self-similar measure.
inline double spline_integral(int m) {
  if (m < 0) throw std::invalid_argument("spline_integral: negative level");
  return std::ldexp(1.0, -3 * m);
}

/// Real-valued function on the vertices of a level graph, in vertex order.
struct VertexFunction {
  int level = 0;
  std::vector<double> values;

  static VertexFunction zero(int level) {
    return {level, std::vector<double>(vertex_count(level), 0.0)};
  }
};

inline void check_sizes(const LevelGraph& g, const VertexFunction& u) {
  if (u.level != g.level || u.values.size() != g.size())
    throw std::invalid_argument("vertex function does not match graph level");
}

/// Unweighted combinatorial Laplacian at an interior vertex:
/// sum over neighbors of u(Y) - u(X).
inline double graph_laplacian(const LevelGraph& g, const VertexFunction& u, std::size_t x) {
  check_sizes(g, u);
  if (g.is_boundary(x)) throw std::invalid_argument("graph_laplacian: boundary vertex");
  return u.values[x - 1] + u.values[x + 1] - 2.0 * u.values[x];
}

/// Interior values of the energy-minimizing extension of boundary data (a, b)
/// to level m, via the tridiagonal sweep on the (8^m - 1)-dimensional system.
/// Works over double or exact Rational scalars.
template <typename Scalar>
std::vector<Scalar> harmonic_interior(Scalar a, Scalar b, int m) {
  if (m < 1) throw std::invalid_argument("harmonic_interior: level must be >= 1");
  const std::size_t n = static_cast<std::size_t>(vertex_count(m)) - 2;
  std::vector<Scalar> rhs(n, Scalar{0});
  rhs.front() = a;
  rhs.back() += b;
  return solve_tridiagonal_constant<Scalar>(Scalar{-1}, Scalar{2}, Scalar{-1}, std::move(rhs));
}

struct HarmonicExtensionResult {
  std::vector<double> interior_values;
  double energy_in = 0.0;   // boundary-data energy (a - b)^2
  double energy_out = 0.0;  // energy of the extension under the chosen normalization
};

/// Full vertex function (a, interior..., b) of the harmonic extension.
inline VertexFunction extend_harmonic(double a, double b, int m) {
  VertexFunction u;
  u.level = m;
  u.values.reserve(vertex_count(m));
  u.values.push_back(a);
  if (m >= 1) {
    auto interior = harmonic_interior<double>(a, b, m);
    u.values.insert(u.values.end(), interior.begin(), interior.end());
  }
  u.values.push_back(b);
  return u;
}

/// Energy form of a pair of functions: prefactor times the sum over edges of
/// the products of differences.
inline double energy(const LevelGraph& g, const VertexFunction& u, const VertexFunction& v,
                     Normalization n) {
  check_sizes(g, u);
  check_sizes(g, v);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    s += (u.values[i] - u.values[i + 1]) * (v.values[i] - v.values[i + 1]);
  return normalization_prefactor(n, g.level) * s;
}

inline double energy(const LevelGraph& g, const VertexFunction& u, Normalization n) {
  return energy(g, u, u, n);
}

inline HarmonicExtensionResult harmonic_extension(double a, double b, int m,
                                                  Normalization n = Normalization::kConserved) {
  HarmonicExtensionResult r;
  r.interior_values = harmonic_interior<double>(a, b, m);
  r.energy_in = (a - b) * (a - b);
  const VertexFunction u = extend_harmonic(a, b, m);
  const LevelGraph g = build_level(m);
  r.energy_out = energy(g, u, n);
  return r;
}

/// Per-level energy decay of harmonic extensions, E_1(extension) / E_0,
/// computed by actually extending and measuring rather than hard-coded.
inline double ramification_constant() {
  const double a = 0.0, b = 1.0;
  const HarmonicExtensionResult r = harmonic_extension(a, b, 1, Normalization::kRaw);
  return r.energy_out / r.energy_in;
}

/// One level's contribution to the normal derivative at a boundary vertex:
/// prefactor * sum over neighbors of u(X) - u(Y). Callers iterate over m to
/// observe the limit.
inline double normal_derivative(const LevelGraph& g, const VertexFunction& u, std::size_t x,
                                Normalization n) {
  check_sizes(g, u);
  if (!g.is_boundary(x)) throw std::invalid_argument("normal_derivative: interior vertex");
  const std::size_t nb = (x == 0) ? 1 : g.size() - 2;
  return normalization_prefactor(n, g.level) * (u.values[x] - u.values[nb]);
}

/// Summation-by-parts audit: | E(u,v) + sum_int v * (prefactor * lap u)
/// - sum_bdy v * dn u |. Identically zero in real arithmetic.
inline double gauss_green_residual(const LevelGraph& g, const VertexFunction& u,
                                   const VertexFunction& v, Normalization n) {
  const double e = energy(g, u, v, n);
  const double pref = normalization_prefactor(n, g.level);
  double interior = 0.0;
  for (std::size_t x = 1; x + 1 < g.size(); ++x)
    interior += v.values[x] * pref * graph_laplacian(g, u, x);
  double boundary = 0.0;
  boundary += v.values.front() * normal_derivative(g, u, 0, n);
  boundary += v.values.back() * normal_derivative(g, u, g.size() - 1, n);
  return std::fabs(e + interior - boundary);
}

}  // namespace fractal_spectra
