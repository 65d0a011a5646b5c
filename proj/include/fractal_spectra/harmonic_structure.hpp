#pragma once

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fractal_spectra/decimation.hpp"
#include "fractal_spectra/linalg.hpp"
#include "fractal_spectra/oracle.hpp"

namespace fractal_spectra {

enum class StructureVariant { kCurve, kIsland };

/// The matrix data of the boundary/interior block decomposition of the
/// level-1 Laplacian: H = [[T, J^T], [J, X]] with M the diagonal of -X.
/// The curve has a 2-point boundary and a 7-point interior path; the island
/// joins four copies of the path into a 4-cycle of boundary corners.
struct HarmonicStructure {
  StructureVariant variant = StructureVariant::kCurve;
  Matrix<double> boundary_laplacian;  // D
  Matrix<double> boundary_diagonal;   // T
  Matrix<double> interior;            // X
  Matrix<double> interior_degree;     // M
  Matrix<double> coupling;            // J (interior rows, boundary columns)
};

inline HarmonicStructure build_structure(StructureVariant variant) {
  HarmonicStructure s;
  s.variant = variant;
  const auto path_block = [](Matrix<double>& x, std::size_t base) {
    for (std::size_t i = 0; i < 7; ++i) {
      x(base + i, base + i) = -2.0;
      if (i + 1 < 7) {
        x(base + i, base + i + 1) = 1.0;
        x(base + i + 1, base + i) = 1.0;
      }
    }
  };
  if (variant == StructureVariant::kCurve) {
    s.boundary_laplacian = Matrix<double>(2, 2);
    s.boundary_laplacian(0, 0) = s.boundary_laplacian(1, 1) = -1.0;
    s.boundary_laplacian(0, 1) = s.boundary_laplacian(1, 0) = 1.0;
    s.boundary_diagonal = -1.0 * Matrix<double>::identity(2);
    s.interior = Matrix<double>(7, 7);
    path_block(s.interior, 0);
    s.interior_degree = 2.0 * Matrix<double>::identity(7);
    s.coupling = Matrix<double>(7, 2);
    s.coupling(0, 0) = 1.0;
    s.coupling(6, 1) = 1.0;
  } else {
    s.boundary_laplacian = Matrix<double>(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      s.boundary_laplacian(i, i) = -2.0;
      s.boundary_laplacian(i, (i + 1) % 4) = 1.0;
      s.boundary_laplacian(i, (i + 3) % 4) = 1.0;
    }
    s.boundary_diagonal = -2.0 * Matrix<double>::identity(4);
    s.interior = Matrix<double>(28, 28);
    for (std::size_t b = 0; b < 4; ++b) path_block(s.interior, 7 * b);
    s.interior_degree = 2.0 * Matrix<double>::identity(28);
    s.coupling = Matrix<double>(28, 4);
    // arc b runs from corner b to corner (b+1) mod 4
    for (std::size_t b = 0; b < 4; ++b) {
      s.coupling(7 * b, b) = 1.0;
      s.coupling(7 * b + 6, (b + 1) % 4) = 1.0;
    }
  }
  return s;
}

/// Values of lambda at which (X + lambda M) is singular. X is block diagonal
/// with identical 7-point path blocks, so these are the seven eigenvalues of
/// the half-scaled path matrix, for the curve and the island alike.
inline std::vector<double> structure_resonances(const HarmonicStructure&) {
  const std::vector<double> diag(7, 1.0);
  const std::vector<double> off(6, -0.5);
  return tridiagonal_eigenvalues(diag, off);
}

/// Boundary reduction T - J^T (X + lambda M)^{-1} J, evaluated by a linear
/// solve. Throws SingularMatrixError within 1e-12 of a resonance.
inline Matrix<double> schur_complement(const HarmonicStructure& s, double lambda) {
  for (double r : structure_resonances(s))
    if (std::fabs(lambda - r) < 1e-12)
      throw SingularMatrixError("schur_complement: lambda is a resonance of (X + lambda M)");
  const Matrix<double> shifted = s.interior + lambda * s.interior_degree;
  const Matrix<double> y = solve(shifted, s.coupling);
  return s.boundary_diagonal - s.coupling.transposed() * y;
}

/// Closed forms of the rational pair multiplying D and T in the boundary
/// reduction.
inline double k_d(double lambda) {
  const double l = lambda;
  return -1.0 / (8.0 * (l - 1.0) * (2.0 * (l - 2.0) * l + 1.0) *
                 (8.0 * (l - 2.0) * l * (l - 1.0) * (l - 1.0) + 1.0));
}

inline double k_t(double lambda) {
  const double l = lambda;
  return l * (4.0 * l * (l * (2.0 * l - 7.0) + 7.0) - 7.0) /
         (8.0 * (l - 2.0) * l * (l - 1.0) * (l - 1.0) + 1.0);
}

/// Recovers (K_D, K_T) at one lambda by least squares over the entries of the
/// boundary reduction against D and T. Independent of the closed forms.
inline std::pair<double, double> recover_rational_pair(const HarmonicStructure& s, double lambda) {
  const Matrix<double> schur = schur_complement(s, lambda);
  double dd = 0, dt = 0, tt = 0, ds = 0, ts = 0;
  for (std::size_t i = 0; i < schur.rows(); ++i)
    for (std::size_t j = 0; j < schur.cols(); ++j) {
      const double d = s.boundary_laplacian(i, j);
      const double t = s.boundary_diagonal(i, j);
      dd += d * d;
      dt += d * t;
      tt += t * t;
      ds += d * schur(i, j);
      ts += t * schur(i, j);
    }
  const double det = dd * tt - dt * dt;
  return {(ds * tt - ts * dt) / det, (dd * ts - dt * ds) / det};
}

/// Max residual of || Schur(lambda) - (K_D(lambda) D + K_T(lambda) T) ||_inf
/// over sample_count non-resonant lambdas in [-1, 5], deterministic per seed.
inline double verify_strong_harmonic(StructureVariant variant, int sample_count,
                                     std::uint64_t seed = 0x51ab5) {
  const HarmonicStructure s = build_structure(variant);
  const std::vector<double> res = structure_resonances(s);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 5.0);
  double worst = 0.0;
  for (int k = 0; k < sample_count; ++k) {
    double lambda = 0.0;
    for (;;) {
      lambda = unif(rng);
      double gap = 1e9;
      for (double r : res) gap = std::min(gap, std::fabs(lambda - r));
      // stay clear of both the resonances and the zero set of 1/K_D
      if (gap > 1e-3 && std::fabs(k_d(lambda)) > 1e-12) break;
    }
    const Matrix<double> schur = schur_complement(s, lambda);
    const Matrix<double> target = k_d(lambda) * s.boundary_laplacian +
                                  k_t(lambda) * s.boundary_diagonal;
    worst = std::max(worst, (schur - target).max_abs());
  }
  return worst;
}

/// K_D evaluated at lambda = 0 via the boundary reduction itself; the inverse
/// is the conductance scaling, so this equals the ramification constant.
inline double ramification_from_structure(StructureVariant variant = StructureVariant::kCurve) {
  return recover_rational_pair(build_structure(variant), 0.0).first;
}

struct FittedDecimation {
  std::vector<double> coefficients;  // ascending monomial, graph-eigenvalue variable
  int degree = 0;
  double bridge_scale = 0.0;     // lambda_graph = scale * lambda_structure + offset
  double bridge_offset = 0.0;
  double bridge_residual = 0.0;  // resonance/forbidden matching error
  double fit_residual = 0.0;     // validation-point error of the polynomial fit
};

/// Rebuilds the decimation map from the boundary reduction alone:
/// recovers (K_D, K_T) pointwise, forms (lambda - K_T)/K_D, detects the affine
/// change of variable linking the structure eigenvalue to the graph eigenvalue
/// by matching resonances to the forbidden values, and interpolates the
/// bridged map as a polynomial. Throws if the result is not a polynomial of
/// the expected degree.
inline FittedDecimation spectral_function_from_structure() {
  const HarmonicStructure s = build_structure(StructureVariant::kCurve);
  std::vector<double> res = structure_resonances(s);
  const auto& forb = forbidden_eigenvalues();
  std::sort(res.begin(), res.end());

  FittedDecimation fit;
  {  // least-squares affine match of the two sorted seven-point sets
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < 7; ++i) {
      sx += res[i];
      sy += forb[i];
      sxx += res[i] * res[i];
      sxy += res[i] * forb[i];
    }
    fit.bridge_scale = (7.0 * sxy - sx * sy) / (7.0 * sxx - sx * sx);
    fit.bridge_offset = (sy - fit.bridge_scale * sx) / 7.0;
    for (std::size_t i = 0; i < 7; ++i)
      fit.bridge_residual = std::max(
          fit.bridge_residual,
          std::fabs(fit.bridge_scale * res[i] + fit.bridge_offset - forb[i]));
  }
  const double a = fit.bridge_scale, b = fit.bridge_offset;

  // bridged map in the graph variable; decimation commutes with the bridge
  const auto bridged = [&](double x) {
    const double y = (x - b) / a;
    const auto [kd, kt] = recover_rational_pair(s, y);
    return a * ((y - kt) / kd) + b;
  };

  // Newton interpolation at Chebyshev nodes, nudged off the forbidden values
  constexpr int kDeg = 8;
  std::array<long double, kDeg + 1> nodes{};
  for (int i = 0; i <= kDeg; ++i) {
    double x = 2.0 + 2.8 * std::cos((2.0 * i + 1.0) * 3.14159265358979323846 / (2.0 * (kDeg + 1)));
    for (double f : forb)
      if (std::fabs(x - f) < 0.02) x += 0.03;
    nodes[static_cast<std::size_t>(i)] = x;
  }
  std::array<long double, kDeg + 1> dd{};
  for (int i = 0; i <= kDeg; ++i)
    dd[static_cast<std::size_t>(i)] = bridged(static_cast<double>(nodes[static_cast<std::size_t>(i)]));
  for (int j = 1; j <= kDeg; ++j)
    for (int i = kDeg; i >= j; --i)
      dd[static_cast<std::size_t>(i)] =
          (dd[static_cast<std::size_t>(i)] - dd[static_cast<std::size_t>(i - 1)]) /
          (nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(i - j)]);

  std::array<long double, kDeg + 1> coef{}, basis{};
  basis[0] = 1.0L;
  coef[0] = dd[0];
  for (int j = 1; j <= kDeg; ++j) {
    for (int k = j; k >= 1; --k)
      basis[static_cast<std::size_t>(k)] = basis[static_cast<std::size_t>(k - 1)] -
                                           nodes[static_cast<std::size_t>(j - 1)] *
                                               basis[static_cast<std::size_t>(k)];
    basis[0] = -nodes[static_cast<std::size_t>(j - 1)] * basis[0];
    for (int k = 0; k <= j; ++k)
      coef[static_cast<std::size_t>(k)] += dd[static_cast<std::size_t>(j)] *
                                           basis[static_cast<std::size_t>(k)];
  }
  fit.coefficients.assign(coef.begin(), coef.end());

  // validate that the sampled map really is this polynomial
  for (double x : {0.05, 0.33, 0.77, 1.11, 1.51, 1.83, 2.21, 2.61, 3.05, 3.57, 4.21}) {
    double p = 0.0;
    for (int k = kDeg; k >= 0; --k) p = p * x + fit.coefficients[static_cast<std::size_t>(k)];
    fit.fit_residual = std::max(fit.fit_residual, std::fabs(p - bridged(x)));
  }
  if (fit.fit_residual > 1e-6)
    throw std::runtime_error("spectral_function_from_structure: sampled map is not a degree-8 polynomial");
  for (int k = kDeg; k >= 0; --k)
    if (std::fabs(fit.coefficients[static_cast<std::size_t>(k)]) > 1e-6) {
      fit.degree = k;
      break;
    }
  return fit;
}

}  // namespace fractal_spectra
