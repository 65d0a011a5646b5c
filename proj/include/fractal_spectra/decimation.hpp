#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractal_spectra {

inline constexpr int kDefaultSpectrumCap = 6;
inline constexpr double kEigenvalueMergeTol = 1e-9;

/// Forward decimation map relating an eigenvalue at one level to its parent
/// at the previous level, evaluated in the factored form
///   R(x) = -(x-4)(x-2)^2 x ((x-4)x + 2)^2.
inline double decimation_poly(double lambda) {
  const double q = (lambda - 4.0) * lambda + 2.0;
  return -(lambda - 4.0) * (lambda - 2.0) * (lambda - 2.0) * lambda * q * q;
}

/// Monomial coefficients of the decimation map, ascending powers. Integer
/// valued; the degree is eight.
inline const std::array<double, 9>& decimation_coefficients() {
  static const std::array<double, 9> c = {0.0, 64.0, -336.0, 672.0, -660.0,
                                          352.0, -104.0, 16.0,  -1.0};
  return c;
}

struct InverseBranch {
  double lambda = 0.0;
  std::array<int, 3> signs{};  // (e1, e2, e3), each +-1
};

namespace detail {
/// One inverse branch 2 + e1 sqrt(2 + e2 sqrt(2 + e3 sqrt(4 - x))), rewritten
/// so that branches returning values near zero are evaluated as telescoped
/// quotients instead of cancelling subtractions. Keeps small eigenvalues
/// accurate to a few ulp, which the renormalized limit depends on.
inline double eval_branch(double x, int e1, int e2, int e3) {
  const double w3 = std::sqrt(std::max(4.0 - x, 0.0));
  const double w2 = std::sqrt(2.0 + e3 * w3);
  const double w1 = std::sqrt(2.0 + e2 * w2);
  if (e1 == 1) return 2.0 + w1;
  if (e2 == -1) return (2.0 + w2) / (2.0 + w1);
  if (e3 == -1) return (2.0 + w3) / ((2.0 + w2) * (2.0 + w1));
  return x / ((2.0 + w3) * (2.0 + w2) * (2.0 + w1));
}
}  // namespace detail

/// The branch through which small eigenvalues descend; behaves as x/64 near 0.
inline double principal_branch(double x) { return detail::eval_branch(x, -1, 1, 1); }

/// All eight inverse images of a parent eigenvalue, labeled by their sign
/// triples. Real for any parent in [0, 4]; the argument may exceed the
/// interval only by a rounding-sized amount.
inline std::vector<InverseBranch> inverse_branches(double lambda_prev, double tol = 1e-9) {
  if (lambda_prev < -tol || lambda_prev > 4.0 + tol)
    throw std::domain_error("inverse_branches: parent eigenvalue outside [0, 4]");
  const double x = std::clamp(lambda_prev, 0.0, 4.0);
  std::vector<InverseBranch> out;
  out.reserve(8);
  for (int e1 : {1, -1})
    for (int e2 : {1, -1})
      for (int e3 : {1, -1})
        out.push_back({detail::eval_branch(x, e1, e2, e3), {e1, e2, e3}});
  return out;
}

/// The seven values at which the interior eigenvalue system is singular,
/// ascending: 2, 2 +- sqrt(2), 2 +- sqrt(2 +- sqrt(2)).
inline const std::array<double, 7>& forbidden_eigenvalues() {
  static const std::array<double, 7> vals = [] {
    const double s2 = std::sqrt(2.0);
    std::array<double, 7> v = {2.0 - std::sqrt(2.0 + s2), 2.0 - s2, 2.0 - std::sqrt(2.0 - s2),
                               2.0,
                               2.0 + std::sqrt(2.0 - s2), 2.0 + s2, 2.0 + std::sqrt(2.0 + s2)};
    return v;
  }();
  return vals;
}

/// One eigenvalue of the level-m interior Laplacian with its multiplicity and
/// the genealogy that produced it: the forbidden value it descends from and
/// the sign triple chosen at each subsequent level.
struct SpectrumNode {
  int level = 0;
  double lambda = 0.0;
  int multiplicity = 1;
  int forbidden_index = 0;  // 0..6 into forbidden_eigenvalues()
  int forbidden_level = 0;  // level at which the genealogy starts
  std::vector<std::array<int, 3>> branch_signs;  // one triple per level after the root
  double continuous_estimate = 0.0;              // 64^level * lambda

  bool is_forbidden_origin() const { return branch_signs.empty(); }

  /// Genealogy as text, e.g. "F4" or "F4>-++>+-+".
  std::string genealogy() const {
    std::string s = "F" + std::to_string(forbidden_index + 1);
    for (const auto& t : branch_signs) {
      s += '>';
      for (int e : t) s += (e > 0 ? '+' : '-');
    }
    return s;
  }
};

struct SpectrumLevel {
  int level = 0;
  std::vector<SpectrumNode> nodes;  // ascending by lambda

  std::uint64_t total_multiplicity() const {
    std::uint64_t s = 0;
    for (const auto& n : nodes) s += static_cast<std::uint64_t>(n.multiplicity);
    return s;
  }
};

/// Full interior spectrum at level m by decimation: level 1 is the seven
/// forbidden values; each later level takes all eight inverse branches of
/// every node (inheriting multiplicity, merging coincidences) and re-inserts
/// the forbidden values with multiplicity one.
inline SpectrumLevel enumerate_spectrum(int m, int cap = kDefaultSpectrumCap) {
  if (m < 1) throw std::invalid_argument("enumerate_spectrum: level must be >= 1");
  if (m > cap)
    throw std::length_error("enumerate_spectrum: level " + std::to_string(m) +
                            " above cap " + std::to_string(cap));
  const auto& forbidden = forbidden_eigenvalues();
  auto insert_forbidden = [&](SpectrumLevel& lv) {
    for (int i = 0; i < 7; ++i) {
      SpectrumNode n;
      n.level = lv.level;
      n.lambda = forbidden[static_cast<std::size_t>(i)];
      n.multiplicity = 1;
      n.forbidden_index = i;
      n.forbidden_level = lv.level;
      n.continuous_estimate = std::ldexp(n.lambda, 6 * lv.level);
      lv.nodes.push_back(std::move(n));
    }
  };

  SpectrumLevel cur;
  cur.level = 1;
  insert_forbidden(cur);
  std::sort(cur.nodes.begin(), cur.nodes.end(),
            [](const SpectrumNode& a, const SpectrumNode& b) { return a.lambda < b.lambda; });

  for (int lvl = 2; lvl <= m; ++lvl) {
    SpectrumLevel next;
    next.level = lvl;
    next.nodes.reserve(cur.nodes.size() * 8 + 7);
    for (const auto& parent : cur.nodes) {
      for (const auto& br : inverse_branches(parent.lambda)) {
        SpectrumNode child;
        child.level = lvl;
        child.lambda = br.lambda;
        child.multiplicity = parent.multiplicity;
        child.forbidden_index = parent.forbidden_index;
        child.forbidden_level = parent.forbidden_level;
        child.branch_signs = parent.branch_signs;
        child.branch_signs.push_back(br.signs);
        child.continuous_estimate = std::ldexp(child.lambda, 6 * lvl);
        next.nodes.push_back(std::move(child));
      }
    }
    insert_forbidden(next);
    std::sort(next.nodes.begin(), next.nodes.end(),
              [](const SpectrumNode& a, const SpectrumNode& b) { return a.lambda < b.lambda; });
    // merge coincident eigenvalues, summing multiplicity
    SpectrumLevel merged;
    merged.level = lvl;
    merged.nodes.reserve(next.nodes.size());
    for (auto& n : next.nodes) {
      if (!merged.nodes.empty() &&
          std::fabs(merged.nodes.back().lambda - n.lambda) <= kEigenvalueMergeTol) {
        merged.nodes.back().multiplicity += n.multiplicity;
      } else {
        merged.nodes.push_back(std::move(n));
      }
    }
    cur = std::move(merged);
  }
  return cur;
}

/// k-th smallest eigenvalue (with multiplicity) renormalized by 64^m.
/// Converges in m to the k-th continuous eigenvalue.
inline double continuous_eigenvalue(int k, int m, int cap = kDefaultSpectrumCap) {
  const SpectrumLevel lv = enumerate_spectrum(m, cap);
  if (k < 1) throw std::out_of_range("continuous_eigenvalue: k must be >= 1");
  int remaining = k;
  for (const auto& n : lv.nodes) {
    remaining -= n.multiplicity;
    if (remaining <= 0) return n.continuous_estimate;
  }
  throw std::out_of_range("continuous_eigenvalue: k exceeds the spectrum size");
}

/// Number of renormalized eigenvalues 64^m * lambda <= x, with multiplicity.
inline std::uint64_t counting_function(const SpectrumLevel& lv, double x) {
  std::uint64_t c = 0;
  for (const auto& n : lv.nodes) {
    if (n.continuous_estimate > x) break;
    c += static_cast<std::uint64_t>(n.multiplicity);
  }
  return c;
}

inline std::uint64_t counting_function(int m, double x, int cap = kDefaultSpectrumCap) {
  return counting_function(enumerate_spectrum(m, cap), x);
}

/// Least-squares slope of log N(x) versus log x over the decade centered in
/// the log-range of the renormalized spectrum.
inline double counting_slope_middle_decade(const SpectrumLevel& lv, int sample_points = 50) {
  if (lv.nodes.size() < 2) throw std::invalid_argument("counting slope: spectrum too small");
  const double lo = std::log10(lv.nodes.front().continuous_estimate);
  const double hi = std::log10(lv.nodes.back().continuous_estimate);
  const double mid = 0.5 * (lo + hi);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < sample_points; ++i) {
    const double lx = mid - 0.5 + static_cast<double>(i) / (sample_points - 1);
    const double x = std::pow(10.0, lx);
    const double n = static_cast<double>(counting_function(lv, x));
    const double u = std::log(x), v = std::log(n);
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  const double np = sample_points;
  return (np * sxy - sx * sy) / (np * sxx - sx * sx);
}

}  // namespace fractal_spectra
