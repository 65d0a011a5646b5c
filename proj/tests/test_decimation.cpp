#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fractal_spectra/decimation.hpp"
#include "fractal_spectra/oracle.hpp"

using namespace fractal_spectra;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> flatten(const SpectrumLevel& lv) {
  std::vector<double> out;
  for (const auto& n : lv.nodes)
    for (int r = 0; r < n.multiplicity; ++r) out.push_back(n.lambda);
  return out;
}
}  // namespace

TEST_CASE("decimation map vanishes at its factored roots") {
  CHECK(decimation_poly(0.0) == 0.0);
  CHECK(decimation_poly(2.0) == 0.0);
  CHECK(decimation_poly(4.0) == 0.0);
  const double s2 = std::sqrt(2.0);
  CHECK(decimation_poly(2.0 + s2) == Catch::Approx(0.0).margin(1e-13));
  CHECK(decimation_poly(2.0 - s2) == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("decimation map agrees with its monomial coefficients") {
  const auto& c = decimation_coefficients();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 4.0);
  for (int rep = 0; rep < 200; ++rep) {
    const double x = unif(rng);
    double p = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) p = p * x + c[k];
    CHECK(p == Catch::Approx(decimation_poly(x)).margin(1e-10));
  }
}

TEST_CASE("cosine semi-conjugacy certifies the map") {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = (i + 0.5) * kPi / 1000.0;
    const double st = std::sin(t / 2.0), s4 = std::sin(4.0 * t);
    worst = std::max(worst, std::fabs(decimation_poly(4.0 * st * st) - 4.0 * s4 * s4));
  }
  CHECK(worst <= 1e-9);
  // anchor from the conjugacy: the smallest forbidden value maps to 4
  CHECK(decimation_poly(2.0 - 2.0 * std::cos(kPi / 8.0)) == Catch::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("inverse branches at the spectrum edges") {
  const auto at0 = inverse_branches(0.0);
  REQUIRE(at0.size() == 8);
  std::vector<double> v0;
  for (const auto& b : at0) v0.push_back(b.lambda);
  std::sort(v0.begin(), v0.end());
  const double s2 = std::sqrt(2.0);
  const std::vector<double> expect0 = {0.0, 2.0 - s2, 2.0 - s2, 2.0, 2.0, 2.0 + s2, 2.0 + s2, 4.0};
  for (std::size_t i = 0; i < 8; ++i) CHECK(v0[i] == Catch::Approx(expect0[i]).margin(1e-12));

  // preimages of 4 are 2 - 2cos((2j+1) pi / 8), each hit twice
  const auto at4 = inverse_branches(4.0);
  std::vector<double> v4;
  for (const auto& b : at4) v4.push_back(b.lambda);
  std::sort(v4.begin(), v4.end());
  std::vector<double> expect4;
  for (int j = 0; j < 4; ++j) {
    const double val = 2.0 - 2.0 * std::cos((2 * j + 1) * kPi / 8.0);
    expect4.push_back(val);
    expect4.push_back(val);
  }
  std::sort(expect4.begin(), expect4.end());
  for (std::size_t i = 0; i < 8; ++i) CHECK(v4[i] == Catch::Approx(expect4[i]).margin(1e-12));

  CHECK_THROWS_AS(inverse_branches(-0.5), std::domain_error);
  CHECK_THROWS_AS(inverse_branches(4.5), std::domain_error);
}

TEST_CASE("inverse branches round-trip through the forward map") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.0, 4.0);
  for (int rep = 0; rep < 200; ++rep) {
    const double parent = unif(rng);
    for (const auto& b : inverse_branches(parent)) {
      CHECK(b.lambda >= 0.0);
      CHECK(b.lambda <= 4.0);
      CHECK(decimation_poly(b.lambda) == Catch::Approx(parent).margin(1e-9));
    }
  }
}

TEST_CASE("the principal branch behaves as x/64 near zero") {
  for (double x : {1e-2, 1e-3, 1e-4}) {
    const double c = std::fabs(principal_branch(x) - x / 64.0) / (x * x);
    CHECK(c > 1.2e-3);
    CHECK(c < 1.4e-3);
  }
  const double c_hi = std::fabs(principal_branch(1e-2) - 1e-2 / 64.0) / 1e-4;
  const double c_lo = std::fabs(principal_branch(1e-4) - 1e-4 / 64.0) / 1e-8;
  CHECK(c_hi / c_lo < 1.01);
  CHECK(c_hi / c_lo > 0.99);
}

TEST_CASE("forbidden eigenvalues are the level-1 interior spectrum") {
  const auto& f = forbidden_eigenvalues();
  REQUIRE(f.size() == 7);
  CHECK(std::is_sorted(f.begin(), f.end()));
  CHECK(f.front() == Catch::Approx(2.0 - 2.0 * std::cos(kPi / 8.0)).epsilon(1e-14));
  for (std::size_t k = 0; k < 7; ++k) {
    CHECK(f[k] == Catch::Approx(closed_form_eigenvalue(1, k + 1)).margin(1e-12));
    // the interior matrix is singular exactly there
    CHECK(std::fabs(path_determinant(7, f[k])) <= 1e-9);
  }
}

TEST_CASE("interior matrix determinant changes sign between forbidden values") {
  const auto& f = forbidden_eigenvalues();
  for (std::size_t k = 0; k + 1 < 7; ++k) {
    const double mid = 0.5 * (f[k] + f[k + 1]);
    const double before = path_determinant(7, f[k] - 1e-3);
    const double at_mid = path_determinant(7, mid);
    CHECK(before * at_mid < 0.0);
  }
}

TEST_CASE("spectrum enumeration is complete at every level") {
  for (int m = 1; m <= 5; ++m) {
    const SpectrumLevel lv = enumerate_spectrum(m);
    CHECK(lv.level == m);
    CHECK(lv.total_multiplicity() == vertex_count(m) - 2);
    CHECK(std::is_sorted(lv.nodes.begin(), lv.nodes.end(),
                         [](const SpectrumNode& a, const SpectrumNode& b) {
                           return a.lambda < b.lambda;
                         }));
    for (const auto& n : lv.nodes) {
      CHECK(n.lambda >= 0.0);
      CHECK(n.lambda <= 4.0);
      CHECK(n.multiplicity == 1);  // simple on a path; the bookkeeping must agree
    }
  }
  CHECK_THROWS_AS(enumerate_spectrum(0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_spectrum(7), std::length_error);
  CHECK_NOTHROW(enumerate_spectrum(3, 3));
}

TEST_CASE("forbidden origins keep multiplicity one at every level") {
  const SpectrumLevel lv = enumerate_spectrum(3);
  int fresh = 0;
  for (const auto& n : lv.nodes)
    if (n.is_forbidden_origin()) {
      CHECK(n.forbidden_level == 3);
      CHECK(n.multiplicity == 1);
      ++fresh;
    }
  CHECK(fresh == 7);
}

TEST_CASE("enumerated spectrum equals the dense oracle") {
  for (int m = 1; m <= 3; ++m) {
    const std::vector<double> flat = flatten(enumerate_spectrum(m));
    const std::vector<double> dense = dense_spectrum(m, BoundaryCondition::kDirichlet).eigenvalues;
    REQUIRE(flat.size() == dense.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < flat.size(); ++i)
      worst = std::max(worst, std::fabs(flat[i] - dense[i]));
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("enumerated spectrum equals the closed form up to level six") {
  for (int m = 4; m <= 6; ++m) {
    const std::vector<double> flat = flatten(enumerate_spectrum(m));
    const std::vector<double> cf = closed_form_spectrum(m);
    REQUIRE(flat.size() == cf.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < flat.size(); ++i)
      worst = std::max(worst, std::fabs(flat[i] - cf[i]));
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("the merge tolerance is far below the closed-form spacing") {
  for (int m = 1; m <= 4; ++m) {
    const std::vector<double> cf = closed_form_spectrum(m);
    double min_gap = 4.0;
    for (std::size_t i = 0; i + 1 < cf.size(); ++i) min_gap = std::min(min_gap, cf[i + 1] - cf[i]);
    CHECK(min_gap > 100.0 * kEigenvalueMergeTol);
  }
}

TEST_CASE("genealogies replay to their eigenvalues") {
  const SpectrumLevel lv = enumerate_spectrum(3);
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    const auto& n = lv.nodes[rng() % lv.nodes.size()];
    // forward applications of the map walk the genealogy back to its root
    double lam = n.lambda;
    for (std::size_t steps = n.branch_signs.size(); steps > 0; --steps)
      lam = decimation_poly(lam);
    CHECK(lam == Catch::Approx(forbidden_eigenvalues()[static_cast<std::size_t>(
                     n.forbidden_index)]).margin(1e-9));
    // and the recorded triples replay forward to the eigenvalue itself
    double replay = forbidden_eigenvalues()[static_cast<std::size_t>(n.forbidden_index)];
    for (const auto& t : n.branch_signs) {
      bool found = false;
      for (const auto& b : inverse_branches(replay))
        if (b.signs == t) {
          replay = b.lambda;
          found = true;
          break;
        }
      REQUIRE(found);
    }
    CHECK(replay == Catch::Approx(n.lambda).margin(1e-12));
    CHECK(n.genealogy().substr(0, 1) == "F");
  }
}

TEST_CASE("renormalized eigenvalues approach the squared half-integers") {
  // exact value at m = 2 is 4096 (2 - 2cos(pi/64)); pi^2 is the m -> inf limit
  CHECK(continuous_eigenvalue(1, 2) ==
        Catch::Approx(4096.0 * closed_form_eigenvalue(2, 1)).epsilon(1e-12));
  CHECK(continuous_eigenvalue(1, 2) == Catch::Approx(kPi * kPi).margin(5e-3));
  CHECK(continuous_eigenvalue(2, 3) == Catch::Approx(4.0 * kPi * kPi).epsilon(1e-3));
  CHECK_THROWS_AS(continuous_eigenvalue(0, 2), std::out_of_range);
  CHECK_THROWS_AS(continuous_eigenvalue(64, 2), std::out_of_range);
}

TEST_CASE("renormalized sequences are Cauchy with fast-shrinking gaps") {
  std::vector<SpectrumLevel> levels;
  for (int m = 1; m <= 5; ++m) levels.push_back(enumerate_spectrum(m));
  for (int k = 1; k <= 10; ++k) {
    std::vector<double> c;
    for (const auto& lv : levels)
      if (static_cast<std::uint64_t>(k) <= lv.total_multiplicity())
        c.push_back(flatten(lv)[static_cast<std::size_t>(k - 1)] *
                    std::ldexp(1.0, 6 * lv.level));
    for (std::size_t i = 0; i + 2 < c.size(); ++i) {
      const double g0 = std::fabs(c[i + 1] - c[i]);
      const double g1 = std::fabs(c[i + 2] - c[i + 1]);
      CHECK(g0 >= 30.0 * g1);
    }
  }
}

TEST_CASE("counting function counts renormalized eigenvalues") {
  const SpectrumLevel lv = enumerate_spectrum(2);
  const double smallest = lv.nodes.front().continuous_estimate;
  CHECK(counting_function(lv, smallest * 0.5) == 0);
  CHECK(counting_function(lv, smallest) == 1);
  CHECK(counting_function(lv, std::numeric_limits<double>::infinity()) == 63);
  CHECK(counting_function(2, 1e300) == 63);
}

TEST_CASE("counting function grows like the square root") {
  const double slope = counting_slope_middle_decade(enumerate_spectrum(5));
  CHECK(slope == Catch::Approx(0.5).margin(0.05));
}
