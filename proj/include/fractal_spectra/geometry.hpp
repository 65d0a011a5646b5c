#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractal_spectra {

inline constexpr int kDefaultLevelCap = 8;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Integer-lattice point at an implicit scale of 4^-level. Every vertex of a
/// level-m graph has dyadic-rational coordinates with denominator 4^m, so
/// exact integer coordinates make vertex identity decidable without any
/// floating-point merge tolerance.
struct ScaledPoint {
  long long x = 0;
  long long y = 0;
  friend bool operator==(const ScaledPoint&, const ScaledPoint&) = default;
};

inline long long pow4(int m) {
  long long v = 1;
  for (int i = 0; i < m; ++i) v *= 4;
  return v;
}

/// One contractive similarity of the eight-map system: quarter-turn rotation
/// (angle in {0, pi/2, 3pi/2}), contraction ratio 1/4, and an integer
/// translation applied before the final division by four.
class Similarity {
 public:
  Similarity(int quarter_turns, long long tx, long long ty)
      : quarter_turns_(((quarter_turns % 4) + 4) % 4), tx_(tx), ty_(ty) {}

  double angle() const { return quarter_turns_ * 1.5707963267948966; }
  double ratio() const { return 0.25; }
  Point translation() const { return {tx_ / 4.0, ty_ / 4.0}; }

  Point apply(Point p) const {
    const auto [rx, ry] = rotate(p.x, p.y);
    return {(rx + tx_) / 4.0, (ry + ty_) / 4.0};
  }

  /// Exact image of a point with denominator 4^level; the result carries
  /// denominator 4^(level+1).
  ScaledPoint apply_scaled(ScaledPoint p, int level) const {
    const auto [rx, ry] = rotate(p.x, p.y);
    const long long s = pow4(level);
    return {rx + tx_ * s, ry + ty_ * s};
  }

 private:
  template <typename T>
  std::pair<T, T> rotate(T x, T y) const {
    switch (quarter_turns_) {
      case 0: return {x, y};
      case 1: return {-y, x};
      case 2: return {-x, -y};
      default: return {y, -x};
    }
  }

  int quarter_turns_;
  long long tx_;
  long long ty_;
};

/// The eight similarities of the curve, in curve order.
inline const std::array<Similarity, 8>& build_similarities() {
  static const std::array<Similarity, 8> maps = {{
      {0, 0, 0},   // f1
      {1, 1, 0},   // f2
      {0, 1, 1},   // f3
      {3, 2, 1},   // f4
      {3, 2, 0},   // f5
      {0, 2, -1},  // f6
      {1, 3, -1},  // f7
      {0, 3, 0},   // f8
  }};
  return maps;
}

/// Number of vertices at level m: 2, then 8*N - 7, i.e. 8^m + 1.
inline std::uint64_t vertex_count(int m) {
  if (m < 0) throw std::invalid_argument("vertex_count: negative level");
  if (m > 20) throw std::overflow_error("vertex_count: 8^m + 1 exceeds 64 bits");
  std::uint64_t n = 2;
  for (int i = 0; i < m; ++i) n = 8 * n - 7;
  return n;
}

struct Word {
  std::vector<int> letters;  // values in 1..8; empty word is the identity map
  std::size_t length() const { return letters.size(); }
};

/// Composition f_W = f_{W_1} o ... o f_{W_m} applied to p.
inline Point apply_word(const Word& w, Point p) {
  const auto& maps = build_similarities();
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    if (*it < 1 || *it > 8) throw std::invalid_argument("apply_word: letter outside 1..8");
    p = maps[static_cast<std::size_t>(*it - 1)].apply(p);
  }
  return p;
}

/// Vertex set of one refinement level, ordered along the curve from (0,0) to
/// (1,0). Edges are the consecutive-index pairs; the two endpoints are the
/// boundary.
struct LevelGraph {
  int level = 0;
  long long denominator = 1;  // 4^level
  std::vector<ScaledPoint> scaled;

  std::size_t size() const { return scaled.size(); }
  std::size_t edge_count() const { return scaled.empty() ? 0 : scaled.size() - 1; }
  bool is_boundary(std::size_t i) const { return i == 0 || i + 1 == scaled.size(); }
  int degree(std::size_t i) const { return is_boundary(i) ? 1 : 2; }

  Point vertex(std::size_t i) const {
    const double d = static_cast<double>(denominator);
    return {scaled[i].x / d, scaled[i].y / d};
  }
};

/// Builds the level-m graph by applying the eight maps to the previous level
/// and merging the shared cell endpoints, which is exact on the integer
/// lattice. Consecutive cells must agree on their junction vertex; that and
/// the final count are asserted.
inline LevelGraph build_level(int m, int level_cap = kDefaultLevelCap) {
  if (m < 0) throw std::invalid_argument("build_level: negative level");
  if (m > level_cap)
    throw std::length_error("build_level: level " + std::to_string(m) +
                            " above cap " + std::to_string(level_cap));
  LevelGraph g;
  g.level = 0;
  g.denominator = 1;
  g.scaled = {{0, 0}, {1, 0}};
  const auto& maps = build_similarities();
  for (int lvl = 0; lvl < m; ++lvl) {
    LevelGraph next;
    next.level = lvl + 1;
    next.denominator = g.denominator * 4;
    next.scaled.reserve(8 * (g.scaled.size() - 1) + 1);
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const std::size_t first = i == 0 ? 0 : 1;
      if (i > 0) {
        const ScaledPoint junction = maps[i].apply_scaled(g.scaled.front(), lvl);
        if (!(junction == next.scaled.back()))
          throw std::logic_error("build_level: cells do not share their junction vertex");
      }
      for (std::size_t v = first; v < g.scaled.size(); ++v)
        next.scaled.push_back(maps[i].apply_scaled(g.scaled[v], lvl));
    }
    g = std::move(next);
  }
  if (g.scaled.size() != vertex_count(m))
    throw std::logic_error("build_level: vertex count mismatch");
  return g;
}

/// CSV export: index, x_num, x_den, y_num, y_den, is_boundary. Fractions are
/// reduced; edges are implied by consecutive indices.
inline void write_level_csv(const LevelGraph& g, std::ostream& os) {
  os << "index,x_num,x_den,y_num,y_den,is_boundary\n";
  for (std::size_t i = 0; i < g.scaled.size(); ++i) {
    const auto emit = [&](long long num) {
      long long den = g.denominator;
      const long long gd = std::gcd(num < 0 ? -num : num, den);
      if (gd > 1) {
        num /= gd;
        den /= gd;
      }
      if (num == 0) den = 1;
      os << num << ',' << den;
    };
    os << i << ',';
    emit(g.scaled[i].x);
    os << ',';
    emit(g.scaled[i].y);
    os << ',' << (g.is_boundary(i) ? 1 : 0) << '\n';
  }
}

}  // namespace fractal_spectra
