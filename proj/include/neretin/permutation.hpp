#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neretin/bigint.hpp"

namespace neretin {

/// Points of a permutation domain are dense 0-based indices.
using Point = std::uint32_t;

/// A bijection of {0, ..., degree-1}, stored as its image table.
///
/// Products follow function composition: (a * b)(x) == a(b(x)), so `b`
/// acts first. This is the convention used throughout the library, in
/// particular by the level projections of almost automorphisms.
class Permutation {
 public:
  Permutation() = default;
  /// Identity of the given degree.
  explicit Permutation(std::size_t degree);
  /// Validates that `images` is a bijection; throws ValidationError otherwise.
  explicit Permutation(std::vector<Point> images);

  static Permutation identity(std::size_t degree) { return Permutation(degree); }
  /// Builds a permutation from disjoint cycles, e.g. {{0, 1, 2}, {3, 4}}.
  static Permutation from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles);
  /// Parses cycle notation such as "(0 1 2)(3 4)"; "()" is the identity.
  /// A degree of 0 means "smallest degree containing every listed point".
  static Permutation parse_cycles(std::string_view text, std::size_t degree = 0);
  static Permutation transposition(std::size_t degree, Point a, Point b);

  std::size_t degree() const { return images_.size(); }
  Point operator()(Point x) const { return images_[x]; }
  std::span<const Point> images() const { return images_; }

  Permutation inverse() const;
  bool is_identity() const;
  /// Power with an arbitrary-size exponent (negative exponents allowed).
  Permutation pow(const Integer& exponent) const;
  /// Order of the element, lcm of its cycle lengths.
  Integer order() const;
  /// +1 for even, -1 for odd.
  int sign() const;

  std::string to_cycle_string() const;

  /// In-place `*this = a * *this`.
  Permutation& premultiply(const Permutation& a);

  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Point> images_;
};

struct CycleDecomposition {
  /// Non-trivial cycles, each starting at its least point, ordered by that point.
  std::vector<std::vector<Point>> cycles;
  /// Moved points in increasing order.
  std::vector<Point> support;
  /// +1 even, -1 odd.
  int parity = 1;
};

CycleDecomposition cycle_decomposition(const Permutation& p);

/// True when `p` is a single cycle of length `length` (all other points fixed).
bool is_single_cycle(const Permutation& p, std::size_t length);

/// Point set is sorted and duplicate-free; throws ValidationError otherwise.
void validate_point_set(std::span<const Point> points, std::size_t degree);

}  // namespace neretin

template <>
struct std::hash<neretin::Permutation> {
  std::size_t operator()(const neretin::Permutation& p) const noexcept;
};
