#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neretin/bigint.hpp"
#include "neretin/permutation.hpp"

namespace neretin {

/// Endpoint of the distinguished edge e0.
enum class Side : std::uint8_t { L = 0, R = 1 };

/// A vertex of the (d+1)-regular tree, addressed from the nearer endpoint of e0.
///
/// Every vertex other than the two endpoints has a unique parent one step
/// closer to e0 and exactly d children; the digits name the children taken
/// on the way down. Ordering is lexicographic by (side, path), so a prefix
/// sorts before its extensions.
struct VertexAddress {
  Side side = Side::L;
  std::vector<std::uint8_t> path;

  std::size_t level() const { return path.size(); }
  VertexAddress parent() const;
  VertexAddress child(std::uint8_t digit) const;
  bool is_prefix_of(const VertexAddress& other) const;

  /// "L01", "R" and so on; digits are single characters, so d <= 10.
  std::string to_string() const;
  static VertexAddress parse(std::string_view text);

  friend auto operator<=>(const VertexAddress&, const VertexAddress&) = default;
  friend bool operator==(const VertexAddress&, const VertexAddress&) = default;
};

/// The ball of radius n around e0 in the (d+1)-regular tree.
struct BallSpec {
  int d = 2;
  int n = 0;
};

void validate_branching(int d);

/// k_n = |K_n| = 2 d^n.
Integer sphere_size(const BallSpec& spec);
/// a_n = |Aut(B_n)| = 2 (d!)^(2 (d^n - 1)/(d - 1)).
Integer ball_automorphism_count(const BallSpec& spec);

struct SphereAndBallCounts {
  Integer k_n;
  Integer a_n;
};
SphereAndBallCounts sphere_and_ball_counts(const BallSpec& spec);

/// Sphere size as a machine integer; throws ResourceError past `cap`.
std::size_t sphere_size_checked(int d, int n, std::size_t cap = 1u << 20);

// Sphere indexing: the level-n addresses, sorted lexicographically, are
// numbered 0..k_n-1. Index i has parent floor(i/d) on level n-1.
std::size_t sphere_index(const VertexAddress& v, int d);
VertexAddress sphere_address(std::size_t index, int d, int n);

/// Generators of Aut(B_n) acting on K_n: the edge flip plus, for every vertex
/// at level < n, the adjacent transpositions (c c+1) of its child subtrees.
std::vector<Permutation> ball_aut_generators(const BallSpec& spec);

/// The edge flip acting on K_n.
Permutation edge_flip_on_sphere(int d, int n);

/// Swap of the subtrees below children c1, c2 of `v`, acting on K_n.
Permutation child_swap_on_sphere(int d, int n, const VertexAddress& v, std::uint8_t c1, std::uint8_t c2);

struct ParentProjection {
  /// Induced permutation of K_{n-1}, when every sibling class maps onto a sibling class.
  std::optional<Permutation> induced;
  /// First sibling class (on K_n) whose image is not a sibling class.
  std::vector<Point> witness_class;
  bool sibling_respecting() const { return induced.has_value(); }
};

/// Level of the sphere whose size is `degree`; throws ValidationError if none.
int sphere_level_of_degree(int d, std::size_t degree);

ParentProjection parent_projection(const Permutation& sigma, int d);

}  // namespace neretin
