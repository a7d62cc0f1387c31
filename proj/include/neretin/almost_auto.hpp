#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "neretin/permutation.hpp"
#include "neretin/tree.hpp"

namespace neretin {

struct LeafPair {
  VertexAddress from;
  VertexAddress to;
  friend bool operator==(const LeafPair&, const LeafPair&) = default;
};

/// A finitary almost automorphism of the (d+1)-regular tree, stored as a tree
/// pair: a leaf of the domain antichain together with everything below it is
/// carried rigidly (suffixes preserved) onto its partner range leaf.
///
/// Pairs are kept sorted by domain address. A value may be in non-reduced
/// form; `canonicalize` removes collapsible carets. Equality and hashing go
/// through the canonical form.
class AlmostAutomorphism {
 public:
  AlmostAutomorphism() : AlmostAutomorphism(identity(2)) {}

  /// Validates both antichains and the bijection; keeps the representation as given.
  static AlmostAutomorphism from_pairs(int d, std::vector<LeafPair> pairs);
  /// Domain and range arrays plus (domain index, range index) pairs.
  static AlmostAutomorphism from_leaves(int d, const std::vector<VertexAddress>& domain,
                                        const std::vector<VertexAddress>& range,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& map);
  static AlmostAutomorphism identity(int d);
  static AlmostAutomorphism edge_flip(int d);
  /// The element acting on K_n by `sigma` and rigidly below it (canonicalized).
  static AlmostAutomorphism from_level_permutation(int d, int n, const Permutation& sigma);

  int d() const { return d_; }
  const std::vector<LeafPair>& pairs() const { return pairs_; }
  bool is_canonical() const { return canonical_; }
  bool is_identity() const;

  std::vector<VertexAddress> domain() const;
  /// Range leaves, sorted.
  std::vector<VertexAddress> range() const;
  /// For each domain index (sorted domain order), its index in `range()`.
  std::vector<std::size_t> range_indices() const;
  std::size_t leaf_count() const { return pairs_.size(); }
  /// Compact text form, e.g. "L0>R1 L1>L R0>R0 ..." for diagnostics.
  std::string to_string() const;

  friend AlmostAutomorphism canonicalize(const AlmostAutomorphism& g);
  friend bool operator==(const AlmostAutomorphism& a, const AlmostAutomorphism& b);

 private:
  AlmostAutomorphism(int d, std::vector<LeafPair> pairs, bool canonical)
      : d_(d), pairs_(std::move(pairs)), canonical_(canonical) {}

  int d_ = 2;
  std::vector<LeafPair> pairs_;
  bool canonical_ = false;

  friend AlmostAutomorphism compose(const AlmostAutomorphism& g, const AlmostAutomorphism& h);
  friend AlmostAutomorphism inverse(const AlmostAutomorphism& g);
};

/// Unique reduced representative: no full sibling set of domain leaves mapped
/// in child order onto a full sibling set of range leaves.
AlmostAutomorphism canonicalize(const AlmostAutomorphism& g);

/// g o h: h acts first. Throws ValidationError on mismatched d.
AlmostAutomorphism compose(const AlmostAutomorphism& g, const AlmostAutomorphism& h);
AlmostAutomorphism inverse(const AlmostAutomorphism& g);
inline AlmostAutomorphism operator*(const AlmostAutomorphism& g, const AlmostAutomorphism& h) {
  return compose(g, h);
}

/// Splits the pair whose domain leaf is `leaf` into its d children pairs.
AlmostAutomorphism expand_at(const AlmostAutomorphism& g, const VertexAddress& leaf);

struct LevelMembership {
  bool in_O = false;
  /// Least n with the element in O_n; meaningful only when in_O.
  int min_level = 0;
  /// Deepest domain leaf of the canonical form.
  int max_depth = 0;
  /// For elements outside O: a matched pair whose depths differ.
  std::optional<LeafPair> depth_witness;
};

LevelMembership min_O_level(const AlmostAutomorphism& g);

/// pi_n(g) on the sphere indexing of K_n. Throws PreconditionError when g is not in O_n.
Permutation project_level(const AlmostAutomorphism& g, int n);

/// g lies in O_n and pi_n(g) is the identity.
bool in_U_level(const AlmostAutomorphism& g, int n);

/// Uniformly random complete antichain with `leaves` leaves, grown by random caret splits.
std::vector<VertexAddress> random_antichain(int d, std::size_t leaves, std::mt19937_64& rng);
/// Random element from two random antichains and a random bijection (generally outside O).
AlmostAutomorphism random_tree_pair(int d, std::size_t carets, std::mt19937_64& rng);
/// Random element of O_n: a random permutation of K_n, then `splits` random rigid refinements.
AlmostAutomorphism random_level_element(int d, int n, std::size_t splits, std::mt19937_64& rng);

struct BallElement {
  AlmostAutomorphism element;
  /// Signed generator indices: +i is generator i-1, -i its inverse.
  std::vector<int> word;
};

struct CayleyBall {
  std::vector<BallElement> elements;
  std::size_t word_length = 0;
  bool truncated = false;
};

/// All products of at most `length` generators and inverses, deduplicated,
/// each with one shortest word. Stops at `cap` elements and flags truncation.
CayleyBall cayley_ball(const std::vector<AlmostAutomorphism>& generators, std::size_t length,
                       std::size_t cap = 200000);

}  // namespace neretin

template <>
struct std::hash<neretin::AlmostAutomorphism> {
  std::size_t operator()(const neretin::AlmostAutomorphism& g) const noexcept;
};
