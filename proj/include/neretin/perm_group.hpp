#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "neretin/bigint.hpp"
#include "neretin/permutation.hpp"

namespace neretin {

/// Base and strong generating set built by deterministic Schreier-Sims.
///
/// The chain can be extended one generator at a time; after every call to
/// `extend` it describes exactly the group generated by everything added so far.
class StabilizerChain {
 public:
  explicit StabilizerChain(std::size_t degree);

  std::size_t degree() const { return degree_; }
  /// Adds `g` to the generated group. Returns false when `g` was already a member.
  bool extend(const Permutation& g);
  bool contains(const Permutation& g) const;
  Integer order() const;

  std::vector<Point> base() const;
  std::vector<std::size_t> orbit_sizes() const;
  const std::vector<Permutation>& strong_generators() const { return strong_; }
  /// Uniformly distributed group element.
  Permutation random_element(std::mt19937_64& rng) const;

 private:
  struct Level {
    Point base = 0;
    std::vector<std::size_t> gens;
    std::vector<Point> orbit;
    std::vector<std::int32_t> position;  // degree-sized; -1 when off-orbit
    std::vector<Permutation> transversal;
    std::vector<Permutation> transversal_inv;
    std::vector<std::vector<bool>> checked;  // [orbit position][generator slot]
  };

  struct SiftResult {
    Permutation residue;
    std::size_t level;
  };

  SiftResult sift(Permutation g, std::size_t from) const;
  void add_strong_generator(const Permutation& g, std::size_t first, std::size_t last);
  void extend_orbit(Level& level);
  void complete_from(std::size_t start);

  std::size_t degree_;
  std::vector<Permutation> strong_;
  std::vector<Level> levels_;
};

/// A finitely generated permutation group with exact order and membership.
/// Immutable after construction; copies share the stabilizer chain.
class PermGroup {
 public:
  /// Generators must share `degree`; an empty list gives the trivial group.
  PermGroup(std::size_t degree, std::vector<Permutation> generators);

  static PermGroup trivial(std::size_t degree) { return PermGroup(degree, {}); }
  /// Sym or Alt on the listed points (all of them when `points` is empty).
  static PermGroup symmetric(std::size_t degree, std::vector<Point> points = {});
  static PermGroup alternating(std::size_t degree, std::vector<Point> points = {});

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  const Integer& order() const { return order_; }
  /// [Sym(degree) : G] as an exact integer.
  Integer index_in_symmetric() const;
  bool contains(const Permutation& g) const;
  Permutation random_element(std::mt19937_64& rng) const { return chain_->random_element(rng); }
  const StabilizerChain& chain() const { return *chain_; }

 private:
  std::size_t degree_;
  std::vector<Permutation> generators_;
  std::shared_ptr<const StabilizerChain> chain_;
  Integer order_;
};

/// Orbit partition of the group's domain; orbits sorted, ordered by least point.
std::vector<std::vector<Point>> orbits(const PermGroup& g);

struct BlockSystem {
  std::vector<Point> orbit;
  std::vector<std::vector<Point>> blocks;
  std::size_t block_count() const { return blocks.size(); }
};

struct OrbitBlocks {
  std::vector<Point> orbit;
  /// Non-trivial system with the most blocks; empty when the action is primitive.
  std::optional<BlockSystem> finest;
  bool primitive() const { return !finest.has_value(); }
};

/// Finest G-invariant partition of `orbit` in which `a` and `b` share a block.
std::vector<std::vector<Point>> minimal_block_system(const PermGroup& g, std::span<const Point> orbit,
                                                     Point a, Point b);

std::vector<OrbitBlocks> orbits_and_blocks(const PermGroup& g);

enum class Transitivity { Intransitive, Transitive, TwoTransitive };

const char* to_string(Transitivity t);

/// Transitivity of the action on the invariant subset `points` (all points when empty).
Transitivity transitivity_degree(const PermGroup& g, std::span<const Point> points = {});

/// Returns the group induced on the invariant subset `points`, relabelled to 0..|points|-1.
PermGroup restrict_to(const PermGroup& g, std::span<const Point> points);

struct AltContainment {
  bool contained = false;
  /// 3-cycles (z0 z1 z) that were checked, in order; all members when `contained`.
  std::vector<Permutation> witnesses;
};

/// Decides Alt(Z) <= G by testing the 3-cycles (z0 z1 z) that generate Alt(Z).
AltContainment contains_alt_on(const PermGroup& g, std::span<const Point> z);

enum class GiantClass { FullSymmetric, Alternating, NotGiant, Inconclusive };

const char* to_string(GiantClass c);

struct JordanOptions {
  std::size_t budget = 10000;
  std::uint64_t seed = 1;
};

struct JordanResult {
  GiantClass tag = GiantClass::Inconclusive;
  bool primitive = false;
  /// Prime cycle used for the giant conclusion, when one was found.
  std::optional<Permutation> prime_cycle;
  std::size_t elements_examined = 0;
};

/// Giant detection on a transitive group through primitivity plus a prime cycle
/// (p + 3 <= k, or a 3-cycle in any degree).
JordanResult jordan_classify(const PermGroup& g, const JordanOptions& options = {});

/// Searches `g` for a single p-cycle: a power of one of `candidates`, of the
/// group's generators, then of seeded uniform random elements.
std::optional<Permutation> find_prime_cycle(const PermGroup& g, std::uint64_t p, std::size_t budget,
                                            std::mt19937_64& rng, std::size_t* examined = nullptr);

/// If a power of `x` is a single p-cycle, returns it.
std::optional<Permutation> prime_cycle_power(const Permutation& x, std::uint64_t p);

/// Supports meet but neither contains the other.
bool overlapping_supports(const Permutation& a, const Permutation& b);

struct ChainedTransitivity {
  PermGroup group;
  std::vector<Point> support;
  Transitivity verdict;
};

/// Checks the chaining hypothesis on prime cycles and the 2-transitivity of
/// the generated group on the union of supports.
ChainedTransitivity chained_two_transitivity(const std::vector<Permutation>& cycles);

bool is_prime(std::uint64_t n);

}  // namespace neretin
