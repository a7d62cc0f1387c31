#include "neretin/perm_group.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "neretin/error.hpp"

namespace neretin {

// ---------------------------------------------------------------------------
// StabilizerChain

StabilizerChain::StabilizerChain(std::size_t degree) : degree_(degree) {
  if (degree == 0) throw ValidationError("permutation groups need a positive degree");
}

StabilizerChain::SiftResult StabilizerChain::sift(Permutation g, std::size_t from) const {
  for (std::size_t l = from; l < levels_.size(); ++l) {
    const Level& level = levels_[l];
    const std::int32_t pos = level.position[g(level.base)];
    if (pos < 0) return {std::move(g), l};
    g.premultiply(level.transversal_inv[static_cast<std::size_t>(pos)]);
  }
  return {std::move(g), levels_.size()};
}

void StabilizerChain::extend_orbit(Level& level) {
  for (std::size_t j = 0; j < level.orbit.size(); ++j) {
    for (const std::size_t gi : level.gens) {
      const Permutation& s = strong_[gi];
      const Point y = s(level.orbit[j]);
      if (level.position[y] >= 0) continue;
      level.position[y] = static_cast<std::int32_t>(level.orbit.size());
      level.orbit.push_back(y);
      level.transversal.push_back(s * level.transversal[j]);
      level.transversal_inv.push_back(level.transversal.back().inverse());
    }
  }
  level.checked.resize(level.orbit.size());
  for (auto& row : level.checked) row.resize(level.gens.size(), false);
}

void StabilizerChain::add_strong_generator(const Permutation& g, std::size_t first, std::size_t last) {
  const std::size_t index = strong_.size();
  strong_.push_back(g);
  if (last == levels_.size()) {
    Level level;
    const CycleDecomposition cd = cycle_decomposition(g);
    level.base = cd.support.front();
    level.position.assign(degree_, -1);
    level.position[level.base] = 0;
    level.orbit.push_back(level.base);
    level.transversal.emplace_back(degree_);
    level.transversal_inv.emplace_back(degree_);
    levels_.push_back(std::move(level));
  }
  for (std::size_t l = first; l <= last; ++l) {
    levels_[l].gens.push_back(index);
    extend_orbit(levels_[l]);
  }
}

void StabilizerChain::complete_from(std::size_t start) {
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(start);
  while (i >= 0) {
    const auto li = static_cast<std::size_t>(i);
    bool restarted = false;
    for (std::size_t j = 0; j < levels_[li].orbit.size() && !restarted; ++j) {
      for (std::size_t s = 0; s < levels_[li].gens.size(); ++s) {
        Level& level = levels_[li];
        if (level.checked[j][s]) continue;
        level.checked[j][s] = true;
        const Permutation& gen = strong_[level.gens[s]];
        const Point y = gen(level.orbit[j]);
        Permutation h = gen * level.transversal[j];
        h.premultiply(level.transversal_inv[static_cast<std::size_t>(level.position[y])]);
        if (h.is_identity()) continue;
        SiftResult sifted = sift(std::move(h), li + 1);
        if (!sifted.residue.is_identity()) {
          add_strong_generator(sifted.residue, li + 1, sifted.level);
          i = static_cast<std::ptrdiff_t>(sifted.level);
          restarted = true;
          break;
        }
      }
    }
    if (!restarted) --i;
  }
}

bool StabilizerChain::extend(const Permutation& g) {
  if (g.degree() != degree_) throw ValidationError("generator degree does not match group degree");
  SiftResult sifted = sift(g, 0);
  if (sifted.residue.is_identity()) return false;
  const std::size_t level = sifted.level;
  add_strong_generator(sifted.residue, 0, level);
  complete_from(level);
  return true;
}

bool StabilizerChain::contains(const Permutation& g) const {
  if (g.degree() != degree_) return false;
  return sift(g, 0).residue.is_identity();
}

Integer StabilizerChain::order() const {
  Integer out = 1;
  for (const auto& level : levels_) out *= static_cast<unsigned long>(level.orbit.size());
  return out;
}

std::vector<Point> StabilizerChain::base() const {
  std::vector<Point> out;
  for (const auto& level : levels_) out.push_back(level.base);
  return out;
}

std::vector<std::size_t> StabilizerChain::orbit_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& level : levels_) out.push_back(level.orbit.size());
  return out;
}

Permutation StabilizerChain::random_element(std::mt19937_64& rng) const {
  Permutation g(degree_);
  for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
    std::uniform_int_distribution<std::size_t> pick(0, it->orbit.size() - 1);
    g.premultiply(it->transversal[pick(rng)]);
  }
  return g;
}

// ---------------------------------------------------------------------------
// PermGroup

PermGroup::PermGroup(std::size_t degree, std::vector<Permutation> generators)
    : degree_(degree), generators_(std::move(generators)) {
  auto chain = std::make_shared<StabilizerChain>(degree);
  for (const auto& g : generators_) {
    if (g.degree() != degree) {
      throw ValidationError("generator of degree " + std::to_string(g.degree()) +
                            " in a group of degree " + std::to_string(degree));
    }
    chain->extend(g);
  }
  order_ = chain->order();
  chain_ = std::move(chain);
}

namespace {

std::vector<Point> all_points(std::size_t degree, std::vector<Point> points) {
  if (points.empty()) {
    points.resize(degree);
    std::iota(points.begin(), points.end(), Point{0});
  }
  validate_point_set(points, degree);
  return points;
}

}  // namespace

PermGroup PermGroup::symmetric(std::size_t degree, std::vector<Point> points) {
  points = all_points(degree, std::move(points));
  std::vector<Permutation> gens;
  if (points.size() >= 2) {
    gens.push_back(Permutation::transposition(degree, points[0], points[1]));
    if (points.size() >= 3) gens.push_back(Permutation::from_cycles(degree, {points}));
  }
  return PermGroup(degree, std::move(gens));
}

PermGroup PermGroup::alternating(std::size_t degree, std::vector<Point> points) {
  points = all_points(degree, std::move(points));
  std::vector<Permutation> gens;
  for (std::size_t i = 2; i < points.size(); ++i)
    gens.push_back(Permutation::from_cycles(degree, {{points[0], points[1], points[i]}}));
  return PermGroup(degree, std::move(gens));
}

Integer PermGroup::index_in_symmetric() const {
  Integer out = factorial(degree_);
  mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), order_.get_mpz_t());
  return out;
}

bool PermGroup::contains(const Permutation& g) const { return chain_->contains(g); }

// ---------------------------------------------------------------------------
// Orbits and blocks

std::vector<std::vector<Point>> orbits(const PermGroup& g) {
  const std::size_t n = g.degree();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<Point>> out;
  for (Point start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<Point> orbit{start};
    seen[start] = true;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      for (const auto& gen : g.generators()) {
        const Point y = gen(orbit[i]);
        if (!seen[y]) {
          seen[y] = true;
          orbit.push_back(y);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), Point{0}); }
  Point find(Point x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(Point a, Point b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
  std::vector<Point> parent;
};

}  // namespace

std::vector<std::vector<Point>> minimal_block_system(const PermGroup& g, std::span<const Point> orbit,
                                                     Point a, Point b) {
  UnionFind uf(g.degree());
  std::vector<std::pair<Point, Point>> queue;
  uf.unite(a, b);
  queue.emplace_back(a, b);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto [x, y] = queue[i];
    for (const auto& gen : g.generators()) {
      const Point gx = gen(x);
      const Point gy = gen(y);
      if (uf.unite(gx, gy)) queue.emplace_back(gx, gy);
    }
  }
  std::vector<std::vector<Point>> blocks;
  std::vector<std::int64_t> slot(g.degree(), -1);
  for (const Point x : orbit) {
    const Point r = uf.find(x);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::int64_t>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot[r])].push_back(x);
  }
  for (auto& block : blocks) std::sort(block.begin(), block.end());
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

std::vector<OrbitBlocks> orbits_and_blocks(const PermGroup& g) {
  std::vector<OrbitBlocks> out;
  for (auto& orbit : orbits(g)) {
    OrbitBlocks entry;
    entry.orbit = orbit;
    const std::size_t m = orbit.size();
    if (m >= 4 && !is_prime(m)) {
      const Point a = orbit.front();
      for (std::size_t j = 1; j < m; ++j) {
        auto blocks = minimal_block_system(g, orbit, a, orbit[j]);
        if (blocks.size() <= 1) continue;
        const bool better = !entry.finest || blocks.size() > entry.finest->block_count() ||
                            (blocks.size() == entry.finest->block_count() &&
                             blocks.front() < entry.finest->blocks.front());
        if (better) entry.finest = BlockSystem{orbit, std::move(blocks)};
      }
    }
    out.push_back(std::move(entry));
  }
  return out;
}

const char* to_string(Transitivity t) {
  switch (t) {
    case Transitivity::Intransitive: return "intransitive";
    case Transitivity::Transitive: return "transitive";
    case Transitivity::TwoTransitive: return "2-transitive";
  }
  return "?";
}

Transitivity transitivity_degree(const PermGroup& g, std::span<const Point> points) {
  std::vector<Point> s(points.begin(), points.end());
  if (s.empty()) {
    s.resize(g.degree());
    std::iota(s.begin(), s.end(), Point{0});
  }
  validate_point_set(s, g.degree());
  std::vector<std::int64_t> pos(g.degree(), -1);
  for (std::size_t i = 0; i < s.size(); ++i) pos[s[i]] = static_cast<std::int64_t>(i);
  for (const auto& gen : g.generators())
    for (const Point x : s)
      if (pos[gen(x)] < 0) throw PreconditionError("point subset is not invariant under the group");

  const std::size_t m = s.size();
  if (m == 1) return Transitivity::Transitive;

  std::vector<bool> seen(m, false);
  std::vector<Point> orbit{s[0]};
  seen[0] = true;
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    for (const auto& gen : g.generators()) {
      const auto y = static_cast<std::size_t>(pos[gen(orbit[i])]);
      if (!seen[y]) {
        seen[y] = true;
        orbit.push_back(s[y]);
      }
    }
  }
  if (orbit.size() < m) return Transitivity::Intransitive;

  std::vector<bool> pair_seen(m * m, false);
  std::vector<std::pair<std::size_t, std::size_t>> queue{{0, 1}};
  pair_seen[1] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto [x, y] = queue[i];
    for (const auto& gen : g.generators()) {
      const auto gx = static_cast<std::size_t>(pos[gen(s[x])]);
      const auto gy = static_cast<std::size_t>(pos[gen(s[y])]);
      if (!pair_seen[gx * m + gy]) {
        pair_seen[gx * m + gy] = true;
        queue.emplace_back(gx, gy);
      }
    }
  }
  return queue.size() == m * (m - 1) ? Transitivity::TwoTransitive : Transitivity::Transitive;
}

PermGroup restrict_to(const PermGroup& g, std::span<const Point> points) {
  validate_point_set(points, g.degree());
  if (points.empty()) throw PreconditionError("cannot restrict to an empty point set");
  std::vector<std::int64_t> pos(g.degree(), -1);
  for (std::size_t i = 0; i < points.size(); ++i) pos[points[i]] = static_cast<std::int64_t>(i);
  std::vector<Permutation> gens;
  for (const auto& gen : g.generators()) {
    std::vector<Point> images(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::int64_t y = pos[gen(points[i])];
      if (y < 0) throw PreconditionError("point subset is not invariant under the group");
      images[i] = static_cast<Point>(y);
    }
    Permutation p(std::move(images));
    if (!p.is_identity()) gens.push_back(std::move(p));
  }
  return PermGroup(points.size(), std::move(gens));
}

AltContainment contains_alt_on(const PermGroup& g, std::span<const Point> z) {
  if (z.size() < 3) throw PreconditionError("contains_alt_on needs |Z| >= 3");
  validate_point_set(z, g.degree());
  AltContainment out;
  out.contained = true;
  for (std::size_t i = 2; i < z.size(); ++i) {
    Permutation c = Permutation::from_cycles(g.degree(), {{z[0], z[1], z[i]}});
    if (!g.contains(c)) {
      out.contained = false;
      break;
    }
    out.witnesses.push_back(std::move(c));
  }
  if (!out.contained) out.witnesses.clear();
  return out;
}

// ---------------------------------------------------------------------------
// Giant detection

const char* to_string(GiantClass c) {
  switch (c) {
    case GiantClass::FullSymmetric: return "FullSymmetric";
    case GiantClass::Alternating: return "Alternating";
    case GiantClass::NotGiant: return "NotGiant";
    case GiantClass::Inconclusive: return "Inconclusive";
  }
  return "?";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t f = 3; f * f <= n; f += 2)
    if (n % f == 0) return false;
  return true;
}

std::optional<Permutation> prime_cycle_power(const Permutation& x, std::uint64_t p) {
  const CycleDecomposition cd = cycle_decomposition(x);
  unsigned best = 0;
  std::size_t count = 0;
  std::size_t length = 0;
  for (const auto& cycle : cd.cycles) {
    unsigned v = 0;
    for (std::size_t l = cycle.size(); l % p == 0; l /= p) ++v;
    if (v == 0) continue;
    if (v > best) {
      best = v;
      count = 1;
      length = cycle.size();
    } else if (v == best) {
      ++count;
    }
  }
  if (count != 1 || length != p) return std::nullopt;
  Integer exponent = x.order();
  exponent /= static_cast<unsigned long>(p);
  Permutation power = x.pow(exponent);
  if (!is_single_cycle(power, p)) throw std::logic_error("prime_cycle_power: inconsistent cycle structure");
  return power;
}

std::optional<Permutation> find_prime_cycle(const PermGroup& g, std::uint64_t p, std::size_t budget,
                                            std::mt19937_64& rng, std::size_t* examined) {
  std::size_t count = 0;
  std::optional<Permutation> found;
  for (const auto& gen : g.generators()) {
    ++count;
    if ((found = prime_cycle_power(gen, p))) break;
  }
  for (std::size_t i = 0; !found && i < budget; ++i) {
    ++count;
    found = prime_cycle_power(g.random_element(rng), p);
  }
  if (examined) *examined = count;
  return found;
}

JordanResult jordan_classify(const PermGroup& g, const JordanOptions& options) {
  const std::size_t k = g.degree();
  if (orbits(g).size() != 1) throw PreconditionError("jordan_classify needs a transitive group");
  JordanResult result;
  result.primitive = orbits_and_blocks(g).front().primitive();
  const Integer sym_order = factorial(k);
  const Integer alt_order = k >= 2 ? Integer(sym_order / 2) : sym_order;
  if (!result.primitive) {
    result.tag = GiantClass::NotGiant;
    return result;
  }

  // Jordan: a p-cycle with p + 3 <= k. A 3-cycle suffices in any degree.
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p + 3 <= k || (p == 3 && k >= 3); ++p)
    if (is_prime(p)) primes.push_back(p);

  auto scan = [&](const Permutation& x) {
    ++result.elements_examined;
    for (const auto p : primes) {
      if (auto c = prime_cycle_power(x, p)) {
        result.prime_cycle = std::move(c);
        return true;
      }
    }
    return false;
  };

  if (!primes.empty()) {
    bool found = false;
    for (const auto& gen : g.generators())
      if ((found = scan(gen))) break;
    std::mt19937_64 rng(options.seed);
    for (std::size_t i = 0; !found && i < options.budget; ++i) found = scan(g.random_element(rng));
  }

  if (result.prime_cycle) {
    const bool odd = std::any_of(g.generators().begin(), g.generators().end(),
                                 [](const Permutation& x) { return x.sign() < 0; });
    result.tag = odd ? GiantClass::FullSymmetric : GiantClass::Alternating;
    const Integer& expected = odd ? sym_order : alt_order;
    if (g.order() != expected)
      throw std::logic_error("jordan_classify: giant verdict contradicts the exact group order");
    return result;
  }
  result.tag = g.order() < alt_order ? GiantClass::NotGiant : GiantClass::Inconclusive;
  return result;
}

bool overlapping_supports(const Permutation& a, const Permutation& b) {
  const auto sa = cycle_decomposition(a).support;
  const auto sb = cycle_decomposition(b).support;
  std::vector<Point> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  return !common.empty() && common.size() < sa.size() && common.size() < sb.size();
}

ChainedTransitivity chained_two_transitivity(const std::vector<Permutation>& cycles) {
  if (cycles.empty()) throw PreconditionError("chained_two_transitivity needs at least one cycle");
  const std::size_t degree = cycles.front().degree();
  std::vector<Point> support;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (cycles[i].degree() != degree) throw ValidationError("cycles of different degrees");
    const CycleDecomposition cd = cycle_decomposition(cycles[i]);
    if (cd.cycles.size() != 1 || !is_prime(cd.cycles.front().size()))
      throw PreconditionError("element " + std::to_string(i) + " is not a prime cycle");
    if (i > 0) {
      bool linked = false;
      for (std::size_t j = 0; j < i && !linked; ++j) linked = overlapping_supports(cycles[i], cycles[j]);
      if (!linked)
        throw PreconditionError("chaining precondition fails at index " + std::to_string(i));
    }
    support.insert(support.end(), cd.support.begin(), cd.support.end());
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  PermGroup group(degree, cycles);
  const Transitivity verdict = transitivity_degree(group, support);
  return {std::move(group), std::move(support), verdict};
}

}  // namespace neretin
