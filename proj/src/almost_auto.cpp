#include "neretin/almost_auto.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "neretin/error.hpp"

namespace neretin {

namespace {

bool by_from(const LeafPair& a, const LeafPair& b) { return a.from < b.from; }
bool by_to(const LeafPair& a, const LeafPair& b) { return a.to < b.to; }

VertexAddress with_suffix(VertexAddress base, const VertexAddress& source, std::size_t skip) {
  base.path.insert(base.path.end(), source.path.begin() + static_cast<std::ptrdiff_t>(skip), source.path.end());
  return base;
}

bool same_parent(const VertexAddress& a, const VertexAddress& b) {
  return !a.path.empty() && a.side == b.side && a.path.size() == b.path.size() &&
         std::equal(a.path.begin(), a.path.end() - 1, b.path.begin());
}

// Sorted leaves must tile both sides: each leaf starts where the previous one's
// subtree ended, possibly descending along first children.
void validate_complete_antichain(const std::vector<VertexAddress>& leaves, int d, const char* what) {
  const auto fail = [&](const std::string& why) {
    throw ValidationError(std::string(what) + " is not a complete antichain: " + why);
  };
  std::size_t i = 0;
  for (const Side side : {Side::L, Side::R}) {
    VertexAddress cursor{side, {}};
    bool done = false;
    while (!done) {
      if (i == leaves.size() || leaves[i].side != side) fail("gap after " + cursor.to_string());
      const auto& x = leaves[i];
      for (const auto digit : x.path)
        if (digit >= d) fail("digit out of range in " + x.to_string());
      if (!cursor.is_prefix_of(x)) fail("unexpected leaf " + x.to_string());
      for (std::size_t j = cursor.path.size(); j < x.path.size(); ++j)
        if (x.path[j] != 0) fail("gap before " + x.to_string());
      cursor = x;
      while (!cursor.path.empty() && cursor.path.back() == d - 1) cursor.path.pop_back();
      if (cursor.path.empty()) {
        done = true;
      } else {
        ++cursor.path.back();
      }
      ++i;
    }
  }
  if (i != leaves.size()) fail("leaf " + leaves[i].to_string() + " overlaps an earlier one");
}

struct NodeImages {
  LevelMembership membership;
  // Images of internal domain-tree vertices that are carried onto a vertex.
  std::map<VertexAddress, VertexAddress> internal;
};

// Walks the domain tree bottom-up. An internal vertex has an image when the
// images of its children are exactly the children of one vertex w.
NodeImages analyze(const AlmostAutomorphism& canonical) {
  NodeImages out;
  auto& m = out.membership;
  for (const auto& pair : canonical.pairs()) {
    m.max_depth = std::max(m.max_depth, static_cast<int>(pair.from.level()));
    if (pair.from.level() != pair.to.level() && !m.depth_witness) m.depth_witness = pair;
  }
  if (m.depth_witness) return out;
  m.in_O = true;

  const auto d = static_cast<std::size_t>(canonical.d());
  struct Entry {
    VertexAddress v;
    std::optional<VertexAddress> image;
  };
  std::vector<Entry> stack;
  int bad_level = -1;
  for (const auto& pair : canonical.pairs()) {
    stack.push_back({pair.from, pair.to});
    while (stack.size() >= d) {
      const std::size_t first = stack.size() - d;
      const auto& head = stack[first].v;
      if (head.path.empty() || head.path.back() != 0) break;
      bool siblings = true;
      for (std::size_t c = 1; c < d && siblings; ++c) siblings = same_parent(head, stack[first + c].v);
      if (!siblings) break;
      VertexAddress parent = head.parent();
      std::optional<VertexAddress> image;
      bool defined = stack[first].image.has_value();
      for (std::size_t c = 1; c < d && defined; ++c)
        defined = stack[first + c].image && same_parent(*stack[first].image, *stack[first + c].image);
      if (defined) {
        image = stack[first].image->parent();
        out.internal.emplace(parent, *image);
      } else {
        bad_level = std::max(bad_level, static_cast<int>(parent.level()));
      }
      stack.resize(first);
      stack.push_back({std::move(parent), std::move(image)});
    }
  }
  m.min_level = bad_level + 1;
  return out;
}

}  // namespace

AlmostAutomorphism AlmostAutomorphism::from_pairs(int d, std::vector<LeafPair> pairs) {
  validate_branching(d);
  std::sort(pairs.begin(), pairs.end(), by_from);
  std::vector<VertexAddress> leaves;
  for (const auto& p : pairs) leaves.push_back(p.from);
  validate_complete_antichain(leaves, d, "domain");
  leaves.clear();
  for (const auto& p : pairs) leaves.push_back(p.to);
  std::sort(leaves.begin(), leaves.end());
  validate_complete_antichain(leaves, d, "range");
  return AlmostAutomorphism(d, std::move(pairs), false);
}

AlmostAutomorphism AlmostAutomorphism::from_leaves(int d, const std::vector<VertexAddress>& domain,
                                                   const std::vector<VertexAddress>& range,
                                                   const std::vector<std::pair<std::size_t, std::size_t>>& map) {
  if (domain.size() != range.size()) throw ValidationError("domain and range have different sizes");
  if (!std::is_sorted(domain.begin(), domain.end()) || !std::is_sorted(range.begin(), range.end()))
    throw ValidationError("domain and range must be sorted");
  if (map.size() != domain.size()) throw ValidationError("map must pair every domain leaf exactly once");
  std::vector<bool> seen_from(domain.size()), seen_to(range.size());
  std::vector<LeafPair> pairs;
  for (const auto& [i, j] : map) {
    if (i >= domain.size() || j >= range.size() || seen_from[i] || seen_to[j])
      throw ValidationError("map is not a bijection between leaf indices");
    seen_from[i] = seen_to[j] = true;
    pairs.push_back({domain[i], range[j]});
  }
  return from_pairs(d, std::move(pairs));
}

AlmostAutomorphism AlmostAutomorphism::identity(int d) {
  validate_branching(d);
  return AlmostAutomorphism(d, {{{Side::L, {}}, {Side::L, {}}}, {{Side::R, {}}, {Side::R, {}}}}, true);
}

AlmostAutomorphism AlmostAutomorphism::edge_flip(int d) {
  validate_branching(d);
  return AlmostAutomorphism(d, {{{Side::L, {}}, {Side::R, {}}}, {{Side::R, {}}, {Side::L, {}}}}, true);
}

AlmostAutomorphism AlmostAutomorphism::from_level_permutation(int d, int n, const Permutation& sigma) {
  const std::size_t k = sphere_size_checked(d, n);
  if (sigma.degree() != k) throw ValidationError("permutation degree does not match the sphere size");
  std::vector<LeafPair> pairs;
  pairs.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    pairs.push_back({sphere_address(i, d, n), sphere_address(sigma(static_cast<Point>(i)), d, n)});
  return canonicalize(AlmostAutomorphism(d, std::move(pairs), false));
}

bool AlmostAutomorphism::is_identity() const {
  return std::all_of(pairs_.begin(), pairs_.end(), [](const LeafPair& p) { return p.from == p.to; });
}

std::vector<VertexAddress> AlmostAutomorphism::domain() const {
  std::vector<VertexAddress> out;
  for (const auto& p : pairs_) out.push_back(p.from);
  return out;
}

std::vector<VertexAddress> AlmostAutomorphism::range() const {
  std::vector<VertexAddress> out;
  for (const auto& p : pairs_) out.push_back(p.to);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> AlmostAutomorphism::range_indices() const {
  const auto sorted = range();
  std::vector<std::size_t> out;
  for (const auto& p : pairs_)
    out.push_back(static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), p.to) - sorted.begin()));
  return out;
}

std::string AlmostAutomorphism::to_string() const {
  std::string out;
  for (const auto& p : pairs_) {
    if (!out.empty()) out += ' ';
    out += p.from.to_string() + '>' + p.to.to_string();
  }
  return out;
}

AlmostAutomorphism canonicalize(const AlmostAutomorphism& g) {
  if (g.canonical_) return g;
  const auto d = static_cast<std::size_t>(g.d_);
  std::vector<LeafPair> stack;
  for (const auto& pair : g.pairs_) {
    stack.push_back(pair);
    while (stack.size() >= d) {
      const std::size_t first = stack.size() - d;
      const auto& head = stack[first];
      if (head.from.path.empty() || head.from.path.back() != 0 || head.to.path.empty() || head.to.path.back() != 0)
        break;
      bool caret = true;
      for (std::size_t c = 1; c < d && caret; ++c) {
        const auto& e = stack[first + c];
        caret = same_parent(head.from, e.from) && e.from.path.back() == c && same_parent(head.to, e.to) &&
                e.to.path.back() == c;
      }
      if (!caret) break;
      LeafPair merged{head.from.parent(), head.to.parent()};
      stack.resize(first);
      stack.push_back(std::move(merged));
    }
  }
  return AlmostAutomorphism(g.d_, std::move(stack), true);
}

bool operator==(const AlmostAutomorphism& a, const AlmostAutomorphism& b) {
  if (a.d_ != b.d_) return false;
  if (a.canonical_ && b.canonical_) return a.pairs_ == b.pairs_;
  return canonicalize(a).pairs_ == canonicalize(b).pairs_;
}

AlmostAutomorphism compose(const AlmostAutomorphism& g, const AlmostAutomorphism& h) {
  if (g.d_ != h.d_) throw ValidationError("cannot compose elements of different branching degree");
  // Walk h's range and g's domain together, refining whichever leaf is coarser.
  std::vector<LeafPair> hs = h.pairs_;
  std::sort(hs.begin(), hs.end(), by_to);
  const auto& gs = g.pairs_;
  std::vector<LeafPair> out;
  out.reserve(std::max(hs.size(), gs.size()));
  std::size_t i = 0, j = 0;
  while (i < hs.size() && j < gs.size()) {
    const auto& r = hs[i];
    const auto& a = gs[j];
    if (r.to == a.from) {
      out.push_back({r.from, a.to});
      ++i;
      ++j;
    } else if (r.to.is_prefix_of(a.from)) {
      out.push_back({with_suffix(r.from, a.from, r.to.level()), a.to});
      ++j;
      if (j == gs.size() || !r.to.is_prefix_of(gs[j].from)) ++i;
    } else if (a.from.is_prefix_of(r.to)) {
      out.push_back({r.from, with_suffix(a.to, r.to, a.from.level())});
      ++i;
      if (i == hs.size() || !a.from.is_prefix_of(hs[i].to)) ++j;
    } else {
      throw ValidationError("tree pairs do not cover the same forest");
    }
  }
  std::sort(out.begin(), out.end(), by_from);
  return canonicalize(AlmostAutomorphism(g.d_, std::move(out), false));
}

AlmostAutomorphism inverse(const AlmostAutomorphism& g) {
  std::vector<LeafPair> out;
  out.reserve(g.pairs_.size());
  for (const auto& p : g.pairs_) out.push_back({p.to, p.from});
  std::sort(out.begin(), out.end(), by_from);
  // The reduced condition is symmetric in domain and range.
  return AlmostAutomorphism(g.d_, std::move(out), g.canonical_);
}

AlmostAutomorphism expand_at(const AlmostAutomorphism& g, const VertexAddress& leaf) {
  std::vector<LeafPair> out;
  bool found = false;
  for (const auto& p : g.pairs()) {
    if (p.from != leaf) {
      out.push_back(p);
      continue;
    }
    found = true;
    for (int c = 0; c < g.d(); ++c)
      out.push_back({p.from.child(static_cast<std::uint8_t>(c)), p.to.child(static_cast<std::uint8_t>(c))});
  }
  if (!found) throw PreconditionError("no domain leaf " + leaf.to_string());
  return AlmostAutomorphism::from_pairs(g.d(), std::move(out));
}

LevelMembership min_O_level(const AlmostAutomorphism& g) { return analyze(canonicalize(g)).membership; }

Permutation project_level(const AlmostAutomorphism& g, int n) {
  const auto c = canonicalize(g);
  const auto info = analyze(c);
  if (!info.membership.in_O) throw PreconditionError("element is not in O");
  if (n < info.membership.min_level)
    throw PreconditionError("element is not in O_" + std::to_string(n) + " (least level " +
                            std::to_string(info.membership.min_level) + ")");
  const int d = c.d();
  const std::size_t k = sphere_size_checked(d, n);
  const auto& pairs = c.pairs();
  std::vector<Point> images(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto v = sphere_address(i, d, n);
    auto it = std::upper_bound(pairs.begin(), pairs.end(), v,
                               [](const VertexAddress& x, const LeafPair& p) { return x < p.from; });
    VertexAddress image;
    if (it != pairs.begin() && std::prev(it)->from.is_prefix_of(v)) {
      const auto& p = *std::prev(it);
      image = with_suffix(p.to, v, p.from.level());
    } else {
      image = info.internal.at(v);
    }
    images[i] = static_cast<Point>(sphere_index(image, d));
  }
  return Permutation(std::move(images));
}

bool in_U_level(const AlmostAutomorphism& g, int n) {
  const auto c = canonicalize(g);
  if (c.is_identity()) return true;
  const auto m = min_O_level(c);
  if (!m.in_O || n < m.min_level) return false;
  return project_level(c, n).is_identity();
}

std::vector<VertexAddress> random_antichain(int d, std::size_t leaves, std::mt19937_64& rng) {
  validate_branching(d);
  const auto du = static_cast<std::size_t>(d);
  if (leaves < 2 || (leaves - 2) % (du - 1) != 0)
    throw ValidationError("antichain sizes are 2 + m(d-1)");
  std::vector<VertexAddress> out{{Side::L, {}}, {Side::R, {}}};
  while (out.size() < leaves) {
    const std::size_t pick = rng() % out.size();
    const VertexAddress v = out[pick];
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(pick));
    for (std::size_t c = 0; c < du; ++c) out.push_back(v.child(static_cast<std::uint8_t>(c)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

AlmostAutomorphism random_tree_pair(int d, std::size_t carets, std::mt19937_64& rng) {
  const std::size_t leaves = 2 + carets * static_cast<std::size_t>(d - 1);
  const auto domain = random_antichain(d, leaves, rng);
  auto range = random_antichain(d, leaves, rng);
  std::shuffle(range.begin(), range.end(), rng);
  std::vector<LeafPair> pairs;
  for (std::size_t i = 0; i < leaves; ++i) pairs.push_back({domain[i], range[i]});
  return AlmostAutomorphism::from_pairs(d, std::move(pairs));
}

AlmostAutomorphism random_level_element(int d, int n, std::size_t splits, std::mt19937_64& rng) {
  const std::size_t k = sphere_size_checked(d, n);
  std::vector<Point> images(k);
  for (std::size_t i = 0; i < k; ++i) images[i] = static_cast<Point>(i);
  std::shuffle(images.begin(), images.end(), rng);
  std::vector<LeafPair> pairs;
  for (std::size_t i = 0; i < k; ++i) pairs.push_back({sphere_address(i, d, n), sphere_address(images[i], d, n)});
  auto g = AlmostAutomorphism::from_pairs(d, std::move(pairs));
  for (std::size_t s = 0; s < splits; ++s) g = expand_at(g, g.pairs()[rng() % g.leaf_count()].from);
  return g;
}

CayleyBall cayley_ball(const std::vector<AlmostAutomorphism>& generators, std::size_t length, std::size_t cap) {
  const int d = generators.empty() ? 2 : generators.front().d();
  std::vector<std::pair<AlmostAutomorphism, int>> steps;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].d() != d) throw ValidationError("generators have different branching degrees");
    const int label = static_cast<int>(i) + 1;
    steps.emplace_back(canonicalize(generators[i]), label);
    steps.emplace_back(inverse(steps.back().first), -label);
  }
  CayleyBall ball;
  ball.word_length = length;
  std::unordered_set<AlmostAutomorphism> seen;
  const auto identity = AlmostAutomorphism::identity(d);
  seen.insert(identity);
  ball.elements.push_back({identity, {}});
  std::size_t layer_begin = 0;
  for (std::size_t len = 1; len <= length; ++len) {
    const std::size_t layer_end = ball.elements.size();
    for (std::size_t e = layer_begin; e < layer_end; ++e) {
      for (const auto& [step, label] : steps) {
        auto next = compose(ball.elements[e].element, step);
        if (seen.contains(next)) continue;
        if (ball.elements.size() >= cap) {
          ball.truncated = true;
          return ball;
        }
        seen.insert(next);
        auto word = ball.elements[e].word;
        word.push_back(label);
        ball.elements.push_back({std::move(next), std::move(word)});
      }
    }
    if (ball.elements.size() == layer_end) break;
    layer_begin = layer_end;
  }
  return ball;
}

}  // namespace neretin

std::size_t std::hash<neretin::AlmostAutomorphism>::operator()(const neretin::AlmostAutomorphism& g) const noexcept {
  const auto c = g.is_canonical() ? g : canonicalize(g);
  std::size_t h = 1469598103934665603ull;
  const auto mix = [&](std::size_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  for (const auto& p : c.pairs()) {
    for (const auto* v : {&p.from, &p.to}) {
      mix(static_cast<std::size_t>(v->side) + 16);
      for (const auto digit : v->path) mix(digit);
    }
  }
  return h;
}
