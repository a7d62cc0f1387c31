#include "neretin/tree.hpp"

#include <algorithm>

#include "neretin/error.hpp"

namespace neretin {

VertexAddress VertexAddress::parent() const {
  if (path.empty()) throw PreconditionError("level-0 vertices have no parent");
  VertexAddress out = *this;
  out.path.pop_back();
  return out;
}

VertexAddress VertexAddress::child(std::uint8_t digit) const {
  VertexAddress out = *this;
  out.path.push_back(digit);
  return out;
}

bool VertexAddress::is_prefix_of(const VertexAddress& other) const {
  return side == other.side && path.size() <= other.path.size() &&
         std::equal(path.begin(), path.end(), other.path.begin());
}

std::string VertexAddress::to_string() const {
  std::string out(1, side == Side::L ? 'L' : 'R');
  for (const auto digit : path) out.push_back(static_cast<char>('0' + digit));
  return out;
}

VertexAddress VertexAddress::parse(std::string_view text) {
  if (text.empty() || (text[0] != 'L' && text[0] != 'R'))
    throw ValidationError("vertex address must start with L or R: \"" + std::string(text) + "\"");
  VertexAddress out;
  out.side = text[0] == 'L' ? Side::L : Side::R;
  for (const char c : text.substr(1)) {
    if (c < '0' || c > '9') throw ValidationError("bad digit in vertex address \"" + std::string(text) + "\"");
    out.path.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

void validate_branching(int d) {
  if (d < 2 || d > 10) throw ValidationError("branching degree d must lie in [2, 10]");
}

Integer sphere_size(const BallSpec& spec) {
  validate_branching(spec.d);
  if (spec.n < 0) throw ValidationError("level must be non-negative");
  return 2 * power(Integer(spec.d), static_cast<std::uint64_t>(spec.n));
}

Integer ball_automorphism_count(const BallSpec& spec) {
  validate_branching(spec.d);
  if (spec.n < 0) throw ValidationError("level must be non-negative");
  // (d^n - 1)/(d - 1) = 1 + d + ... + d^(n-1): the number of vertices per side below level n.
  Integer internal = power(Integer(spec.d), static_cast<std::uint64_t>(spec.n)) - 1;
  internal /= spec.d - 1;
  return 2 * power(factorial(static_cast<std::uint64_t>(spec.d)), 2 * internal.get_ui());
}

SphereAndBallCounts sphere_and_ball_counts(const BallSpec& spec) {
  return {sphere_size(spec), ball_automorphism_count(spec)};
}

std::size_t sphere_size_checked(int d, int n, std::size_t cap) {
  const Integer k = sphere_size({d, n});
  if (k > static_cast<unsigned long>(cap))
    throw ResourceError("sphere K_" + std::to_string(n) + " has " + k.get_str() + " vertices, above the cap of " +
                        std::to_string(cap));
  return k.get_ui();
}

std::size_t sphere_index(const VertexAddress& v, int d) {
  std::size_t index = v.side == Side::L ? 0 : 1;
  for (const auto digit : v.path) {
    if (digit >= d) throw ValidationError("digit out of range in " + v.to_string());
    index = index * static_cast<std::size_t>(d) + digit;
  }
  return index;
}

VertexAddress sphere_address(std::size_t index, int d, int n) {
  VertexAddress v;
  v.path.resize(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    v.path[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(index % static_cast<std::size_t>(d));
    index /= static_cast<std::size_t>(d);
  }
  if (index > 1) throw ValidationError("sphere index out of range");
  v.side = index == 0 ? Side::L : Side::R;
  return v;
}

Permutation edge_flip_on_sphere(int d, int n) {
  const std::size_t k = sphere_size_checked(d, n);
  std::vector<Point> images(k);
  for (std::size_t i = 0; i < k; ++i) images[i] = static_cast<Point>((i + k / 2) % k);
  return Permutation(std::move(images));
}

Permutation child_swap_on_sphere(int d, int n, const VertexAddress& v, std::uint8_t c1, std::uint8_t c2) {
  const std::size_t k = sphere_size_checked(d, n);
  if (static_cast<int>(v.level()) >= n) throw PreconditionError("swapped children must lie inside the ball");
  if (c1 >= d || c2 >= d || c1 == c2) throw PreconditionError("bad child digits for a swap");
  std::size_t span = 1;
  for (int i = static_cast<int>(v.level()) + 1; i < n; ++i) span *= static_cast<std::size_t>(d);
  const std::size_t base = sphere_index(v, d) * static_cast<std::size_t>(d);
  std::vector<Point> images(k);
  for (std::size_t i = 0; i < k; ++i) images[i] = static_cast<Point>(i);
  for (std::size_t s = 0; s < span; ++s) {
    const std::size_t a = (base + c1) * span + s;
    const std::size_t b = (base + c2) * span + s;
    images[a] = static_cast<Point>(b);
    images[b] = static_cast<Point>(a);
  }
  return Permutation(std::move(images));
}

std::vector<Permutation> ball_aut_generators(const BallSpec& spec) {
  validate_branching(spec.d);
  std::vector<Permutation> gens{edge_flip_on_sphere(spec.d, spec.n)};
  for (int level = 0; level < spec.n; ++level) {
    const std::size_t count = sphere_size_checked(spec.d, level);
    for (std::size_t i = 0; i < count; ++i) {
      const VertexAddress v = sphere_address(i, spec.d, level);
      for (int c = 0; c + 1 < spec.d; ++c)
        gens.push_back(child_swap_on_sphere(spec.d, spec.n, v, static_cast<std::uint8_t>(c),
                                            static_cast<std::uint8_t>(c + 1)));
    }
  }
  return gens;
}

int sphere_level_of_degree(int d, std::size_t degree) {
  validate_branching(d);
  std::size_t k = 2;
  for (int n = 0; k <= degree; ++n, k *= static_cast<std::size_t>(d))
    if (k == degree) return n;
  throw ValidationError("degree " + std::to_string(degree) + " is not a sphere size 2*" + std::to_string(d) + "^n");
}

ParentProjection parent_projection(const Permutation& sigma, int d) {
  const int n = sphere_level_of_degree(d, sigma.degree());
  if (n < 1) throw PreconditionError("parent_projection needs a level n >= 1");
  const auto du = static_cast<std::size_t>(d);
  const std::size_t parents = sigma.degree() / du;
  std::vector<Point> images(parents);
  ParentProjection out;
  for (std::size_t u = 0; u < parents; ++u) {
    const std::size_t target = sigma(static_cast<Point>(u * du)) / du;
    bool ok = true;
    for (std::size_t c = 1; c < du && ok; ++c) ok = sigma(static_cast<Point>(u * du + c)) / du == target;
    if (!ok) {
      for (std::size_t c = 0; c < du; ++c) out.witness_class.push_back(static_cast<Point>(u * du + c));
      return out;
    }
    images[u] = static_cast<Point>(target);
  }
  out.induced = Permutation(std::move(images));
  return out;
}

}  // namespace neretin
