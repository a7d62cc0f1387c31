#include "neretin/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "neretin/error.hpp"

namespace neretin {

Permutation::Permutation(std::size_t degree) : images_(degree) {
  for (std::size_t i = 0; i < degree; ++i) images_[i] = static_cast<Point>(i);
}

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (const Point x : images_) {
    if (x >= images_.size() || seen[x]) {
      throw ValidationError("permutation image table is not a bijection of {0.." +
                            std::to_string(images_.size()) + "-1}");
    }
    seen[x] = true;
  }
}

Permutation Permutation::from_cycles(std::size_t degree,
                                     const std::vector<std::vector<Point>>& cycles) {
  std::vector<Point> images(degree);
  for (std::size_t i = 0; i < degree; ++i) images[i] = static_cast<Point>(i);
  std::vector<bool> used(degree, false);
  for (const auto& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const Point x = cycle[i];
      if (x >= degree) throw ValidationError("cycle point " + std::to_string(x) + " out of range");
      if (used[x]) throw ValidationError("cycles are not disjoint at point " + std::to_string(x));
      used[x] = true;
      images[x] = cycle[(i + 1) % cycle.size()];
    }
  }
  return Permutation(std::move(images));
}

Permutation Permutation::parse_cycles(std::string_view text, std::size_t degree) {
  std::vector<std::vector<Point>> cycles;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
      ++i;
  };
  Point max_point = 0;
  bool any = false;
  skip_space();
  while (i < text.size()) {
    if (text[i] != '(') throw ValidationError("cycle notation: expected '(' in \"" + std::string(text) + "\"");
    ++i;
    std::vector<Point> cycle;
    skip_space();
    while (i < text.size() && text[i] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw ValidationError("cycle notation: unexpected character in \"" + std::string(text) + "\"");
      std::uint64_t value = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + static_cast<std::uint64_t>(text[i] - '0');
        if (value > 0xFFFFFFFFull) throw ValidationError("cycle notation: point too large");
        ++i;
      }
      cycle.push_back(static_cast<Point>(value));
      max_point = std::max(max_point, static_cast<Point>(value));
      any = true;
      skip_space();
    }
    if (i == text.size()) throw ValidationError("cycle notation: missing ')'");
    ++i;
    if (cycle.size() > 1) cycles.push_back(std::move(cycle));
    skip_space();
  }
  if (degree == 0) degree = any ? static_cast<std::size_t>(max_point) + 1 : 1;
  return from_cycles(degree, cycles);
}

Permutation Permutation::transposition(std::size_t degree, Point a, Point b) {
  if (a == b) throw ValidationError("transposition needs two distinct points");
  return from_cycles(degree, {{a, b}});
}

Permutation Permutation::inverse() const {
  std::vector<Point> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<Point>(i);
  Permutation out;
  out.images_ = std::move(inv);
  return out;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw ValidationError("cannot multiply permutations of different degrees");
  Permutation out;
  out.images_.resize(a.images_.size());
  for (std::size_t i = 0; i < a.images_.size(); ++i) out.images_[i] = a.images_[b.images_[i]];
  return out;
}

Permutation& Permutation::premultiply(const Permutation& a) {
  if (a.degree() != degree()) throw ValidationError("cannot multiply permutations of different degrees");
  for (auto& x : images_) x = a.images_[x];
  return *this;
}

Permutation Permutation::pow(const Integer& exponent) const {
  Permutation out(degree());
  const CycleDecomposition cd = cycle_decomposition(*this);
  for (const auto& cycle : cd.cycles) {
    const Integer len = static_cast<unsigned long>(cycle.size());
    Integer shift = exponent % len;
    if (shift < 0) shift += len;
    const std::size_t s = shift.get_ui();
    for (std::size_t i = 0; i < cycle.size(); ++i)
      out.images_[cycle[i]] = cycle[(i + s) % cycle.size()];
  }
  return out;
}

Integer Permutation::order() const {
  Integer result = 1;
  for (const auto& cycle : cycle_decomposition(*this).cycles) {
    const Integer len = static_cast<unsigned long>(cycle.size());
    mpz_lcm(result.get_mpz_t(), result.get_mpz_t(), len.get_mpz_t());
  }
  return result;
}

int Permutation::sign() const { return cycle_decomposition(*this).parity; }

std::string Permutation::to_cycle_string() const {
  const CycleDecomposition cd = cycle_decomposition(*this);
  if (cd.cycles.empty()) return "()";
  std::ostringstream out;
  for (const auto& cycle : cd.cycles) {
    out << '(';
    for (std::size_t i = 0; i < cycle.size(); ++i) out << (i ? " " : "") << cycle[i];
    out << ')';
  }
  return out.str();
}

CycleDecomposition cycle_decomposition(const Permutation& p) {
  CycleDecomposition cd;
  const std::size_t n = p.degree();
  std::vector<bool> seen(n, false);
  std::size_t transpositions = 0;
  for (Point start = 0; start < n; ++start) {
    if (seen[start] || p(start) == start) continue;
    std::vector<Point> cycle;
    for (Point x = start; !seen[x]; x = p(x)) {
      seen[x] = true;
      cycle.push_back(x);
    }
    transpositions += cycle.size() - 1;
    cd.support.insert(cd.support.end(), cycle.begin(), cycle.end());
    cd.cycles.push_back(std::move(cycle));
  }
  std::sort(cd.support.begin(), cd.support.end());
  cd.parity = (transpositions % 2 == 0) ? 1 : -1;
  return cd;
}

bool is_single_cycle(const Permutation& p, std::size_t length) {
  const CycleDecomposition cd = cycle_decomposition(p);
  return cd.cycles.size() == 1 && cd.cycles.front().size() == length;
}

void validate_point_set(std::span<const Point> points, std::size_t degree) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] >= degree)
      throw ValidationError("point " + std::to_string(points[i]) + " outside domain of degree " +
                            std::to_string(degree));
    if (i > 0 && points[i] <= points[i - 1])
      throw ValidationError("point set must be sorted and duplicate-free");
  }
}

}  // namespace neretin

std::size_t std::hash<neretin::Permutation>::operator()(const neretin::Permutation& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (const auto x : p.images()) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return h;
}
