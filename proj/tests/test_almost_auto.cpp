#include <random>

#include "doctest.h"
#include "neretin/almost_auto.hpp"
#include "neretin/error.hpp"
#include "neretin/perm_group.hpp"
#include "oracles.hpp"
#include "tree_oracles.hpp"

using namespace neretin;

namespace {

VertexAddress addr(const char* text) { return VertexAddress::parse(text); }

AlmostAutomorphism make(int d, std::vector<std::pair<const char*, const char*>> pairs) {
  std::vector<LeafPair> out;
  for (const auto& [a, b] : pairs) out.push_back({addr(a), addr(b)});
  return AlmostAutomorphism::from_pairs(d, std::move(out));
}

AlmostAutomorphism level_perm(int d, int n, const char* cycles) {
  return AlmostAutomorphism::from_level_permutation(d, n,
                                                    Permutation::parse_cycles(cycles, sphere_size_checked(d, n)));
}

}  // namespace

TEST_CASE("tree pair validation") {
  CHECK_NOTHROW(make(2, {{"L", "L"}, {"R", "R"}}));
  CHECK_THROWS_AS(make(2, {{"L", "L"}}), ValidationError);
  CHECK_THROWS_AS(make(2, {{"L0", "L"}, {"R", "R"}}), ValidationError);
  CHECK_THROWS_AS(make(2, {{"L", "L"}, {"L0", "L0"}, {"R", "R"}}), ValidationError);
  CHECK_THROWS_AS(make(2, {{"L", "L"}, {"R", "L"}}), ValidationError);
  CHECK_THROWS_AS(make(2, {{"L", "L"}, {"R", "R2"}}), ValidationError);
  CHECK_THROWS_AS(AlmostAutomorphism::from_leaves(2, {addr("L"), addr("R")}, {addr("L"), addr("R")}, {{0, 0}, {1, 0}}),
                  ValidationError);
}

TEST_CASE("canonical form examples") {
  const auto id2 = AlmostAutomorphism::from_pairs(
      2, {{addr("L00"), addr("L00")}, {addr("L01"), addr("L01")}, {addr("L10"), addr("L10")},
          {addr("L11"), addr("L11")}, {addr("R0"), addr("R0")}, {addr("R1"), addr("R1")}});
  const auto c = canonicalize(id2);
  CHECK(c.to_string() == "L>L R>R");
  CHECK(c == AlmostAutomorphism::identity(2));

  // Swap below L0 presented on the full depth-3 antichain.
  const auto swap = level_perm(2, 3, "(0 2)(1 3)");
  CHECK(swap.to_string() == "L00>L01 L01>L00 L1>L1 R>R");
  CHECK(canonicalize(swap) == swap);
}

TEST_CASE("composition examples") {
  std::mt19937_64 rng(4);
  const auto g = random_tree_pair(2, 5, rng);
  CHECK(compose(g, inverse(g)).is_identity());
  CHECK(compose(inverse(g), g) == AlmostAutomorphism::identity(2));

  const auto a = level_perm(2, 2, "(0 1)");
  const auto b = level_perm(2, 2, "(6 7)");
  CHECK(a * b == b * a);
  CHECK(!(a * b).is_identity());
  CHECK(oracle::same_action(a * b, make(2, {{"L00", "L01"}, {"L01", "L00"}, {"L1", "L1"}, {"R0", "R0"},
                                            {"R10", "R11"}, {"R11", "R10"}})));

  const auto flip = AlmostAutomorphism::edge_flip(2);
  CHECK((flip * flip).is_identity());
  CHECK_THROWS_AS(compose(flip, AlmostAutomorphism::identity(3)), ValidationError);
}

TEST_CASE("least O-level examples") {
  CHECK(min_O_level(AlmostAutomorphism::identity(2)).min_level == 0);

  const auto thompson = AlmostAutomorphism::from_leaves(2, {addr("L0"), addr("L1"), addr("R")},
                                                        {addr("L"), addr("R0"), addr("R1")}, {{0, 0}, {1, 1}, {2, 2}});
  const auto m = min_O_level(thompson);
  CHECK(!m.in_O);
  REQUIRE(m.depth_witness);
  CHECK(m.depth_witness->from.to_string() == "L0");
  CHECK(!oracle::in_O_level(thompson, 6));

  // Exchanging the subtrees at L0 and L1 fixes e0, so it already lies in O_0.
  const auto same_side = level_perm(2, 1, "(0 1)");
  CHECK(min_O_level(same_side).min_level == 0);
  CHECK(oracle::in_O_level(same_side, 0));

  // Exchanging L0 with R0 breaks the level-0 blocks.
  const auto across = level_perm(2, 1, "(0 2)");
  CHECK(min_O_level(across).min_level == 1);
  CHECK(!oracle::in_O_level(across, 0));
  CHECK(oracle::in_O_level(across, 1));
}

TEST_CASE("level projections and kernels") {
  CHECK(project_level(AlmostAutomorphism::identity(3), 2).is_identity());
  const auto swap = level_perm(2, 2, "(0 1)");
  CHECK(project_level(swap, 2) == Permutation::parse_cycles("(0 1)", 8));
  CHECK(project_level(swap, 1).is_identity());
  CHECK(in_U_level(swap, 1));
  CHECK(!in_U_level(swap, 2));
  CHECK(in_U_level(AlmostAutomorphism::identity(2), 5));

  const auto flip = AlmostAutomorphism::edge_flip(2);
  for (int n = 1; n <= 4; ++n) CHECK(!in_U_level(flip, n));
  CHECK(project_level(flip, 1) == Permutation::parse_cycles("(0 2)(1 3)", 4));

  CHECK_THROWS_AS(project_level(level_perm(2, 1, "(0 2)"), 0), PreconditionError);
}

TEST_CASE("cayley balls") {
  const auto flip = AlmostAutomorphism::edge_flip(2);
  CHECK(cayley_ball({flip}, 5).elements.size() == 2);

  const auto ball = cayley_ball({level_perm(2, 2, "(0 1)"), level_perm(2, 2, "(6 7)")}, 2);
  CHECK(ball.elements.size() == 4);
  CHECK(!ball.truncated);
  for (const auto& e : ball.elements) CHECK(e.word.size() <= 2);

  CHECK(cayley_ball({}, 3).elements.size() == 1);

  std::mt19937_64 rng(8);
  const auto big = cayley_ball({random_tree_pair(2, 3, rng), random_tree_pair(2, 3, rng)}, 6, 50);
  CHECK(big.truncated);
  CHECK(big.elements.size() == 50);
}

TEST_CASE("canonical form is unique and idempotent") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const auto g = random_tree_pair(d, 1 + rng() % 5, rng);
    const auto c = canonicalize(g);
    CHECK(canonicalize(c).pairs() == c.pairs());
    CHECK(oracle::same_action(g, c));
    auto expanded = g;
    for (std::size_t s = rng() % 6; s > 0; --s)
      expanded = expand_at(expanded, expanded.pairs()[rng() % expanded.leaf_count()].from);
    CHECK(canonicalize(expanded).pairs() == c.pairs());

    const auto h = compose(g, random_level_element(d, 1, 0, rng));
    CHECK((h == g) == oracle::same_action(h, g));
    CHECK(std::hash<AlmostAutomorphism>{}(expanded) == std::hash<AlmostAutomorphism>{}(c));
  }
}

TEST_CASE("group laws") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const auto a = random_tree_pair(d, 1 + rng() % 4, rng);
    const auto b = random_tree_pair(d, 1 + rng() % 4, rng);
    const auto c = random_tree_pair(d, 1 + rng() % 4, rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a * inverse(a)).is_identity());
    CHECK(a * AlmostAutomorphism::identity(d) == a);
    CHECK(AlmostAutomorphism::identity(d) * a == a);

    // Composition acts as "b first, then a" on deep vertices.
    const auto ab = a * b;
    const int depth = oracle::max_depth(a) + oracle::max_depth(b);
    for (const auto& v : oracle::all_at_depth(d, depth)) CHECK(oracle::act(ab, v) == oracle::act(a, *oracle::act(b, v)));
  }
}

TEST_CASE("level projections agree with the oracle") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 400; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const int n = 1 + static_cast<int>(rng() % (d == 2 ? 3 : 2));
    const auto g = random_level_element(d, n, rng() % 4, rng);
    const auto h = random_level_element(d, n, rng() % 4, rng);
    const auto m = min_O_level(g);
    REQUIRE(m.in_O);
    CHECK(m.min_level <= n);
    CHECK(oracle::in_O_level(g, m.min_level));
    CHECK(oracle::in_O_level(g, m.min_level + 1));
    CHECK(oracle::in_O_level(g, m.min_level + 2));
    if (m.min_level > 0) CHECK(!oracle::in_O_level(g, m.min_level - 1));

    const auto pg = project_level(g, n);
    const auto expected = oracle::project(g, n);
    for (std::size_t i = 0; i < pg.degree(); ++i)
      CHECK(sphere_address(pg(static_cast<Point>(i)), d, n) == expected[i]);
    CHECK(project_level(g * h, n) == pg * project_level(h, n));
    CHECK(in_U_level(g, n) == pg.is_identity());
  }

  // Elements of O on random tree pairs.
  for (int trial = 0; trial < 400; ++trial) {
    const auto g = random_tree_pair(2, 1 + rng() % 4, rng);
    const auto m = min_O_level(g);
    CHECK(m.in_O == oracle::in_O_level(g, oracle::max_depth(g)));
    if (m.in_O) {
      CHECK(oracle::in_O_level(g, m.min_level));
      if (m.min_level > 0) CHECK(!oracle::in_O_level(g, m.min_level - 1));
    }
  }
}

TEST_CASE("kernel elements") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    // Permute within sibling classes of K_{n+1}: trivial on K_n.
    const std::size_t k = sphere_size_checked(2, n + 1);
    std::vector<Point> images(k);
    for (std::size_t i = 0; i < k; i += 2) {
      const bool swap = rng() % 2;
      images[i] = static_cast<Point>(swap ? i + 1 : i);
      images[i + 1] = static_cast<Point>(swap ? i : i + 1);
    }
    const auto g = AlmostAutomorphism::from_level_permutation(2, n + 1, Permutation(images));
    CHECK(in_U_level(g, n));
    CHECK(in_U_level(g, n + 1) == g.is_identity());
  }
}

TEST_CASE("ball lifts surject onto the ball automorphism group") {
  for (int n = 1; n <= 3; ++n) {
    std::vector<Permutation> images;
    for (const auto& gen : ball_aut_generators({2, n})) {
      const auto lift = AlmostAutomorphism::from_level_permutation(2, n, gen);
      CHECK(min_O_level(lift).min_level == 0);
      images.push_back(project_level(lift, n));
      CHECK(images.back() == gen);
    }
    CHECK(PermGroup(sphere_size_checked(2, n), images).order() == ball_automorphism_count({2, n}));
  }
}
