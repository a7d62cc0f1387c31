#include <numeric>
#include <random>

#include "doctest.h"
#include "neretin/error.hpp"
#include "neretin/lattice.hpp"
#include "neretin/tree.hpp"
#include "tree_oracles.hpp"

using namespace neretin;

namespace {

std::vector<Point> range_points(Point lo, Point hi) {
  std::vector<Point> out;
  for (Point i = lo; i < hi; ++i) out.push_back(i);
  return out;
}

PermGroup alt_product(std::size_t degree, const std::vector<std::vector<Point>>& parts) {
  std::vector<Permutation> gens;
  for (const auto& z : parts) {
    const auto a = PermGroup::alternating(degree, z);
    gens.insert(gens.end(), a.generators().begin(), a.generators().end());
  }
  return PermGroup(degree, gens);
}

CandidateSubgroup candidate(int d, std::vector<AlmostAutomorphism> gens, std::size_t length = 4) {
  CandidateSubgroup c;
  c.d = d;
  c.generators = std::move(gens);
  c.word_length = length;
  return c;
}

AlmostAutomorphism level_two_swap() {
  return AlmostAutomorphism::from_level_permutation(2, 2, Permutation::transposition(8, 0, 1));
}

Rational q(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::vector<ObstructionCertificate> mutations(const ObstructionCertificate& cert) {
  std::vector<ObstructionCertificate> out;
  auto m = cert;
  m.kind = cert.kind == CertificateKind::Alt2Case ? CertificateKind::Cocompact3 : CertificateKind::Alt2Case;
  out.push_back(m);
  m = cert;
  ++m.n;
  out.push_back(m);
  m = cert;
  ++m.m;
  out.push_back(m);
  m = cert;
  ++m.d;
  out.push_back(m);
  m = cert;
  const std::size_t k = cert.witness_perms[0].degree();
  m.witness_perms[0] = Permutation::transposition(k, 0, 1) * m.witness_perms[0];
  out.push_back(m);
  m = cert;
  const auto extra = AlmostAutomorphism::from_level_permutation(
      cert.d, cert.n, Permutation::transposition(k, static_cast<Point>(k - 2), static_cast<Point>(k - 1)));
  m.lift = cert.lift * extra;
  out.push_back(m);
  m = cert;
  {
    auto& z = m.parts[0];
    Point x = 0;
    while (std::binary_search(z.begin(), z.end(), x)) ++x;
    if (x < k) {
      z.insert(std::lower_bound(z.begin(), z.end(), x), x);
    } else {
      z.pop_back();
    }
  }
  out.push_back(m);
  m = cert;
  m.checks.in_U_m = !m.checks.in_U_m;
  out.push_back(m);
  return out;
}

void check_sound(const ObstructionCertificate& cert, const PermGroup& gamma_n) {
  const auto report = verify_certificate(cert, gamma_n);
  CHECK(report.passed());
  CHECK(oracle::in_O_level(cert.lift, cert.n));
  const auto expected = oracle::project(cert.lift, cert.n);
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(sphere_address(cert.witness_perms[0](static_cast<Point>(i)), cert.d, cert.n) == expected[i]);
  const auto fixed = oracle::project(cert.lift, cert.m);
  for (std::size_t i = 0; i < fixed.size(); ++i) CHECK(sphere_index(fixed[i], cert.d) == i);
  for (const auto& bad : mutations(cert)) CHECK(!verify_certificate(bad, gamma_n).passed());
}

}  // namespace

TEST_CASE("discreteness scans") {
  auto scan = discreteness_scan(candidate(2, {AlmostAutomorphism::edge_flip(2)}), 3);
  REQUIRE(scan.n0);
  CHECK(*scan.n0 == 1);
  CHECK(scan.levels.size() == 3);

  scan = discreteness_scan(candidate(2, {level_two_swap()}), 3);
  REQUIRE(scan.n0);
  CHECK(*scan.n0 == 2);
  CHECK(!scan.levels[0].discrete);
  REQUIRE(scan.levels[0].witness);
  CHECK(scan.levels[0].witness->element == level_two_swap());

  scan = discreteness_scan(candidate(2, {}), 2);
  REQUIRE(scan.n0);
  CHECK(*scan.n0 == 1);

  CHECK_THROWS_AS(discreteness_scan(candidate(2, {AlmostAutomorphism::edge_flip(2)}, 0), 2), PreconditionError);
}

TEST_CASE("level covolumes") {
  auto data = level_covolume(candidate(2, {}), 1);
  CHECK(data.c_n == 3);
  CHECK(data.routes_agree);
  data = level_covolume(candidate(2, {}), 2);
  CHECK(data.c_n == 315);
  CHECK(data.routes_agree);

  data = level_covolume(candidate(2, {level_two_swap()}), 2);
  CHECK(data.c_n == q(315, 2));
  CHECK(data.gamma_n.order() == 2);
  CHECK(data.routes_agree);
  CHECK(data.discrete);

  data = level_covolume(candidate(2, {AlmostAutomorphism::edge_flip(2)}), 1);
  CHECK(data.c_n == q(3, 2));
  CHECK(data.routes_agree);

  std::vector<AlmostAutomorphism> lifts;
  for (const auto& g : ball_aut_generators({2, 2})) lifts.push_back(AlmostAutomorphism::from_level_permutation(2, 2, g));
  data = level_covolume(candidate(2, lifts, 2), 2);
  CHECK(data.gamma_n.order() == 128);
  CHECK(data.c_n == q(315, 128));
  CHECK(data.routes_agree);

  data = level_covolume(candidate(3, {}), 1);
  CHECK(data.c_n == 10);
  CHECK(data.index_estimate_holds == std::nullopt);
  data = level_covolume(candidate(2, {}), 1, 3.0);
  REQUIRE(data.index_estimate_holds);
  CHECK(*data.index_estimate_holds);
  data = level_covolume(candidate(2, {}), 1, 2.9);
  CHECK(!*data.index_estimate_holds);

  // The level-2 swap lies in U_1, so level 1 is not discrete.
  data = level_covolume(candidate(2, {level_two_swap()}), 1);
  CHECK(!data.discrete);

  CHECK_THROWS_AS(level_covolume(candidate(2, {}), 6), ResourceError);
  CHECK_THROWS_AS(level_covolume(candidate(2, {}), 0), PreconditionError);
}

TEST_CASE("covolume routes agree on random candidates") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<AlmostAutomorphism> gens;
    const std::size_t count = 1 + rng() % 2;
    for (std::size_t i = 0; i < count; ++i)
      gens.push_back(random_level_element(2, 1 + static_cast<int>(rng() % 3), 1, rng));
    if (trial % 3 == 0) gens.push_back(AlmostAutomorphism::edge_flip(2));
    const auto ball = candidate_ball(candidate(2, gens, 3));
    for (int n = 1; n <= 3; ++n) {
      const auto data = level_covolume(ball, 2, n);
      CHECK(data.routes_agree);
      CHECK(data.c_n * Rational(data.a_n) * Rational(data.gamma_n.order()) ==
            Rational(factorial(data.k_n.get_ui())));
    }
  }
}

TEST_CASE("covolumes of finite candidates do not decrease") {
  // Rigid level elements generate finite groups; once the ball closes, the
  // discreteness flags are exact.
  std::mt19937_64 rng(42);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<AlmostAutomorphism> gens;
    const std::size_t count = 1 + rng() % 2;
    for (std::size_t i = 0; i < count; ++i) {
      const int level = 1 + static_cast<int>(rng() % 3);
      const std::size_t k = sphere_size_checked(2, level);
      std::vector<Point> images(k);
      std::iota(images.begin(), images.end(), 0);
      // A few random transpositions keep the group small.
      for (int t = 0; t < 2; ++t) std::swap(images[rng() % k], images[rng() % k]);
      gens.push_back(AlmostAutomorphism::from_level_permutation(2, level, Permutation(images)));
    }
    if (trial % 4 == 0) gens.push_back(AlmostAutomorphism::edge_flip(2));
    auto c = candidate(2, gens, 24);
    c.ball_cap = 20000;
    const auto ball = candidate_ball(c);
    const bool closed = !ball.truncated && std::all_of(ball.elements.begin(), ball.elements.end(),
                                                       [](const BallElement& e) { return e.word.size() < 24; });
    if (!closed) continue;
    std::optional<LevelData> previous;
    for (int n = 1; n <= 3; ++n) {
      auto data = level_covolume(ball, 2, n);
      CHECK(data.routes_agree);
      if (previous && previous->discrete) {
        CHECK(data.discrete);
        CHECK(data.c_n >= previous->c_n);
        ++compared;
      }
      previous = std::move(data);
    }
  }
  CHECK(compared >= 5);
}

TEST_CASE("cocompact certificates") {
  const auto z = range_points(0, 12);
  const auto gamma = alt_product(16, {z});
  const auto cert = cocompact_obstruction(gamma, z, 3, 2);
  CHECK(cert.kind == CertificateKind::Cocompact3);
  CHECK(cert.m == 2);
  CHECK(cert.witness_perms[0] == Permutation::parse_cycles("(0 1)(2 3)", 16));
  CHECK(in_U_level(cert.lift, 2));
  CHECK(!in_U_level(cert.lift, 3));
  check_sound(cert, gamma);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto random_cert = cocompact_obstruction(gamma, z, 3, 2, seed, 6);
    CHECK(verify_certificate(random_cert, gamma).passed());
    CHECK(random_cert.truncation_L == 6u);
  }

  const auto z7 = range_points(0, 7);
  const auto gamma2 = alt_product(8, {z7});
  const auto small = cocompact_obstruction(gamma2, z7, 2, 2);
  CHECK(small.m == 1);
  CHECK(small.witness_perms[0] == Permutation::parse_cycles("(0 1)(2 3)", 8));
  check_sound(small, gamma2);

  const auto z6 = range_points(0, 6);
  CHECK_THROWS_AS(cocompact_obstruction(alt_product(8, {z6}), z6, 2, 2), PreconditionError);
  CHECK_THROWS_AS(cocompact_obstruction(PermGroup::trivial(16), z, 3, 2), PreconditionError);
  CHECK_THROWS_AS(cocompact_obstruction(gamma, z, 1, 2), PreconditionError);
}

TEST_CASE("alternative one certificates") {
  const auto z = range_points(0, 9);
  const auto gamma = alt_product(18, {z});
  AlternativeVerdict verdict;
  verdict.tag = VerdictTag::Alt1;
  verdict.sets = {z};
  const auto attempt = alternative_obstruction(gamma, verdict, 2, 3, 0.05);
  REQUIRE(attempt.certificate);
  const auto& cert = *attempt.certificate;
  CHECK(cert.kind == CertificateKind::Alt1Case);
  CHECK(cert.m == 1);
  CHECK(cert.witness_perms[0] == Permutation::parse_cycles("(0 1 2)", 18));
  check_sound(cert, gamma);

  // Only pairs of siblings: double transposition.
  const std::vector<Point> pairs{0, 1, 3, 4, 6, 7, 9, 10, 12};
  const auto gamma_pairs = alt_product(18, {pairs});
  verdict.sets = {pairs};
  const auto pair_attempt = alternative_obstruction(gamma_pairs, verdict, 2, 3, 0.05);
  REQUIRE(pair_attempt.certificate);
  CHECK(pair_attempt.certificate->witness_perms[0] == Permutation::parse_cycles("(0 1)(3 4)", 18));
  check_sound(*pair_attempt.certificate, gamma_pairs);
}

TEST_CASE("alternative two certificates") {
  std::vector<Point> evens, odds;
  for (Point x = 0; x < 32; ++x) (x % 2 ? odds : evens).push_back(x);
  AlternativeVerdict verdict;
  verdict.tag = VerdictTag::Alt2;
  verdict.sets = {evens, odds};
  const auto gamma = alt_product(32, verdict.sets);
  auto attempt = alternative_obstruction(gamma, verdict, 4, 2, 1.0 / 16);
  REQUIRE(attempt.certificate);
  CHECK(attempt.flexible == 0);
  CHECK(attempt.fully_covered == 8);
  const auto& cert = *attempt.certificate;
  CHECK(cert.kind == CertificateKind::Alt2Case);
  CHECK(cert.m == 2);
  CHECK(in_U_level(cert.lift, 2));
  const auto cd = cycle_decomposition(cert.witness_perms[0]);
  CHECK(cd.cycles.size() == 4);
  for (const auto& cyc : cd.cycles) {
    CHECK(cyc.size() == 2);
    CHECK(cyc[0] % 2 == cyc[1] % 2);
  }
  CHECK(gamma.contains(cert.witness_perms[0]));
  check_sound(cert, gamma);

  // Remove two leaves of Z_1 under the first level-2 vertex.
  verdict.sets[0].erase(verdict.sets[0].begin(), verdict.sets[0].begin() + 2);
  const auto gamma_less = alt_product(32, verdict.sets);
  attempt = alternative_obstruction(gamma_less, verdict, 4, 2, 1.0 / 16);
  CHECK(attempt.threshold_count == doctest::Approx(6));
  CHECK(attempt.fully_covered == 7);
  REQUIRE(attempt.certificate);
  check_sound(*attempt.certificate, gamma_less);

  std::vector<Point> e16, o16;
  for (Point x = 0; x < 16; ++x) (x % 2 ? o16 : e16).push_back(x);
  verdict.sets = {e16, o16};
  attempt = alternative_obstruction(alt_product(16, verdict.sets), verdict, 3, 2, 1.0 / 16);
  CHECK(!attempt.certificate);
  CHECK(attempt.failure.find("threshold not met") != std::string::npos);

  attempt = alternative_obstruction(gamma, AlternativeVerdict{VerdictTag::Alt2, {evens, odds}}, 4, 2, 0.25);
  CHECK(!attempt.certificate);
  CHECK(attempt.failure.find("1/d^2") != std::string::npos);
}

TEST_CASE("certificate kinds round trip") {
  for (const auto kind : {CertificateKind::Cocompact3, CertificateKind::Alt1Case, CertificateKind::Alt2Case})
    CHECK(certificate_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(certificate_kind_from_string("Alt3"), ValidationError);
}
