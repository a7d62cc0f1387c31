#include "neretin/lattice.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "neretin/error.hpp"

namespace neretin {

CayleyBall candidate_ball(const CandidateSubgroup& gamma) {
  for (const auto& g : gamma.generators)
    if (g.d() != gamma.d) throw ValidationError("generator branching degree differs from the candidate's");
  return cayley_ball(gamma.generators, gamma.word_length, gamma.ball_cap);
}

DiscretenessScan discreteness_scan(const CayleyBall& ball, int n_max) {
  if (ball.word_length < 1) throw PreconditionError("discreteness scan needs word length >= 1");
  DiscretenessScan out;
  out.word_length = ball.word_length;
  out.ball_size = ball.elements.size();
  out.truncated = ball.truncated;
  std::vector<LevelMembership> memberships;
  for (const auto& e : ball.elements) memberships.push_back(min_O_level(e.element));
  for (int n = 1; n <= n_max; ++n) {
    DiscretenessLevel level{n, true, std::nullopt};
    for (std::size_t i = 0; i < ball.elements.size(); ++i) {
      const auto& e = ball.elements[i];
      if (e.element.is_identity() || !memberships[i].in_O || memberships[i].min_level > n) continue;
      if (in_U_level(e.element, n)) {
        level.discrete = false;
        level.witness = e;
        break;
      }
    }
    if (level.discrete && !out.n0) out.n0 = n;
    out.levels.push_back(std::move(level));
  }
  return out;
}

DiscretenessScan discreteness_scan(const CandidateSubgroup& gamma, int n_max) {
  return discreteness_scan(candidate_ball(gamma), n_max);
}

LevelData level_covolume(const CayleyBall& ball, int d, int n, std::optional<double> c) {
  validate_branching(d);
  if (n < 1) throw PreconditionError("covolume levels start at n = 1");
  const Integer k = sphere_size({d, n});
  if (k > static_cast<unsigned long>(kMaxSphereDegree))
    throw ResourceError("k_" + std::to_string(n) + " = " + to_string(k) + " exceeds the degree cap of " +
                        std::to_string(kMaxSphereDegree) + "; lower --n or --n-max");
  const std::size_t degree = k.get_ui();

  LevelData out;
  out.d = d;
  out.n = n;
  out.k_n = k;
  out.a_n = ball_automorphism_count({d, n});
  out.word_length = ball.word_length;
  out.truncated = ball.truncated;

  StabilizerChain chain(degree);
  std::vector<Permutation> gens;
  for (const auto& e : ball.elements) {
    const auto m = min_O_level(e.element);
    if (!m.in_O || m.min_level > n) continue;
    ++out.ball_elements_used;
    auto image = project_level(e.element, n);
    if (image.is_identity()) {
      if (!e.element.is_identity()) out.discrete = false;
      continue;
    }
    if (chain.extend(image)) gens.push_back(std::move(image));
  }
  out.gamma_n = PermGroup(degree, std::move(gens));
  const Integer sym = factorial(degree);
  out.c_n = Rational(out.gamma_n.index_in_symmetric(), out.a_n);
  out.c_n.canonicalize();

  const PermGroup ball_group(degree, ball_aut_generators({d, n}));
  out.c_n_second_route = Rational(sym, ball_group.order() * out.gamma_n.order());
  out.c_n_second_route.canonicalize();
  out.routes_agree = out.c_n == out.c_n_second_route;
  if (c) out.index_estimate_holds = Rational(out.gamma_n.index_in_symmetric()) <= exact_rational(*c) * out.a_n;
  return out;
}

LevelData level_covolume(const CandidateSubgroup& gamma, int n, std::optional<double> c) {
  return level_covolume(candidate_ball(gamma), gamma.d, n, c);
}

const char* to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Cocompact3: return "Cocompact3";
    case CertificateKind::Alt1Case: return "Alt1Case";
    case CertificateKind::Alt2Case: return "Alt2Case";
  }
  return "?";
}

CertificateKind certificate_kind_from_string(const std::string& text) {
  if (text == "Cocompact3") return CertificateKind::Cocompact3;
  if (text == "Alt1Case") return CertificateKind::Alt1Case;
  if (text == "Alt2Case") return CertificateKind::Alt2Case;
  throw ValidationError("unknown certificate kind \"" + text + "\"");
}

namespace {

std::size_t sphere_degree(int d, int n) { return sphere_size_checked(d, n, kMaxSphereDegree); }

// Children of each level-(n-1) vertex that lie in z, by parent index.
std::map<std::size_t, std::vector<Point>> children_in(const std::vector<Point>& z, int d) {
  std::map<std::size_t, std::vector<Point>> out;
  for (const auto x : z) out[x / static_cast<std::size_t>(d)].push_back(x);
  return out;
}

// The two sibling-pair witnesses of the pigeonhole step: a 3-cycle under one
// parent, or two pairs under two parents. Lexicographically least unless rng.
std::optional<Permutation> sibling_witness(const std::vector<Point>& z, std::size_t degree, int d,
                                           bool prefer_three_cycle, std::mt19937_64* rng) {
  const auto by_parent = children_in(z, d);
  std::vector<std::vector<Point>> rich;
  for (const auto& [parent, kids] : by_parent)
    if (kids.size() >= 2) rich.push_back(kids);
  const auto triple = std::find_if(rich.begin(), rich.end(), [](const auto& kids) { return kids.size() >= 3; });
  if (prefer_three_cycle && triple != rich.end())
    return Permutation::from_cycles(degree, {{(*triple)[0], (*triple)[1], (*triple)[2]}});
  if (rich.size() >= 2) {
    std::size_t a = 0, b = 1;
    if (rng) {
      a = (*rng)() % rich.size();
      b = (*rng)() % (rich.size() - 1);
      if (b >= a) ++b;
      std::shuffle(rich[a].begin(), rich[a].end(), *rng);
      std::shuffle(rich[b].begin(), rich[b].end(), *rng);
    }
    return Permutation::from_cycles(degree, {{rich[a][0], rich[a][1]}, {rich[b][0], rich[b][1]}});
  }
  if (triple != rich.end())
    return Permutation::from_cycles(degree, {{(*triple)[0], (*triple)[1], (*triple)[2]}});
  return std::nullopt;
}

void require_alt(const PermGroup& gamma_n, const std::vector<Point>& z) {
  if (z.size() >= 3 && !contains_alt_on(gamma_n, z).contained)
    throw PreconditionError("Alt(Z) is not contained in Gamma_n");
}

ObstructionCertificate finish(CertificateKind kind, const PermGroup& gamma_n, int d, int n, int m,
                              std::vector<std::vector<Point>> parts, std::vector<Permutation> witnesses,
                              std::optional<std::size_t> truncation_L) {
  ObstructionCertificate cert;
  cert.kind = kind;
  cert.d = d;
  cert.n = n;
  cert.m = m;
  cert.parts = std::move(parts);
  cert.lift = AlmostAutomorphism::from_level_permutation(d, n, witnesses.front());
  cert.witness_perms = std::move(witnesses);
  cert.truncation_L = truncation_L;
  cert.checks.nontrivial = !cert.lift.is_identity();
  cert.checks.in_U_m = in_U_level(cert.lift, m);
  cert.checks.projects_into_Gamma_n = gamma_n.contains(project_level(cert.lift, n));
  if (!cert.checks.nontrivial || !cert.checks.in_U_m || !cert.checks.projects_into_Gamma_n)
    throw std::logic_error("constructed certificate fails its own claims");
  return cert;
}

}  // namespace

ObstructionCertificate cocompact_obstruction(const PermGroup& gamma_n, const std::vector<Point>& z, int n, int d,
                                             std::optional<std::uint64_t> seed,
                                             std::optional<std::size_t> truncation_L) {
  validate_branching(d);
  if (n < 2) throw PreconditionError("the cocompact construction needs n >= 2");
  const std::size_t k = sphere_degree(d, n);
  if (gamma_n.degree() != k) throw ValidationError("Gamma_n does not act on K_n");
  validate_point_set(z, k);
  if (2 * z.size() <= k + 4) throw PreconditionError("|Z| must exceed k_n/2 + 2");
  require_alt(gamma_n, z);
  std::mt19937_64 rng(seed.value_or(0));
  auto witness = sibling_witness(z, k, d, false, seed ? &rng : nullptr);
  if (!witness) throw std::logic_error("pigeonhole found no sibling pairs inside Z");
  if (!gamma_n.contains(*witness)) throw std::logic_error("sibling witness is not in Gamma_n");
  return finish(CertificateKind::Cocompact3, gamma_n, d, n, n - 1, {z}, {*witness}, truncation_L);
}

ObstructionAttempt alternative_obstruction(const PermGroup& gamma_n, const AlternativeVerdict& verdict, int n, int d,
                                           double alpha, std::optional<std::size_t> truncation_L) {
  validate_branching(d);
  if (n < 2) throw PreconditionError("obstructions need n >= 2");
  const std::size_t k = sphere_degree(d, n);
  if (gamma_n.degree() != k) throw ValidationError("Gamma_n does not act on K_n");
  const auto du = static_cast<std::size_t>(d);
  ObstructionAttempt out;

  if (verdict.tag == VerdictTag::Alt1) {
    if (verdict.sets.size() != 1) throw PreconditionError("an Alt1 verdict carries exactly one set");
    const auto& z = verdict.sets[0];
    validate_point_set(z, k);
    if (du * z.size() <= k + 2 * du) throw PreconditionError("|Z| must exceed k_n/d + 2");
    require_alt(gamma_n, z);
    auto witness = sibling_witness(z, k, d, true, nullptr);
    if (!witness) {
      out.failure = "no parent with two children in Z";
      return out;
    }
    out.certificate = finish(CertificateKind::Alt1Case, gamma_n, d, n, n - 1, {z}, {*witness}, truncation_L);
    return out;
  }
  if (verdict.tag != VerdictTag::Alt2) throw PreconditionError("obstructions need an Alt1 or Alt2 verdict");

  const auto& parts = verdict.sets;
  std::vector<int> part_of(k, -1);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    validate_point_set(parts[i], k);
    for (const auto x : parts[i]) {
      if (part_of[x] >= 0) throw PreconditionError("Alt2 sets must be disjoint");
      part_of[x] = static_cast<int>(i);
    }
    require_alt(gamma_n, parts[i]);
  }

  if (!(alpha < 1.0 / (d * d))) {
    out.failure = "alpha must be below 1/d^2 for the two-swap construction; the count (1/d^2 - alpha) k_n must reach d+2";
    return out;
  }
  out.threshold_count = (1.0 / (d * d) - alpha) * static_cast<double>(k);
  if (out.threshold_count < d + 2 - 1e-9) {
    std::ostringstream msg;
    msg << "threshold not met: (1/d^2 - alpha) k_" << n << " = " << out.threshold_count << " < " << d + 2;
    out.failure = msg.str();
    return out;
  }

  // Flexible level-(n-1) vertices: two children in one part.
  const std::size_t k1 = k / du, k2 = k1 / du;
  std::vector<bool> flexible1(k1, false);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<std::size_t> flexible_here;
    for (const auto& [parent, kids] : children_in(parts[i], d)) {
      if (kids.size() >= 2) {
        flexible1[parent] = true;
        flexible_here.push_back(parent);
      }
      if (kids.size() >= 3) flexible_here.push_back(parent);
    }
    if (flexible_here.size() >= 2) {
      // Two sibling pairs (or three siblings) inside one part: the Alt1 argument applies there.
      auto witness = sibling_witness(parts[i], k, d, true, nullptr);
      out.certificate =
          finish(CertificateKind::Alt1Case, gamma_n, d, n, n - 1, {parts[i]}, {*witness}, truncation_L);
      return out;
    }
  }
  std::vector<bool> flexible2(k2, false);
  for (std::size_t u = 0; u < k1; ++u)
    if (flexible1[u]) flexible2[u / du] = true;
  out.flexible = static_cast<std::size_t>(std::count(flexible2.begin(), flexible2.end(), true));

  std::vector<std::size_t> usable;
  const std::size_t span = du * du;
  for (std::size_t v = 0; v < k2; ++v) {
    bool covered = true;
    for (std::size_t x = v * span; x < (v + 1) * span && covered; ++x) covered = part_of[x] >= 0;
    out.fully_covered += covered;
    if (covered && !flexible2[v]) usable.push_back(v);
  }
  out.usable = usable.size();
  if (usable.size() < 2) {
    out.failure = "threshold not met: " + std::to_string(usable.size()) +
                  " fully covered non-flexible vertices at level " + std::to_string(n - 2) + " (need 2)";
    return out;
  }

  std::vector<Permutation> swaps;
  for (std::size_t s = 0; s < 2; ++s) {
    const std::size_t v = usable[s];
    const std::size_t u0 = v * du, u1 = v * du + 1;
    std::vector<Point> images(k);
    for (std::size_t x = 0; x < k; ++x) images[x] = static_cast<Point>(x);
    std::vector<std::size_t> hits(parts.size(), 0);
    for (std::size_t c = 0; c < du; ++c) {
      const std::size_t x = u0 * du + c;
      std::size_t y = u1 * du;
      while (y < (u1 + 1) * du && part_of[y] != part_of[x]) ++y;
      if (y == (u1 + 1) * du) throw std::logic_error("non-flexible siblings do not meet the same parts");
      images[x] = static_cast<Point>(y);
      images[y] = static_cast<Point>(x);
      ++hits[static_cast<std::size_t>(part_of[x])];
    }
    for (const auto h : hits)
      if (h != 1) throw std::logic_error("a single swap must give one transposition per part");
    swaps.emplace_back(std::move(images));
  }
  const Permutation sigma = swaps[0] * swaps[1];
  if (!gamma_n.contains(sigma)) throw std::logic_error("two-swap element is not in Gamma_n");
  out.certificate = finish(CertificateKind::Alt2Case, gamma_n, d, n, n - 2, parts, {sigma, swaps[0], swaps[1]},
                           truncation_L);
  return out;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

namespace {

// Restriction of x to the sorted set z is a permutation of z with even sign.
bool even_on(const Permutation& x, const std::vector<Point>& z) {
  std::vector<Point> local(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto it = std::lower_bound(z.begin(), z.end(), x(z[i]));
    if (it == z.end() || *it != x(z[i])) return false;
    local[i] = static_cast<Point>(it - z.begin());
  }
  return Permutation(std::move(local)).sign() == 1;
}

}  // namespace

VerificationReport verify_certificate(const ObstructionCertificate& cert, const PermGroup& gamma_n) {
  VerificationReport report;
  auto add = [&](const char* name, bool ok) { report.checks.emplace_back(name, ok); };

  std::size_t k = 0;
  bool shape = cert.d >= 2 && cert.d <= 10 && cert.n >= 1 && cert.n <= 16 && cert.lift.d() == cert.d;
  if (shape) {
    try {
      k = sphere_degree(cert.d, cert.n);
    } catch (const std::exception&) {
      shape = false;
    }
  }
  shape = shape && gamma_n.degree() == k;
  add("shape", shape);
  if (!shape) return report;

  const int expected_m = cert.kind == CertificateKind::Alt2Case ? cert.n - 2 : cert.n - 1;
  add("level_rule", cert.m == expected_m && cert.m >= 0);

  CertificateChecks recomputed;
  recomputed.nontrivial = !canonicalize(cert.lift).is_identity();
  add("nontrivial", recomputed.nontrivial);
  recomputed.in_U_m = cert.m >= 0 && in_U_level(cert.lift, cert.m);
  add("in_U_m", recomputed.in_U_m);

  const auto membership = min_O_level(cert.lift);
  std::optional<Permutation> projection;
  if (membership.in_O && membership.min_level <= cert.n) projection = project_level(cert.lift, cert.n);
  recomputed.projects_into_Gamma_n = projection && gamma_n.contains(*projection);
  add("projects_into_Gamma_n", recomputed.projects_into_Gamma_n);
  add("witness_is_projection", projection && !cert.witness_perms.empty() && cert.witness_perms[0] == *projection);

  bool parts_ok = !cert.parts.empty();
  std::vector<int> part_of(k, -1);
  for (std::size_t i = 0; i < cert.parts.size() && parts_ok; ++i) {
    const auto& z = cert.parts[i];
    parts_ok = std::is_sorted(z.begin(), z.end()) && std::adjacent_find(z.begin(), z.end()) == z.end();
    for (const auto x : z) {
      if (!parts_ok || x >= k || part_of[x] >= 0) {
        parts_ok = false;
        break;
      }
      part_of[x] = static_cast<int>(i);
    }
  }
  if (parts_ok) {
    const std::size_t du = static_cast<std::size_t>(cert.d);
    switch (cert.kind) {
      case CertificateKind::Cocompact3:
        parts_ok = cert.parts.size() == 1 && 2 * cert.parts[0].size() > k + 4;
        break;
      case CertificateKind::Alt1Case:
        parts_ok = cert.parts.size() == 1 && du * cert.parts[0].size() > k + 2 * du;
        break;
      case CertificateKind::Alt2Case:
        parts_ok = cert.parts.size() <= du;
        break;
    }
  }
  add("parts_valid", parts_ok);

  bool alt_ok = parts_ok;
  for (const auto& z : cert.parts)
    if (alt_ok && z.size() >= 3) alt_ok = contains_alt_on(gamma_n, z).contained;
  add("parts_alt_contained", alt_ok);

  bool in_product = parts_ok && projection.has_value();
  if (in_product) {
    for (std::size_t x = 0; x < k && in_product; ++x)
      if (part_of[x] < 0) in_product = (*projection)(static_cast<Point>(x)) == x;
    for (const auto& z : cert.parts)
      if (in_product) in_product = even_on(*projection, z);
  }
  add("projection_in_alt_product", in_product);

  if (cert.kind == CertificateKind::Alt2Case) {
    bool swaps_ok = parts_ok && cert.witness_perms.size() == 3 && cert.witness_perms[1].degree() == k &&
                    cert.witness_perms[2].degree() == k &&
                    cert.witness_perms[1] * cert.witness_perms[2] == cert.witness_perms[0];
    for (std::size_t s = 1; s < 3 && swaps_ok; ++s) {
      const auto& swap = cert.witness_perms[s];
      const auto cd = cycle_decomposition(swap);
      std::vector<std::size_t> per_part(cert.parts.size(), 0);
      for (const auto& cyc : cd.cycles) {
        swaps_ok = swaps_ok && cyc.size() == 2 && part_of[cyc[0]] >= 0 && part_of[cyc[0]] == part_of[cyc[1]];
        if (swaps_ok) ++per_part[static_cast<std::size_t>(part_of[cyc[0]])];
      }
      swaps_ok = swaps_ok && std::all_of(per_part.begin(), per_part.end(), [](std::size_t c) { return c == 1; });
      // A single swap fixes K_{n-2}.
      auto level = parent_projection(swap, cert.d);
      swaps_ok = swaps_ok && level.induced;
      if (swaps_ok) {
        level = parent_projection(*level.induced, cert.d);
        swaps_ok = level.induced && level.induced->is_identity();
      }
    }
    add("single_swaps", swaps_ok);
  }

  add("recorded_checks", recomputed == cert.checks);
  return report;
}

}  // namespace neretin
