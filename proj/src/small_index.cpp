#include "neretin/small_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "neretin/error.hpp"

namespace neretin {

namespace {

constexpr double kSlack = 1e-9;
const double kLn2 = std::log(2.0);

double log_factorial(double m) { return std::lgamma(m + 1.0); }

void require_degree(int d) {
  if (d < 2) throw PreconditionError("d must be at least 2");
}

std::string describe(std::span<const Point> points) {
  std::string out = "{";
  for (std::size_t i = 0; i < points.size(); ++i) out += (i ? "," : "") + std::to_string(points[i]);
  return out + "}";
}

bool by_size_then_first(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

}  // namespace

double entropy(std::span<const double> probabilities) {
  double sum = 0;
  double h = 0;
  for (const double p : probabilities) {
    if (!(p >= 0)) throw ValidationError("entropy needs non-negative probabilities");
    sum += p;
    if (p > 0) h -= p * std::log2(p);
  }
  if (std::abs(sum - 1.0) > kSlack) throw ValidationError("entropy needs probabilities summing to 1");
  return h;
}

Integer multinomial(std::span<const std::uint64_t> parts) {
  Integer out = 1;
  std::uint64_t total = 0;
  for (const auto part : parts) {
    // Build up as a product of binomials C(total + part, part).
    total += part;
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), total, part);
    out *= b;
  }
  return out;
}

double log2_multinomial(std::span<const std::uint64_t> parts) {
  std::uint64_t total = 0;
  double value = 0;
  for (const auto part : parts) {
    total += part;
    value -= log_factorial(static_cast<double>(part));
  }
  value = (value + log_factorial(static_cast<double>(total))) / kLn2;
  if (total <= 40) {
    const double exact = log_integer(multinomial(parts)) / kLn2;
    if (std::abs(exact - value) > 1e-6 * std::max(1.0, exact))
      throw std::logic_error("log-gamma multinomial disagrees with the exact value");
  }
  return value;
}

std::uint64_t legendre_multiplicity(std::uint64_t k, std::uint64_t p) {
  std::uint64_t count = 0;
  for (std::uint64_t power = p; power <= k; power *= p) {
    count += k / power;
    if (power > k / p) break;
  }
  return count;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2) return out;
  std::vector<bool> composite(hi + 1, false);
  for (std::uint64_t i = 2; i * i <= hi; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= hi; j += i) composite[j] = true;
  for (std::uint64_t i = std::max<std::uint64_t>(lo, 2); i <= hi; ++i)
    if (!composite[i]) out.push_back(i);
  return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> admissible_prime_pairs(std::uint64_t k) {
  const auto primes = primes_in((3 * k + 9) / 10, k);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (auto qi = primes.rbegin(); qi != primes.rend(); ++qi) {
    if (k % 2 == 0 && *qi == k / 2 + 1) continue;
    for (auto pi = primes.rbegin(); pi != primes.rend(); ++pi)
      if (*pi + 3 <= *qi) out.emplace_back(*pi, *qi);
  }
  return out;
}

std::optional<PrimePair> prime_pair(std::uint64_t k) {
  const std::uint64_t lo = (3 * k + 9) / 10;
  auto primes = primes_in(lo, k);
  for (auto qi = primes.rbegin(); qi != primes.rend(); ++qi) {
    if (k % 2 == 0 && *qi == k / 2 + 1) continue;
    // The largest admissible q leaves the most room for p; if it fails, all smaller q do too.
    const auto pi = std::find_if(primes.rbegin(), primes.rend(), [&](std::uint64_t p) { return p + 3 <= *qi; });
    if (pi == primes.rend()) return std::nullopt;
    return PrimePair{*pi, *qi, lo, k, std::move(primes)};
  }
  return std::nullopt;
}

double log_f1(int d, double delta) { return std::log(delta) - std::log(100.0) - std::log(d + 1.0) / delta; }

double log_f2(int d, double log_epsilon) {
  return std::log(300.0 * kStirlingConstant) + std::log(d + 1.0) * std::exp(-log_epsilon);
}

BoundConstants choose_constants(double c, int d, double alpha) {
  require_degree(d);
  if (!(c > 0)) throw PreconditionError("the index constant c must be positive");
  if (!(alpha > 0) || !(alpha < 1.0 / d)) throw PreconditionError("alpha must lie in (0, 1/d)");
  BoundConstants out;
  out.c = c;
  out.d = d;
  out.alpha = alpha;
  std::vector<double> profile(static_cast<std::size_t>(d - 1), 1.0 / d);
  profile.push_back(1.0 / d - alpha / 2);
  profile.push_back(alpha / 2);
  out.entropy = entropy(profile);
  out.two_to_entropy = std::exp2(out.entropy);
  out.d_tilde = (d + out.two_to_entropy) / 2;

  const double log_base = std::log(1.0 / d - alpha);
  bool found = false;
  for (int jd = 2; jd <= 61 && !found; ++jd) {
    for (int jb = 1; jb <= 60 && !found; ++jb) {
      const double delta = std::ldexp(alpha, -jd);
      const double beta = std::ldexp(1.0, -jb);
      const double lhs = delta * log_base + (1 - beta) * out.entropy * kLn2;
      if (lhs > std::log(out.d_tilde) + kSlack) {
        out.delta = delta;
        out.beta = beta;
        out.margin = std::exp(lhs) - out.d_tilde;
        found = true;
      }
    }
  }
  if (!found) throw PreconditionError("no feasible (delta, beta) within 60 halvings");

  out.log_epsilon = log_f1(d, out.delta);
  out.log_V = log_f2(d, out.log_epsilon);
  out.log_V0 = out.log_V - out.log_epsilon;
  out.log_epsilon0 = out.log_epsilon - out.log_V;
  const double V = std::exp(out.log_V);
  out.log_C = std::log(c) + std::exp(-out.log_epsilon) * (log_factorial(V) + V * kLn2);
  return out;
}

LargeOrbits large_orbit_analysis(const PermGroup& group, int d, double delta) {
  require_degree(d);
  if (!(delta > 0) || delta > 1) throw PreconditionError("delta must lie in (0, 1]");
  const std::size_t k = group.degree();
  LargeOrbits out;
  out.log_epsilon = log_f1(d, delta);
  std::size_t covered = 0;
  std::vector<std::uint64_t> small_sizes;
  for (auto& orbit : orbits(group)) {
    if (std::log(static_cast<double>(orbit.size())) + kSlack >= out.log_epsilon + std::log(static_cast<double>(k))) {
      covered += orbit.size();
      out.large.push_back(std::move(orbit));
    } else {
      small_sizes.push_back(orbit.size());
      out.small.push_back(std::move(orbit));
    }
  }
  out.coverage = Rational(static_cast<unsigned long>(covered), static_cast<unsigned long>(k));
  out.coverage.canonicalize();
  out.covers = out.coverage >= 1 - exact_rational(delta);
  if (!out.covers) {
    out.log_index_lower_bound = log2_multinomial(small_sizes) * kLn2;
    out.log_chain_bound = delta * static_cast<double>(k) * (std::log(10.0) + std::log(d + 1.0) / delta);
  }
  return out;
}

void check_index_hypothesis(const PermGroup& group, double c, int d) {
  const Integer index = group.index_in_symmetric();
  const Rational bound = exact_rational(c) * Rational(power(Integer(d), group.degree()));
  if (Rational(index) > bound)
    throw PreconditionError("index hypothesis fails: [Sym(" + std::to_string(group.degree()) + "):G] = " +
                            to_string(index) + " exceeds c*d^k = " + to_string(bound));
}

LCollection extract_L(const PermGroup& group, const BoundConstants& constants) {
  check_index_hypothesis(group, constants.c, constants.d);
  const std::size_t k = group.degree();
  const double log_k = std::log(static_cast<double>(k));
  LCollection out;
  std::size_t covered = 0;
  std::size_t orbit_index = 0;
  for (const auto& entry : orbits_and_blocks(group)) {
    if (std::log(static_cast<double>(entry.orbit.size())) + kSlack < constants.log_epsilon + log_k) continue;
    const auto blocks = entry.finest ? entry.finest->blocks : std::vector<std::vector<Point>>{entry.orbit};
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      out.sets.push_back(blocks[i]);
      out.origin.emplace_back(orbit_index, i);
      covered += blocks[i].size();
    }
    ++orbit_index;
  }
  out.coverage = Rational(static_cast<unsigned long>(covered), static_cast<unsigned long>(k));
  out.coverage.canonicalize();

  if (out.coverage < 1 - exact_rational(constants.delta))
    out.failures.push_back("coverage " + to_string(out.coverage) + " is below 1 - delta");

  double log_index = log_factorial(static_cast<double>(covered));
  for (const auto& z : out.sets) {
    if (z.size() >= 2) log_index -= log_factorial(static_cast<double>(z.size())) - std::log(2.0);
    if (std::log(static_cast<double>(z.size())) + kSlack < constants.log_epsilon0 + log_k)
      out.failures.push_back("set " + describe(z) + " is smaller than epsilon0 * k");
    if (z.size() < 3) {
      out.witnesses.emplace_back();
      continue;
    }
    auto alt = contains_alt_on(group, z);
    if (!alt.contained) out.failures.push_back("Alt" + describe(z) + " is not contained in the group");
    out.witnesses.push_back(alt.contained ? std::move(alt.witnesses) : std::vector<Permutation>{});
  }
  if (log_index > constants.log_C + static_cast<double>(k) * std::log(constants.d) + kSlack)
    out.failures.push_back("index of the alternating product exceeds C * d^k");
  if (!out.sets.empty() && std::log(static_cast<double>(out.sets.size())) > constants.log_V0 + kSlack)
    out.failures.push_back("more than V0 sets");
  return out;
}

MassTransfer mass_transfer_bound(std::vector<std::uint64_t> parts, std::uint64_t k, int d, double alpha,
                                 double d_tilde) {
  require_degree(d);
  const auto du = static_cast<std::size_t>(d);
  std::erase(parts, 0u);
  std::sort(parts.rbegin(), parts.rend());
  MassTransfer out;
  out.initial_parts = parts;
  out.initial_multinomial = multinomial(parts);
  out.target = (k + du - 1) / du;
  out.tail = static_cast<std::uint64_t>(std::ceil(alpha * static_cast<double>(k) / 2 - kSlack));

  auto& z = parts;
  if (z.size() < du) z.resize(du, 0);
  std::uint64_t tail_sum = 0;
  for (std::size_t i = du; i < z.size(); ++i) tail_sum += z[i];
  out.tail = std::min(out.tail, tail_sum);

  const auto move_unit = [&](std::size_t from, std::size_t to) {
    // The multinomial changes by the factor z[from] / (z[to] + 1).
    if (z[from] > z[to] + 1) throw std::logic_error("mass transfer would increase the multinomial");
    --z[from];
    ++z[to];
    ++out.unit_moves;
  };
  const auto last_tail = [&] {
    std::size_t s = z.size() - 1;
    while (z[s] == 0) --s;
    return s;
  };

  std::size_t i = 0;
  for (; i + 1 < du && tail_sum > out.tail; ++i) {
    while (z[i] < out.target && tail_sum > out.tail) {
      move_unit(last_tail(), i);
      --tail_sum;
    }
  }
  if (tail_sum > out.tail) {
    while (tail_sum > out.tail) {
      move_unit(last_tail(), du - 1);
      --tail_sum;
    }
  } else {
    for (std::size_t j = 0; j + 1 < du; ++j)
      while (z[j] < out.target && z[du - 1] > 0) move_unit(du - 1, j);
  }

  std::vector<std::uint64_t> final_parts(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(du));
  std::size_t tail_terms = 0;
  for (std::size_t j = du; j < z.size(); ++j) tail_terms += z[j] > 0;
  if (tail_terms > 1) out.merges = tail_terms - 1;
  final_parts.push_back(tail_sum);
  std::erase(final_parts, 0u);
  out.final_parts = final_parts;
  out.final_multinomial = multinomial(final_parts);
  if (out.final_multinomial > out.initial_multinomial)
    throw std::logic_error("mass transfer increased the multinomial");
  out.log2_bound = log_integer(out.final_multinomial) / kLn2;
  out.log2_growth_target = static_cast<double>(k) * std::log2(d_tilde);
  return out;
}

const char* to_string(VerdictTag tag) {
  switch (tag) {
    case VerdictTag::Alt1: return "Alt1";
    case VerdictTag::Alt2: return "Alt2";
    case VerdictTag::Unclassified: return "Unclassified";
    case VerdictTag::Inconclusive: return "Inconclusive";
  }
  return "?";
}

AlternativeVerdict classify_alternative(const PermGroup& group, const BoundConstants& constants) {
  auto L = extract_L(group, constants);
  const std::size_t k = group.degree();
  const auto d = static_cast<std::size_t>(constants.d);
  AlternativeVerdict out;
  if (!L.verified()) {
    out.tag = VerdictTag::Unclassified;
    for (const auto& f : L.failures) out.reason += (out.reason.empty() ? "" : "; ") + f;
    return out;
  }
  std::vector<std::size_t> order(L.sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return by_size_then_first(L.sets[a], L.sets[b]); });

  if (!order.empty() && d * L.sets[order[0]].size() > k + 2 * d) {
    out.tag = VerdictTag::Alt1;
    out.sets.push_back(L.sets[order[0]]);
    out.witnesses.push_back(L.witnesses[order[0]]);
    out.reason = "a set of size " + std::to_string(out.sets[0].size()) + " exceeds k/d + 2";
    return out;
  }
  std::size_t union_size = 0;
  for (std::size_t i = 0; i < std::min(d, order.size()); ++i) union_size += L.sets[order[i]].size();
  if (Rational(static_cast<unsigned long>(union_size)) >
      (1 - exact_rational(constants.alpha)) * Rational(static_cast<unsigned long>(k))) {
    out.tag = VerdictTag::Alt2;
    for (std::size_t i = 0; i < std::min(d, order.size()); ++i) {
      out.sets.push_back(L.sets[order[i]]);
      out.witnesses.push_back(L.witnesses[order[i]]);
    }
    out.reason = "the " + std::to_string(out.sets.size()) + " largest sets cover " + std::to_string(union_size) +
                 " points, more than (1 - alpha) k";
    return out;
  }
  out.tag = VerdictTag::Unclassified;
  out.reason = "no set exceeds k/d + 2 and the d largest sets cover only " + std::to_string(union_size) + " points";
  std::vector<std::uint64_t> sizes;
  for (const auto& z : L.sets) sizes.push_back(z.size());
  out.mass_transfer = mass_transfer_bound(sizes, k, constants.d, constants.alpha, constants.d_tilde);
  return out;
}

namespace {

// Single p-cycles of the group, collected from p-parts of sampled elements,
// plus a greedily grown family of pairwise disjoint ones.
struct CycleHarvest {
  std::vector<Permutation> cycles;
  std::vector<Permutation> disjoint;
};

CycleHarvest harvest_cycles(const PermGroup& group, std::uint64_t p, std::size_t want, std::size_t budget,
                            std::mt19937_64& rng) {
  CycleHarvest out;
  std::vector<bool> used(group.degree(), false);
  const auto consider = [&](const Permutation& x) {
    Integer ord = x.order();
    Integer p_part = 1;
    while (ord % p == 0) {
      ord /= p;
      p_part *= p;
    }
    if (p_part == 1) return;
    // Order-p element: every cycle has length p.
    const auto y = x.pow(ord * (p_part / p));
    for (const auto& cyc : cycle_decomposition(y).cycles) {
      if (cyc.size() != p) continue;
      const auto c = Permutation::from_cycles(group.degree(), {cyc});
      if (std::find(out.cycles.begin(), out.cycles.end(), c) != out.cycles.end()) continue;
      if (!group.contains(c)) continue;
      out.cycles.push_back(c);
      if (std::none_of(cyc.begin(), cyc.end(), [&](Point v) { return used[v]; })) {
        for (const auto v : cyc) used[v] = true;
        out.disjoint.push_back(c);
      }
    }
  };
  for (const auto& g : group.generators()) consider(g);
  for (std::size_t i = 0; i < budget && out.disjoint.size() < want; ++i) consider(group.random_element(rng));
  return out;
}

std::vector<Point> support_of(const Permutation& x) { return cycle_decomposition(x).support; }

bool meets(const std::vector<Point>& a, const std::vector<Point>& b) {
  std::vector<Point> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return !common.empty();
}

}  // namespace

AlternativeVerdict d2_classify(const PermGroup& group, double c, const CycleSearchOptions& options) {
  check_index_hypothesis(group, c, 2);
  const std::size_t k = group.degree();
  AlternativeVerdict out;
  out.tag = VerdictTag::Inconclusive;

  std::optional<PrimePair> chosen;
  for (const auto& [p, q] : admissible_prime_pairs(k)) {
    const Integer sylow = power(Integer(p), legendre_multiplicity(k, p)) * power(Integer(q), legendre_multiplicity(k, q));
    if (group.order() % sylow == 0) {
      chosen = PrimePair{p, q, (3 * k + 9) / 10, k, primes_in((3 * k + 9) / 10, k)};
      break;
    }
  }
  if (!chosen) {
    out.reason = "no admissible prime pair whose Sylow subgroups divide the group order";
    return out;
  }
  out.primes = chosen;
  const std::uint64_t p = chosen->p, q = chosen->q;

  std::mt19937_64 rng(options.seed);
  const auto pc = harvest_cycles(group, p, k / p, options.budget, rng);
  const auto qc = harvest_cycles(group, q, k / q, options.budget, rng);
  if (pc.disjoint.size() < k / p || qc.disjoint.size() < k / q) {
    out.reason = "cycle search budget exhausted before finding floor(k/p) disjoint p-cycles and floor(k/q) q-cycles";
    return out;
  }

  std::vector<std::vector<Point>> parts;
  std::vector<std::vector<Permutation>> witnesses;
  for (const auto& cq : qc.disjoint) {
    const auto q_support = support_of(cq);
    const auto seed_it = std::find_if(pc.disjoint.begin(), pc.disjoint.end(),
                                      [&](const Permutation& x) { return meets(support_of(x), q_support); });
    if (seed_it == pc.disjoint.end()) {
      out.reason = "a q-cycle meets no p-cycle of the disjoint family";
      return out;
    }
    std::vector<Permutation> pool;
    const auto cq_inv = cq.inverse();
    Permutation conj_by = Permutation::identity(k), conj_inv = Permutation::identity(k);
    for (std::uint64_t t = 0; t < q; ++t) {
      pool.push_back(conj_by * *seed_it * conj_inv);
      conj_by = cq * conj_by;
      conj_inv = conj_inv * cq_inv;
    }
    pool.insert(pool.end(), pc.cycles.begin(), pc.cycles.end());

    // Order the pool so each cycle overlaps an earlier one.
    std::vector<Permutation> chain{pool.front()};
    std::vector<bool> taken(pool.size(), false);
    taken[0] = true;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (taken[i]) continue;
        if (std::find(chain.begin(), chain.end(), pool[i]) != chain.end()) {
          taken[i] = true;
          continue;
        }
        if (std::any_of(chain.begin(), chain.end(), [&](const Permutation& x) { return overlapping_supports(x, pool[i]); })) {
          chain.push_back(pool[i]);
          taken[i] = grew = true;
        }
      }
    }
    const auto chained = chained_two_transitivity(chain);
    if (chained.verdict != Transitivity::TwoTransitive) {
      out.reason = "chained p-cycles are not 2-transitive on their support";
      return out;
    }
    const auto& kj = chained.support;
    if (!std::includes(kj.begin(), kj.end(), q_support.begin(), q_support.end())) {
      out.reason = "chained support misses part of a q-cycle";
      return out;
    }
    const auto jordan = jordan_classify(restrict_to(chained.group, kj), {options.budget, options.seed});
    if (jordan.tag != GiantClass::Alternating && jordan.tag != GiantClass::FullSymmetric) {
      out.reason = "Jordan test did not confirm a giant on a chained support";
      return out;
    }
    if (std::find(parts.begin(), parts.end(), kj) != parts.end()) continue;
    for (const auto& other : parts) {
      if (meets(other, kj)) {
        out.reason = "two chained supports overlap without coinciding";
        return out;
      }
    }
    auto alt = contains_alt_on(group, kj);
    if (!alt.contained) throw std::logic_error("Jordan giant on a chained support not contained in the group");
    parts.push_back(kj);
    witnesses.push_back(std::move(alt.witnesses));
  }

  std::vector<std::size_t> order(parts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return by_size_then_first(parts[a], parts[b]); });
  if (2 * parts[order[0]].size() >= k + 4) {
    out.tag = VerdictTag::Alt1;
    out.sets.push_back(parts[order[0]]);
    out.witnesses.push_back(witnesses[order[0]]);
    out.reason = "a chained support has at least k/2 + 2 points";
    return out;
  }
  if (parts.size() < 2) {
    out.reason = "a single chained support below k/2 + 2 points";
    return out;
  }
  const std::size_t a = parts[order[0]].size(), b = parts[order[1]].size();
  const std::size_t r = k - a - b;
  const double lhs = std::log(6.0) + log_factorial(static_cast<double>(a)) + log_factorial(static_cast<double>(b)) +
                     log_factorial(static_cast<double>(r));
  const double rhs = static_cast<double>(k) * std::log(0.49) + log_factorial(static_cast<double>(k));
  out.factorial_estimate = std::make_pair(lhs, rhs);
  if (100 * r > 24 * k) {
    out.reason = "residue " + std::to_string(r) + " exceeds 0.24k";
    return out;
  }
  out.tag = VerdictTag::Alt2;
  for (std::size_t i = 0; i < 2; ++i) {
    out.sets.push_back(parts[order[i]]);
    out.witnesses.push_back(witnesses[order[i]]);
  }
  out.reason = "two chained supports cover " + std::to_string(a + b) + " points, more than 0.76k";
  return out;
}

BabaiPredicates babai_predicates(std::uint64_t n, const Integer& order, bool two_transitive,
                                 std::optional<double> c_param) {
  if (n < 5) throw PreconditionError("Babai predicates need n >= 5");
  if (order <= 0) throw ValidationError("group order must be positive");
  BabaiPredicates out;
  const double ln_n = std::log(static_cast<double>(n));
  const double root_n = std::sqrt(static_cast<double>(n));
  out.log_order = log_integer(order);
  if (!two_transitive) {
    out.log_bound = 4 * root_n * ln_n * ln_n;
  } else if (c_param) {
    out.log_bound = std::exp(*c_param * std::sqrt(ln_n));
  }
  out.must_be_giant = out.log_bound && out.log_order > *out.log_bound + kSlack;
  out.log_maroti_bound = std::log(50.0) + root_n * ln_n;
  out.maroti_must_be_giant = out.log_order > out.log_maroti_bound + kSlack;
  return out;
}

BlockBound block_bound_and_unimodularity(double y, double b, int d, double epsilon) {
  require_degree(d);
  if (!(b >= 1) || !(b <= y / 2)) throw PreconditionError("block count b must lie in [1, y/2]");
  if (!(epsilon > 0)) throw PreconditionError("epsilon must be positive");
  const double c = kStirlingConstant;
  const auto log_g = [&](double x) { return -y * std::log(100 * c) + y * std::log(x) - (x / 2) * std::log(y * x); };
  BlockBound out;
  out.log_g = log_g(b);
  out.log_f2 = log_f2(d, std::log(epsilon));
  out.f2 = std::exp(out.log_f2);
  out.h_prime_decreasing = true;
  const auto h_prime = [&](double x) { return y / x - 0.5 - std::log(x) / 2 - std::log(y) / 2; };
  double previous = h_prime(1);
  for (double x = 2; x <= y / 2; x += 1) {
    const double value = h_prime(x);
    if (!(value < previous)) out.h_prime_decreasing = false;
    previous = value;
  }
  out.log_g_half = log_g(y / 2);
  out.log_g_half_lower = y * (0.5 * std::log(y) - std::log(400 * c));
  out.half_bound_holds = out.log_g_half >= out.log_g_half_lower - kSlack;
  return out;
}

}  // namespace neretin
