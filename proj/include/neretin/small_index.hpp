#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neretin/bigint.hpp"
#include "neretin/perm_group.hpp"

namespace neretin {

/// Stirling constant for m! <= c_st sqrt(2 pi m) (m/e)^m.
inline const double kStirlingConstant = 1.0869040495212708;  // e^(1/12)

/// H(p_1, ..., p_s) = -sum p_i log2 p_i. Inputs must be >= 0 and sum to 1 within 1e-9.
double entropy(std::span<const double> probabilities);

/// Exact multinomial (sum parts)! / prod(parts!).
Integer multinomial(std::span<const std::uint64_t> parts);
/// log2 of the multinomial via log-gamma; cross-checked exactly when the sum is <= 40.
double log2_multinomial(std::span<const std::uint64_t> parts);

/// Multiplicity of the prime p in k!.
std::uint64_t legendre_multiplicity(std::uint64_t k, std::uint64_t p);
/// Primes in [lo, hi] by a sieve of Eratosthenes.
std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);

struct PrimePair {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  /// The sieved interval [ceil(3k/10), k] and every prime in it.
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> interval_primes;
};

/// All pairs (p, q) of primes in [0.3k, k] with p <= q - 3 and q != k/2 + 1,
/// ordered by q descending, then p descending.
std::vector<std::pair<std::uint64_t, std::uint64_t>> admissible_prime_pairs(std::uint64_t k);
/// The first admissible pair, or nullopt when there is none.
std::optional<PrimePair> prime_pair(std::uint64_t k);

/// epsilon = delta / (100 (d+1)^(1/delta)), as a natural log.
double log_f1(int d, double delta);
/// f2 = 300 c_st (d+1)^(1/epsilon), as a natural log (epsilon given by its log).
double log_f2(int d, double log_epsilon);

struct BoundConstants {
  double c = 0;
  int d = 2;
  double alpha = 0;
  /// H(1/d, ..., 1/d, 1/d - alpha/2, alpha/2) with d-1 leading terms.
  double entropy = 0;
  double two_to_entropy = 0;
  double d_tilde = 0;
  double delta = 0;
  double beta = 0;
  /// (1/d - alpha)^delta (2^H)^(1-beta) - d_tilde, positive when feasible.
  double margin = 0;
  // Natural logarithms; the values themselves leave double range quickly.
  double log_epsilon = 0;
  double log_V = 0;
  double log_V0 = 0;
  double log_epsilon0 = 0;
  double log_C = 0;
};

/// Picks d_tilde, delta = alpha/2^j (j >= 2) and beta = 2^-j (j >= 1).
/// Requires 0 < alpha < 1/d; throws PreconditionError otherwise or when no
/// pair is feasible within 60 halvings.
BoundConstants choose_constants(double c, int d, double alpha);

struct LargeOrbits {
  double log_epsilon = 0;
  std::vector<std::vector<Point>> large;
  std::vector<std::vector<Point>> small;
  Rational coverage;
  bool covers = false;
  /// When coverage < 1 - delta: log of the multinomial over the small orbits,
  /// a lower bound on the index, and the log of (10 (d+1)^(1/delta))^(delta k).
  std::optional<double> log_index_lower_bound;
  std::optional<double> log_chain_bound;
};

LargeOrbits large_orbit_analysis(const PermGroup& group, int d, double delta);

/// Throws PreconditionError unless [Sym(k) : group] <= c d^k, compared exactly.
void check_index_hypothesis(const PermGroup& group, double c, int d);

struct LCollection {
  std::vector<std::vector<Point>> sets;
  /// 3-cycle witnesses of Alt(Z) <= group, per set (empty for |Z| <= 2).
  std::vector<std::vector<Permutation>> witnesses;
  /// (orbit index, block index) for each set.
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  Rational coverage;
  /// Properties that could not be confirmed at this size.
  std::vector<std::string> failures;
  bool verified() const { return failures.empty(); }
};

LCollection extract_L(const PermGroup& group, const BoundConstants& constants);

struct MassTransfer {
  std::vector<std::uint64_t> initial_parts;
  std::vector<std::uint64_t> final_parts;
  std::size_t unit_moves = 0;
  std::size_t merges = 0;
  Integer initial_multinomial;
  Integer final_multinomial;
  /// Target tail size ceil(alpha k / 2) and per-part target ceil(k/d).
  std::uint64_t tail = 0;
  std::uint64_t target = 0;
  /// log2 of the final multinomial against k log2 d_tilde.
  double log2_bound = 0;
  double log2_growth_target = 0;
};

/// Moves mass between parts as in the lower-bound argument, asserting at
/// every step that the multinomial does not increase.
MassTransfer mass_transfer_bound(std::vector<std::uint64_t> parts, std::uint64_t k, int d, double alpha,
                                 double d_tilde);

enum class VerdictTag { Alt1, Alt2, Unclassified, Inconclusive };

const char* to_string(VerdictTag tag);

struct AlternativeVerdict {
  VerdictTag tag = VerdictTag::Inconclusive;
  /// Z for Alt1; Z_1, ..., Z_d for Alt2.
  std::vector<std::vector<Point>> sets;
  std::vector<std::vector<Permutation>> witnesses;
  std::string reason;
  std::optional<MassTransfer> mass_transfer;
  std::optional<PrimePair> primes;
  /// Natural logs of 6 (ak)!(bk)!(rk)! and 0.49^k k! when the two-set branch ran.
  std::optional<std::pair<double, double>> factorial_estimate;
};

AlternativeVerdict classify_alternative(const PermGroup& group, const BoundConstants& constants);

struct CycleSearchOptions {
  std::size_t budget = 20000;
  std::uint64_t seed = 1;
};

AlternativeVerdict d2_classify(const PermGroup& group, double c, const CycleSearchOptions& options = {});

struct BabaiPredicates {
  double log_order = 0;
  /// Natural log of the applicable bound; absent for 2-transitive groups without c.
  std::optional<double> log_bound;
  bool must_be_giant = false;
  double log_maroti_bound = 0;
  bool maroti_must_be_giant = false;
  bool consistent_with_not_giant() const { return !must_be_giant; }
};

BabaiPredicates babai_predicates(std::uint64_t n, const Integer& order, bool two_transitive,
                                 std::optional<double> c_param = std::nullopt);

struct BlockBound {
  double log_g = 0;
  double log_f2 = 0;
  double f2 = 0;
  bool h_prime_decreasing = false;
  double log_g_half = 0;
  double log_g_half_lower = 0;
  bool half_bound_holds = false;
};

/// log g(b) = -y ln(100 c_st) + y ln b - (b/2) ln(y b), the f2 bound, and a
/// grid check that h'(x) = y/x - 1/2 - ln(x)/2 - ln(y)/2 decreases on 1..y/2.
BlockBound block_bound_and_unimodularity(double y, double b, int d, double epsilon);

}  // namespace neretin
