#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neretin/almost_auto.hpp"
#include "neretin/bigint.hpp"
#include "neretin/perm_group.hpp"
#include "neretin/small_index.hpp"

namespace neretin {

/// A finitely generated candidate subgroup, explored up to a word length.
struct CandidateSubgroup {
  int d = 2;
  std::vector<AlmostAutomorphism> generators;
  std::size_t word_length = 6;
  std::size_t ball_cap = 200000;
};

CayleyBall candidate_ball(const CandidateSubgroup& gamma);

struct DiscretenessLevel {
  int n = 0;
  bool discrete = true;
  /// A shortest nontrivial ball element in U_n, when one exists.
  std::optional<BallElement> witness;
};

/// All findings are relative to the word length of the ball.
struct DiscretenessScan {
  std::vector<DiscretenessLevel> levels;
  std::optional<int> n0;
  std::size_t word_length = 0;
  std::size_t ball_size = 0;
  bool truncated = false;
};

DiscretenessScan discreteness_scan(const CandidateSubgroup& gamma, int n_max);
DiscretenessScan discreteness_scan(const CayleyBall& ball, int n_max);

/// Largest sphere handled by the group-theoretic routines.
inline constexpr std::size_t kMaxSphereDegree = 64;

struct LevelData {
  int d = 2;
  int n = 0;
  Integer k_n;
  Integer a_n;
  PermGroup gamma_n = PermGroup::trivial(1);
  /// c_n = [Sym(k_n) : Gamma_n] / a_n.
  Rational c_n;
  /// k_n! / (|A_n| |Gamma_n|) with |A_n| taken from a stabilizer chain of the ball generators.
  Rational c_n_second_route;
  bool routes_agree = false;
  /// No nontrivial ball element lies in U_n; the covolume identity applies only then.
  bool discrete = true;
  /// [Sym(k_n) : Gamma_n] <= c a_n, when c was supplied.
  std::optional<bool> index_estimate_holds;
  std::size_t ball_elements_used = 0;
  std::size_t word_length = 0;
  bool truncated = false;
};

/// Gamma_n is generated by the level-n images of ball elements lying in O_n.
/// Throws ResourceError when k_n exceeds kMaxSphereDegree.
LevelData level_covolume(const CayleyBall& ball, int d, int n, std::optional<double> c = std::nullopt);
LevelData level_covolume(const CandidateSubgroup& gamma, int n, std::optional<double> c = std::nullopt);

enum class CertificateKind { Cocompact3, Alt1Case, Alt2Case };

const char* to_string(CertificateKind kind);
CertificateKind certificate_kind_from_string(const std::string& text);

struct CertificateChecks {
  bool nontrivial = false;
  bool in_U_m = false;
  bool projects_into_Gamma_n = false;
  friend bool operator==(const CertificateChecks&, const CertificateChecks&) = default;
};

struct ObstructionCertificate {
  CertificateKind kind = CertificateKind::Cocompact3;
  int d = 2;
  int n = 0;
  int m = 0;
  /// Z for Cocompact3 and Alt1Case; Z_1, ..., Z_d for Alt2Case.
  std::vector<std::vector<Point>> parts;
  /// First entry is pi_n(lift); Alt2Case adds the two single swaps.
  std::vector<Permutation> witness_perms;
  AlmostAutomorphism lift;
  /// Word length the level group came from; absent for synthetic inputs.
  std::optional<std::size_t> truncation_L;
  CertificateChecks checks;
};

/// Double transposition (x1 y1)(x2 y2) of sibling pairs in Z, lifted to U_{n-1}.
/// Requires |Z| > k_n/2 + 2, n >= 2 and Alt(Z) <= Gamma_n. A seed picks random
/// sibling pairs instead of the lexicographically least ones.
ObstructionCertificate cocompact_obstruction(const PermGroup& gamma_n, const std::vector<Point>& z, int n, int d,
                                             std::optional<std::uint64_t> seed = std::nullopt,
                                             std::optional<std::size_t> truncation_L = std::nullopt);

struct ObstructionAttempt {
  std::optional<ObstructionCertificate> certificate;
  /// Why no certificate was produced.
  std::string failure;
  std::size_t fully_covered = 0;
  std::size_t flexible = 0;
  std::size_t usable = 0;
  double threshold_count = 0;
};

/// Builds the certificate for an Alt1 or Alt2 verdict on Gamma_n.
ObstructionAttempt alternative_obstruction(const PermGroup& gamma_n, const AlternativeVerdict& verdict, int n, int d,
                                           double alpha, std::optional<std::size_t> truncation_L = std::nullopt);

struct VerificationReport {
  std::vector<std::pair<std::string, bool>> checks;
  bool passed() const;
};

/// Rechecks every claim from the certificate fields alone.
VerificationReport verify_certificate(const ObstructionCertificate& cert, const PermGroup& gamma_n);

}  // namespace neretin
