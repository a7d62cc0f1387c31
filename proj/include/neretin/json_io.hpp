#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "neretin/lattice.hpp"
#include "neretin/small_index.hpp"

namespace neretin {

using Json = nlohmann::ordered_json;

/// {"num": "...", "den": "..."}; decimal strings keep big values exact.
Json to_json(const Rational& value);
Rational rational_from_json(const Json& j);
Json to_json(const Integer& value);

/// {"degree": k, "images": [...]}, 0-based.
Json to_json(const Permutation& p);
/// Accepts the object form or a cycle string such as "(0 1 2)(3 4)"; the
/// string form needs `degree`.
Permutation permutation_from_json(const Json& j, std::optional<std::size_t> degree = std::nullopt);

/// {"degree": k, "generators": [...]}.
Json to_json(const PermGroup& g);
PermGroup group_from_json(const Json& j);

/// {"d": 2, "domain": [...], "range": [...], "map": [[i, j], ...]} with sorted leaf arrays.
Json to_json(const AlmostAutomorphism& g);
AlmostAutomorphism element_from_json(const Json& j);

/// {"d": 2, "generators": [element, ...], "word_length": L}; word_length is optional.
CandidateSubgroup candidate_from_json(const Json& j);
Json to_json(const CandidateSubgroup& c);

Json to_json(const BoundConstants& k);
Json to_json(const MassTransfer& m);
Json to_json(const AlternativeVerdict& v);
Json to_json(const LCollection& l);

Json to_json(const DiscretenessScan& scan);
Json to_json(const LevelData& level);

Json to_json(const ObstructionCertificate& cert);
ObstructionCertificate certificate_from_json(const Json& j);
Json to_json(const VerificationReport& report);
Json to_json(const ObstructionAttempt& attempt);

/// Reads and parses a JSON file; ValidationError names the file on failure.
Json read_json_file(const std::string& path);

}  // namespace neretin
