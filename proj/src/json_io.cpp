#include "neretin/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "neretin/error.hpp"

namespace neretin {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("field \"") + key + "\": " + e.what());
  }
}

// Non-finite doubles become strings; JSON has no infinity.
Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json point_sets(const std::vector<std::vector<Point>>& sets) {
  Json out = Json::array();
  for (const auto& s : sets) out.push_back(s);
  return out;
}

Json perm_list(const std::vector<Permutation>& perms) {
  Json out = Json::array();
  for (const auto& p : perms) out.push_back(to_json(p));
  return out;
}

Json addresses(const std::vector<VertexAddress>& leaves) {
  Json out = Json::array();
  for (const auto& v : leaves) out.push_back(v.to_string());
  return out;
}

std::vector<VertexAddress> parse_addresses(const Json& j, const char* key) {
  std::vector<VertexAddress> out;
  for (const auto& text : field<std::vector<std::string>>(j, key)) out.push_back(VertexAddress::parse(text));
  return out;
}

}  // namespace

Json to_json(const Rational& value) {
  return Json{{"num", value.get_num().get_str()}, {"den", value.get_den().get_str()}};
}

Rational rational_from_json(const Json& j) {
  Rational r;
  try {
    r = Rational(Integer(field<std::string>(j, "num")), Integer(field<std::string>(j, "den")));
  } catch (const std::invalid_argument&) {
    throw ValidationError("rational fields must be decimal integers");
  }
  if (r.get_den() == 0) throw ValidationError("rational with zero denominator");
  r.canonicalize();
  return r;
}

Json to_json(const Integer& value) { return value.get_str(); }

Json to_json(const Permutation& p) { return Json{{"degree", p.degree()}, {"images", p.images()}}; }

Permutation permutation_from_json(const Json& j, std::optional<std::size_t> degree) {
  if (j.is_string()) {
    if (!degree) throw ValidationError("cycle notation needs a degree");
    return Permutation::parse_cycles(j.get<std::string>(), *degree);
  }
  const auto k = field<std::size_t>(j, "degree");
  if (degree && k != *degree) throw ValidationError("permutation degree differs from the enclosing degree");
  auto images = field<std::vector<Point>>(j, "images");
  if (images.size() != k) throw ValidationError("images length differs from degree");
  return Permutation(std::move(images));
}

Json to_json(const PermGroup& g) { return Json{{"degree", g.degree()}, {"generators", perm_list(g.generators())}}; }

PermGroup group_from_json(const Json& j) {
  const auto k = field<std::size_t>(j, "degree");
  if (k == 0) throw ValidationError("group degree must be positive");
  if (!j.contains("generators") || !j["generators"].is_array())
    throw ValidationError("missing array field \"generators\"");
  std::vector<Permutation> gens;
  for (const auto& g : j["generators"]) gens.push_back(permutation_from_json(g, k));
  return PermGroup(k, std::move(gens));
}

Json to_json(const AlmostAutomorphism& g) {
  Json map = Json::array();
  const auto idx = g.range_indices();
  for (std::size_t i = 0; i < idx.size(); ++i) map.push_back({i, idx[i]});
  return Json{{"d", g.d()}, {"domain", addresses(g.domain())}, {"range", addresses(g.range())}, {"map", map}};
}

AlmostAutomorphism element_from_json(const Json& j) {
  const int d = field<int>(j, "d");
  const auto domain = parse_addresses(j, "domain");
  const auto range = parse_addresses(j, "range");
  const auto map = field<std::vector<std::pair<std::size_t, std::size_t>>>(j, "map");
  return AlmostAutomorphism::from_leaves(d, domain, range, map);
}

CandidateSubgroup candidate_from_json(const Json& j) {
  CandidateSubgroup c;
  c.d = field<int>(j, "d");
  validate_branching(c.d);
  if (!j.contains("generators") || !j["generators"].is_array())
    throw ValidationError("missing array field \"generators\"");
  for (const auto& g : j["generators"]) c.generators.push_back(element_from_json(g));
  if (j.contains("word_length")) c.word_length = field<std::size_t>(j, "word_length");
  for (const auto& g : c.generators)
    if (g.d() != c.d) throw ValidationError("generator branching degree differs from the candidate's");
  return c;
}

Json to_json(const CandidateSubgroup& c) {
  Json gens = Json::array();
  for (const auto& g : c.generators) gens.push_back(to_json(g));
  return Json{{"d", c.d}, {"generators", gens}, {"word_length", c.word_length}};
}

Json to_json(const BoundConstants& k) {
  return Json{
      {"c", number(k.c)},
      {"d", k.d},
      {"alpha", number(k.alpha)},
      {"entropy", number(k.entropy)},
      {"two_to_entropy", number(k.two_to_entropy)},
      {"d_tilde", number(k.d_tilde)},
      {"delta", number(k.delta)},
      {"beta", number(k.beta)},
      {"margin", number(k.margin)},
      {"log_epsilon", number(k.log_epsilon)},
      {"log_V", number(k.log_V)},
      {"log_V0", number(k.log_V0)},
      {"log_epsilon0", number(k.log_epsilon0)},
      {"log_C", number(k.log_C)},
      {"formulas",
       {{"entropy", "H(1/d, ..., 1/d, 1/d - alpha/2, alpha/2), d-1 leading terms"},
        {"d_tilde", "midpoint of (d, 2^H)"},
        {"delta", "alpha / 2^j, j >= 2, first feasible"},
        {"beta", "2^-j, j >= 1, first feasible"},
        {"margin", "(1/d - alpha)^delta (2^H)^(1-beta) - d_tilde"},
        {"log_epsilon", "ln(delta / (100 (d+1)^(1/delta)))"},
        {"log_V", "ln(f2(epsilon)) = ln(300 c_st (d+1)^(1/epsilon))"},
        {"log_V0", "ln(V / epsilon)"},
        {"log_epsilon0", "ln(epsilon / V)"},
        {"log_C", "ln c + (1/epsilon) ln(V! 2^V)"}}}};
}

Json to_json(const MassTransfer& m) {
  return Json{{"initial_parts", m.initial_parts},
              {"final_parts", m.final_parts},
              {"unit_moves", m.unit_moves},
              {"merges", m.merges},
              {"initial_multinomial", to_json(m.initial_multinomial)},
              {"final_multinomial", to_json(m.final_multinomial)},
              {"tail", m.tail},
              {"target", m.target},
              {"log2_bound", number(m.log2_bound)},
              {"log2_growth_target", number(m.log2_growth_target)}};
}

Json to_json(const AlternativeVerdict& v) {
  Json out{{"tag", to_string(v.tag)}, {"sets", point_sets(v.sets)}};
  Json witnesses = Json::array();
  for (const auto& w : v.witnesses) witnesses.push_back(perm_list(w));
  out["witnesses"] = witnesses;
  out["reason"] = v.reason;
  if (v.mass_transfer) out["mass_transfer"] = to_json(*v.mass_transfer);
  if (v.primes) out["primes"] = {{"p", v.primes->p}, {"q", v.primes->q}, {"lo", v.primes->lo}, {"hi", v.primes->hi}};
  if (v.factorial_estimate)
    out["factorial_estimate"] = {{"log_lhs", number(v.factorial_estimate->first)},
                                 {"log_rhs", number(v.factorial_estimate->second)}};
  return out;
}

Json to_json(const LCollection& l) {
  Json witnesses = Json::array();
  for (const auto& w : l.witnesses) witnesses.push_back(perm_list(w));
  return Json{{"sets", point_sets(l.sets)},
              {"witnesses", witnesses},
              {"origin", l.origin},
              {"coverage", to_json(l.coverage)},
              {"failures", l.failures}};
}

Json to_json(const DiscretenessScan& scan) {
  Json levels = Json::array();
  for (const auto& level : scan.levels) {
    Json row{{"n", level.n}, {"discrete", level.discrete}};
    if (level.witness) row["witness"] = {{"word", level.witness->word}, {"element", to_json(level.witness->element)}};
    levels.push_back(row);
  }
  Json out{{"levels", levels}};
  out["n0"] = scan.n0 ? Json(*scan.n0) : Json(nullptr);
  out["relative_to_word_length"] = scan.word_length;
  out["ball_size"] = scan.ball_size;
  out["truncated"] = scan.truncated;
  return out;
}

Json to_json(const LevelData& level) {
  Json out{{"d", level.d},
           {"n", level.n},
           {"k_n", to_json(level.k_n)},
           {"a_n", to_json(level.a_n)},
           {"gamma_order", to_json(level.gamma_n.order())},
           {"c_n", to_json(level.c_n)},
           {"c_n_second_route", to_json(level.c_n_second_route)},
           {"routes_agree", level.routes_agree},
           {"discrete", level.discrete}};
  out["index_estimate_holds"] = level.index_estimate_holds ? Json(*level.index_estimate_holds) : Json(nullptr);
  out["ball_elements_used"] = level.ball_elements_used;
  out["word_length"] = level.word_length;
  out["truncated"] = level.truncated;
  return out;
}

Json to_json(const ObstructionCertificate& cert) {
  Json out{{"kind", to_string(cert.kind)},
           {"d", cert.d},
           {"n", cert.n},
           {"m", cert.m},
           {"parts", point_sets(cert.parts)},
           {"witness_perms", perm_list(cert.witness_perms)},
           {"lift", to_json(cert.lift)}};
  out["truncation_L"] = cert.truncation_L ? Json(*cert.truncation_L) : Json(nullptr);
  out["checks"] = {{"nontrivial", cert.checks.nontrivial},
                   {"in_U_m", cert.checks.in_U_m},
                   {"projects_into_Gamma_n", cert.checks.projects_into_Gamma_n}};
  return out;
}

ObstructionCertificate certificate_from_json(const Json& j) {
  ObstructionCertificate cert;
  cert.kind = certificate_kind_from_string(field<std::string>(j, "kind"));
  cert.n = field<int>(j, "n");
  cert.m = field<int>(j, "m");
  if (!j.contains("lift")) throw ValidationError("missing field \"lift\"");
  cert.lift = element_from_json(j["lift"]);
  cert.d = j.contains("d") ? field<int>(j, "d") : cert.lift.d();
  cert.parts = field<std::vector<std::vector<Point>>>(j, "parts");
  if (!j.contains("witness_perms") || !j["witness_perms"].is_array())
    throw ValidationError("missing array field \"witness_perms\"");
  for (const auto& p : j["witness_perms"]) cert.witness_perms.push_back(permutation_from_json(p));
  if (j.contains("truncation_L") && !j["truncation_L"].is_null())
    cert.truncation_L = field<std::size_t>(j, "truncation_L");
  const auto& checks = j.contains("checks") ? j["checks"] : Json::object();
  cert.checks.nontrivial = field<bool>(checks, "nontrivial");
  cert.checks.in_U_m = field<bool>(checks, "in_U_m");
  cert.checks.projects_into_Gamma_n = field<bool>(checks, "projects_into_Gamma_n");
  return cert;
}

Json to_json(const VerificationReport& report) {
  Json checks = Json::object();
  for (const auto& [name, ok] : report.checks) checks[name] = ok;
  return Json{{"passed", report.passed()}, {"checks", checks}};
}

Json to_json(const ObstructionAttempt& attempt) {
  Json out{{"certificate", attempt.certificate ? to_json(*attempt.certificate) : Json(nullptr)},
           {"failure", attempt.failure},
           {"fully_covered", attempt.fully_covered},
           {"flexible", attempt.flexible},
           {"usable", attempt.usable},
           {"threshold_count", number(attempt.threshold_count)}};
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace neretin
