#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "icdof/channel.hpp"
#include "icdof/condition_star.hpp"
#include "icdof/discrete_dist.hpp"
#include "icdof/dof.hpp"
#include "icdof/infodim.hpp"
#include "icdof/optimizer.hpp"
#include "icdof/scalar_syntax.hpp"
#include "icdof/sumset.hpp"

namespace icdof {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void schema_error(const std::string& what) { fail(ErrorCode::parse_error, what); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

/// Numbers in reports keep 12 significant digits.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace detail

// ---- input formats -------------------------------------------------------

/// Scalars are strings in the scalar syntax or JSON integers. Floating JSON
/// numbers are refused: they are not exact. So are the names pi and e, which
/// would silently become algebraically independent symbols.
inline ExactScalar scalar_from_json(const Json& j) {
  if (j.is_number_integer()) return ExactScalar(Rational(j.get<std::int64_t>()));
  if (j.is_number()) detail::schema_error("floating-point number " + j.dump() + " is not exact; quote it as a decimal string");
  if (!j.is_string()) detail::schema_error("expected a scalar string, got " + j.dump());
  ExactScalar x = parse_scalar(j.get<std::string>());
  for (const std::string& name : x.generator_names()) {
    if (name == "pi" || name == "e") {
      fail(ErrorCode::parse_error, "transcendental constant '" + name + "' cannot be represented exactly");
    }
  }
  return x;
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) detail::schema_error("floating-point number " + j.dump() + " is not exact; quote it as \"p/q\"");
  if (!j.is_string()) detail::schema_error("expected a rational string, got " + j.dump());
  return Rational::parse(j.get<std::string>());
}

inline DiscreteDist dist_from_json(const Json& j) {
  const Json& atoms = detail::field(j, "atoms");
  if (!atoms.is_array()) detail::schema_error("'atoms' must be an array");
  std::vector<Atom> out;
  for (const Json& a : atoms) out.push_back(Atom{scalar_from_json(detail::field(a, "value")), rational_from_json(detail::field(a, "prob"))});
  return DiscreteDist::from_atoms(std::move(out));
}

/// {"K": k, "entries": [[...], ...]}; "generic" allocates the generator h_i_j.
inline ChannelMatrix channel_from_json(const Json& j) {
  const Json& kj = detail::field(j, "K");
  if (!kj.is_number_integer()) detail::schema_error("'K' must be an integer");
  const int K = kj.get<int>();
  const Json& rows = detail::field(j, "entries");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(std::max(K, 0))) {
    detail::schema_error("'entries' must be a K x K array");
  }
  std::vector<ExactScalar> entries;
  for (int i = 0; i < K; ++i) {
    if (!rows[i].is_array() || rows[i].size() != static_cast<std::size_t>(K)) detail::schema_error("'entries' must be a K x K array");
    for (int j2 = 0; j2 < K; ++j2) {
      const Json& e = rows[i][j2];
      if (e.is_string() && e.get<std::string>() == "generic") {
        entries.emplace_back(channel_generator(i, j2));
      } else {
        entries.push_back(scalar_from_json(e));
      }
    }
  }
  return ChannelMatrix(K, std::move(entries));
}

inline IFSSpec ifs_from_json(const Json& j) {
  IFSSpec ifs;
  ifs.r = rational_from_json(detail::field(j, "r"));
  for (const Json& w : detail::field(j, "w")) ifs.w.push_back(scalar_from_json(w));
  for (const Json& p : detail::field(j, "probs")) ifs.probs.push_back(rational_from_json(p));
  ifs.validate();
  return ifs;
}

inline FiniteSet set_from_json(const Json& j) {
  std::vector<ExactScalar> out;
  for (const Json& e : detail::field(j, "elements")) out.push_back(scalar_from_json(e));
  return FiniteSet(std::move(out));
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::invalid_argument, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::parse_error, "'" + path + "' is not valid JSON: " + e.what());
  }
}

// ---- output formats ------------------------------------------------------

inline Json to_json(const Rational& q) { return q.str(); }
inline Json to_json(const ExactScalar& x) { return x.str(); }

/// Atoms listed in display order (rationals by value, then symbolic values by text).
inline Json to_json(const DiscreteDist& d) {
  std::vector<const Atom*> order;
  for (const Atom& a : d.atoms()) order.push_back(&a);
  std::sort(order.begin(), order.end(), [](const Atom* a, const Atom* b) { return display_before(a->value, b->value); });
  Json atoms = Json::array();
  for (const Atom* a : order) atoms.push_back({{"value", a->value.str()}, {"prob", a->prob.str()}});
  return {{"atoms", atoms}};
}

inline Json to_json(const FiniteSet& s) {
  std::vector<ExactScalar> v = s.elements();
  std::sort(v.begin(), v.end(), display_before);
  Json out = Json::array();
  for (const ExactScalar& x : v) out.push_back(x.str());
  return {{"elements", out}};
}

inline Json to_json(const ConditionStarReport& r) {
  Json j{{"status", to_string(r.status)}, {"degree", r.degree}};
  if (r.user) j["user"] = *r.user;
  if (!r.family.empty()) j["family"] = r.family;
  if (!r.witness.empty()) {
    Json w = Json::array();
    for (const WitnessTerm& t : r.witness) {
      w.push_back({{"label", t.label}, {"coefficient", t.coefficient.str()}, {"value", t.value.str()}});
    }
    j["witness"] = w;
    j["witness_vanishes"] = r.witness_vanishes();
  }
  return j;
}

inline Json to_json(const BoundReport& r) {
  Json per_user = Json::array();
  for (const UserTerm& t : r.per_user) {
    per_user.push_back({{"full_entropy", detail::round12(t.full_entropy)},
                        {"interference_entropy", detail::round12(t.interference_entropy)},
                        {"clamped", detail::round12(t.clamped)}});
  }
  Json params = Json::object();
  for (const auto& [k, v] : r.params) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, double>) {
            params[k] = detail::round12(x);
          } else {
            params[k] = x;
          }
        },
        v);
  }
  Json j{{"bound", detail::round12(r.bound)},
         {"per_user", per_user},
         {"r_log", detail::round12(r.r_log)},
         {"caveat", r.caveat},
         {"params", params}};
  if (!r.route.empty()) j["route"] = r.route;
  if (r.split_exact) j["split_exact"] = *r.split_exact;
  if (r.either_rhs) j["either_rhs"] = detail::round12(*r.either_rhs);
  if (r.floor) j["floor"] = detail::round12(*r.floor);
  if (r.closed_form) j["closed_form"] = detail::round12(*r.closed_form);
  return j;
}

inline BoundReport bound_report_from_json(const Json& j) {
  BoundReport r;
  r.bound = detail::field(j, "bound").get<double>();
  r.r_log = detail::field(j, "r_log").get<double>();
  r.caveat = detail::field(j, "caveat").get<std::string>();
  for (const Json& t : detail::field(j, "per_user")) {
    r.per_user.push_back(UserTerm{detail::field(t, "full_entropy").get<double>(),
                                  detail::field(t, "interference_entropy").get<double>(),
                                  detail::field(t, "clamped").get<double>()});
  }
  for (const auto& [k, v] : detail::field(j, "params").items()) {
    if (v.is_number_integer()) {
      r.params.emplace_back(k, v.get<std::int64_t>());
    } else if (v.is_number()) {
      r.params.emplace_back(k, v.get<double>());
    } else {
      r.params.emplace_back(k, v.get<std::string>());
    }
  }
  if (j.contains("route")) r.route = j["route"].get<std::string>();
  if (j.contains("split_exact")) r.split_exact = j["split_exact"].get<bool>();
  if (j.contains("either_rhs")) r.either_rhs = j["either_rhs"].get<double>();
  if (j.contains("floor")) r.floor = j["floor"].get<double>();
  if (j.contains("closed_form")) r.closed_form = j["closed_form"].get<double>();
  return r;
}

/// `names` labels the winning distributions, e.g. {"best_U", "best_V"}.
inline Json to_json(const OptResult& r, const std::vector<std::string>& names) {
  Json trace = Json::array();
  for (const TraceEntry& t : r.trace) {
    trace.push_back({{"restart", t.restart},
                     {"iterations", t.iterations},
                     {"evaluations", t.evaluations},
                     {"start_value", detail::round12(t.start_value)},
                     {"best_value", detail::round12(t.best_value)}});
  }
  Json j{{"best_value", detail::round12(r.best_value)},
         {"best_restart", r.best_restart},
         {"seed", r.seed},
         {"trace", trace}};
  for (std::size_t i = 0; i < r.best.size() && i < names.size(); ++i) j[names[i]] = to_json(r.best[i]);
  return j;
}

inline OptResult opt_result_from_json(const Json& j, const std::vector<std::string>& names) {
  OptResult r;
  r.best_value = detail::field(j, "best_value").get<double>();
  r.best_restart = detail::field(j, "best_restart").get<int>();
  r.seed = detail::field(j, "seed").get<std::uint64_t>();
  for (const Json& t : detail::field(j, "trace")) {
    r.trace.push_back(TraceEntry{t.at("restart").get<int>(), t.at("iterations").get<int>(),
                                 t.at("evaluations").get<int>(), t.at("start_value").get<double>(),
                                 t.at("best_value").get<double>()});
  }
  for (const std::string& n : names) {
    if (j.contains(n)) r.best.push_back(dist_from_json(j[n]));
  }
  return r;
}

inline Json to_json(const InequalityReport& r) {
  return {{"H_U", detail::round12(r.h_u)},
          {"H_V", detail::round12(r.h_v)},
          {"H_sum", detail::round12(r.h_sum)},
          {"H_diff", detail::round12(r.h_diff)},
          {"slack_recall1", detail::round12(r.recall1)},
          {"slack_recall2", detail::round12(r.recall2)},
          {"slack_sum_difference", detail::round12(r.sum_difference)},
          {"slack_combined", detail::round12(r.combined)},
          {"min_slack", detail::round12(r.min_slack())}};
}

inline Json error_json(const Error& e) {
  Json j{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (const auto* v = dynamic_cast<const ConditionViolation*>(&e)) j["witness"] = to_json(v->report())["witness"];
  return j;
}

}  // namespace icdof
