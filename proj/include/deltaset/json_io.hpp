#pragma once

// JSON views of stage logs and reports.

#include <json.hpp>

#include "deltaset/construct.hpp"
#include "deltaset/dsl.hpp"
#include "deltaset/oracle.hpp"
#include "deltaset/partition.hpp"

namespace deltaset::json_io {

using json = nlohmann::json;

/// Integers that fit in 64 bits become numbers, everything else a string.
inline json element(const Element& x) {
  if (x.is_int()) {
    const Integer& n = x.as_int();
    if (n <= Integer(INT64_MAX) && n >= Integer(INT64_MIN)) return static_cast<std::int64_t>(n);
  }
  return x.str();
}

inline json elements(const std::vector<Element>& xs) {
  json a = json::array();
  for (const Element& x : xs) a.push_back(element(x));
  return a;
}

inline json ints(const std::vector<std::int64_t>& xs) {
  json a = json::array();
  for (std::int64_t x : xs) a.push_back(x);
  return a;
}

inline json certificates(const std::vector<CertificateCheck>& cs) {
  json a = json::array();
  for (const CertificateCheck& c : cs) a.push_back({{"name", c.name}, {"ok", c.ok}});
  return a;
}

/// One JSON line of a construction stream.
inline json stage(const StageRecord& s, const std::string& kind, GroupId g) {
  json met = json::array();
  for (const auto& [z, gz] : s.met) met.push_back(json::array({element(z), element(gz)}));
  return {{"record", "stage"},
          {"kind", kind},
          {"group", std::string(group_name(g))},
          {"n", s.n},
          {"targets", elements(s.targets)},
          {"chosen", elements(s.chosen)},
          {"planted", elements(s.planted)},
          {"met", met},
          {"added", elements(s.added)},
          {"forbidden_radius", s.forbidden_radius},
          {"certificates", certificates(s.certificates)}};
}

inline json report(const ClassificationReport& r) {
  json j{{"predicate", r.predicate}, {"verdict", verdict_name(r.verdict)}, {"rule", r.rule}};
  if (r.verdict == Verdict::WindowEvidence) {
    j["radius"] = r.radius;
    j["so_far"] = r.so_far;
  }
  if (r.witness)
    j["witness"] = {{"kind", r.witness->kind},
                    {"elements", elements(r.witness->elements)},
                    {"note", r.witness->note}};
  return j;
}

inline json classification(const FullClassification& c) {
  json j{{"thin", report(c.thin.thin)},
         {"almost_thin", report(c.thin.almost_thin)},
         {"sparse", report(c.sparse)},
         {"large", report(c.large)},
         {"thick", report(c.thick)},
         {"small", report(c.small)},
         {"delta_large", report(c.delta_large)}};
  if (c.thin.k_bound) j["k_thin"] = {{"k", *c.thin.k_bound}, {"exact", c.thin.k_exact}};
  if (c.prethick1) j["prethick1"] = report(*c.prethick1);
  if (c.prethick2) j["prethick2"] = report(*c.prethick2);
  if (c.psmall) {
    j["p_small"] = report(c.psmall->p_small);
    j["almost_p_small"] = report(c.psmall->almost_p_small);
    j["weakly_p_small"] = report(c.psmall->weakly_p_small);
    if (c.psmall->m_star) j["m_star"] = *c.psmall->m_star;
  }
  return j;
}

inline json value(const dsl::Value& v, const dsl::Evaluator& ev) {
  switch (v.type) {
    case dsl::Value::Type::Set: {
      json j{{"type", "set"}, {"value", ev.render(v)}};
      j["exact"] = v.set->is_exact();
      if (!v.text.empty()) j["exactness"] = v.text;
      return j;
    }
    case dsl::Value::Type::Number: return {{"type", "number"}, {"value", ev.render(v)}};
    default: break;
  }
  if (v.report_kind == "classify") return {{"type", "classify"}, {"report", classification(*v.classification)}};
  json steps = json::array();
  for (const DeltaResult& r : v.trajectory)
    steps.push_back({{"exactness", exactness_name(r.exactness)},
                     {"rule", r.rule},
                     {"value", dsl::format_set(r.value, ev.options().radius)}});
  json j{{"type", "traj"}, {"steps", steps}};
  if (v.trajectory_stop) j["stopped"] = *v.trajectory_stop;
  return j;
}

inline json cover(const CoverReport& r) {
  json cells = json::array();
  for (const CellCover& c : r.cells) {
    json j{{"index", c.index}, {"finite", c.finite}, {"delta", dsl::format_set(c.delta, 64)}};
    j["F"] = c.F ? ints(*c.F) : json(nullptr);
    cells.push_back(j);
  }
  return {{"n", r.n},
          {"chosen", r.chosen},
          {"F", ints(r.F)},
          {"F_size", r.F.size()},
          {"verified", r.verified},
          {"bound_n", r.bound_n.str()},
          {"bound_2n", r.bound_2n.str()},
          {"bound_tower", r.bound_tower.str()},
          {"within_n", r.within_n()},
          {"cells", cells}};
}

inline json two_partition(const TwoPartitionReport& r) {
  json j{{"A", dsl::format_set(r.a, 64)},
         {"B", dsl::format_set(r.b, 64)},
         {"delta_A", dsl::format_set(r.delta_a, 64)},
         {"delta_B", dsl::format_set(r.delta_b, 64)},
         {"diff_A", dsl::format_set(r.diff_a, 64)},
         {"diff_B", dsl::format_set(r.diff_b, 64)},
         {"cond_i", r.cond_i},
         {"cond_iii", r.cond_iii},
         {"cond_iii_literal", r.cond_iii_literal},
         {"odd_order_only", r.odd_order_only}};
  if (r.witness_i) j["witness_i"] = *r.witness_i;
  if (r.witness_iii) j["witness_iii"] = *r.witness_iii;
  return j;
}

inline json meager(const MeagerReport& r) {
  json j{{"k", r.k}, {"found", r.found}, {"examined", r.examined}};
  if (r.found) {
    j["period"] = r.period;
    j["residues"] = ints(r.residues);
    j["cells"] = {dsl::format_set(r.partition.cells[0], 64), dsl::format_set(r.partition.cells[1], 64)};
    j["first"] = report(r.first);
    j["second"] = report(r.second);
  }
  return j;
}

inline json stability(const StabilityReport& r) {
  json per = json::array();
  for (std::size_t i = 0; i < r.per_radius.size(); ++i)
    per.push_back({{"radius", r.schedule.radii[i]},
                   {"threshold", r.schedule.thresholds[i]},
                   {"size", r.per_radius[i].size()}});
  return {{"core_radius", r.core_radius},
          {"stable_core", elements(r.stable_core)},
          {"escaped", elements(r.escaped)},
          {"per_radius", per}};
}

}  // namespace deltaset::json_io
