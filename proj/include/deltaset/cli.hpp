#pragma once

// Command-line front end. run() returns the exit code: 0 success, 1 a check
// failed, 2 usage, parse or type error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "deltaset/json_io.hpp"

namespace deltaset::cli {

enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

struct Globals {
  std::string group = "Z";
  bool json = false;
  std::uint64_t seed = 1;
  std::size_t stages = 10;
  std::vector<std::uint64_t> radii;
  std::vector<std::size_t> thresholds;

  GroupId group_id() const { return group == "F2" ? GroupId::FreeF2 : GroupId::IntegersZ; }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

using json = nlohmann::json;

inline SymbolicSet parse_set(const std::string& text, GroupId g) {
  dsl::Evaluator ev({g, 0});
  return ev.eval_set(*dsl::parse(text));
}

inline std::vector<Element> parse_list(const std::string& text, GroupId g) {
  std::vector<Element> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    out.push_back(parse_element(g, item));
  }
  return out;
}

inline OracleSchedule schedule(const Globals& gl) {
  OracleSchedule s = OracleSchedule::for_group(gl.group_id());
  if (!gl.radii.empty()) {
    s.radii = gl.radii;
    if (gl.thresholds.empty()) {
      s.thresholds.clear();
      for (std::size_t i = 0; i < s.radii.size(); ++i) s.thresholds.push_back(3 + i);
    }
  }
  if (!gl.thresholds.empty()) s.thresholds = gl.thresholds;
  s.validate();
  return s;
}

// Random EP subset of Z: period <= 24, cutoff <= 32.
inline EPSet random_ep(std::mt19937_64& rng) {
  std::int64_t p = 1 + static_cast<std::int64_t>(rng() % 24);
  std::int64_t n0 = static_cast<std::int64_t>(rng() % 33);
  std::vector<bool> pos(p), neg(p);
  for (std::int64_t r = 0; r < p; ++r) {
    pos[r] = rng() % 2;
    neg[r] = rng() % 2;
  }
  std::vector<std::int64_t> block;
  for (std::int64_t x = -n0; x <= n0; ++x)
    if (rng() % 2) block.push_back(x);
  return EPSet(p, pos, neg, n0, block);
}

inline int emit_construction(std::ostream& out, const Construction& c, bool verify) {
  bool ok = true;
  for (const StageRecord& s : c.log.stages) {
    out << json_io::stage(s, c.log.kind, c.log.group).dump() << '\n';
    ok = ok && s.passed();
  }
  json summary{{"record", "summary"},
               {"kind", c.log.kind},
               {"group", std::string(group_name(c.log.group))},
               {"stages", c.log.stages.size()}};
  json failures = json::array();
  if (verify) {
    VerificationReport v = verify_construction(c.log);
    ok = ok && v.ok;
    for (const std::string& f : v.failures) failures.push_back(f);
  }
  summary["verified"] = verify;
  summary["failures"] = failures;
  summary["passed"] = ok;
  out << summary.dump() << '\n';
  return ok ? kOk : kCheckFailed;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using detail::json;
  Globals gl;
  CLI::App app{"Exact engine for combinatorial derivations on Z and F2", "deltaset-cli"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--group", gl.group, "Ambient group")->check(CLI::IsMember({"Z", "F2"}));
  app.add_flag("--json", gl.json, "JSON output");
  app.add_option("--seed", gl.seed, "Seed for randomized corpora");
  app.add_option("--stages", gl.stages, "Construction stages")->check(CLI::Range(1, 100000));
  app.add_option("--radii", gl.radii, "Oracle radii, increasing");
  app.add_option("--thresholds", gl.thresholds, "Oracle thresholds, one per radius");

  std::string expr;
  std::uint64_t radius = 0;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a set expression");
  eval_cmd->add_option("expr", expr, "Expression")->required();
  eval_cmd->add_option("--radius", radius, "Window radius for stream output");

  auto* classify_cmd = app.add_subcommand("classify", "Classify a set");
  classify_cmd->add_option("expr", expr, "Expression")->required();

  auto* construct_cmd = app.add_subcommand("construct", "Run a construction, JSON lines per stage");
  construct_cmd->require_subcommand(1);
  std::string target, source;
  bool sparse = false, meet = false;
  auto* inverse_cmd = construct_cmd->add_subcommand("inverse", "X with Δ(X) = target");
  inverse_cmd->add_option("--target", target, "Symmetric target containing e")->required();
  inverse_cmd->add_option("--source", source, "Draw new elements from this set");
  inverse_cmd->add_flag("--sparse", sparse, "Sparse variant");
  inverse_cmd->add_flag("--meet", meet, "Meet every translate");
  std::string seq;
  unsigned powers = 0;
  std::size_t terms = 40;
  auto* fp_cmd = construct_cmd->add_subcommand("fp", "X inside FP(seq) with Δ(X) = {e} ∪ FP ∪ FP⁻¹");
  auto* seq_opt = fp_cmd->add_option("--seq", seq, "Comma separated sequence");
  fp_cmd->add_option("--powers", powers, "Use base^0, base^1, ...")->excludes(seq_opt)->check(CLI::Range(2, 16));
  fp_cmd->add_option("--terms", terms, "Sequence length with --powers")->check(CLI::Range(1, 62));
  std::string kind = "Tr6", base;
  std::size_t tn = 3;
  auto* traj_cmd = construct_cmd->add_subcommand("trajectory", "Realize a Δ-trajectory");
  traj_cmd->add_option("--kind", kind, "Tr1..Tr6")
      ->check(CLI::IsMember({"Tr1", "Tr2", "Tr3", "Tr4", "Tr5", "Tr6"}));
  traj_cmd->add_option("--n", tn, "Period or chain length")->check(CLI::Range(1, 16));
  traj_cmd->add_option("--base", base, "Given set X_0 (Tr1)");

  auto* partition_cmd = app.add_subcommand("partition", "Finite partitions of Z");
  partition_cmd->require_subcommand(1);
  std::vector<std::string> cells;
  auto* cover_cmd = partition_cmd->add_subcommand("cover", "Least F with Z = F + Δ(A_i)");
  cover_cmd->add_option("--cells", cells, "Cell expressions")->required();
  std::string set_expr;
  auto* check2_cmd = partition_cmd->add_subcommand("check2", "Two-cell conditions for A and its complement");
  check2_cmd->add_option("--set", set_expr, "The cell A")->required();
  std::size_t k = 2;
  std::int64_t max_period = 12;
  auto* meager_cmd = partition_cmd->add_subcommand("meager", "First 2-partition with no k-prethick cell");
  meager_cmd->add_option("--k", k, "Number of shifts")->check(CLI::Range(1, 16));
  meager_cmd->add_option("--max-period", max_period, "Largest period searched")->check(CLI::Range(1, 20));
  int max_m = 8, min_n = 2, max_n = 4;
  std::string csv;
  auto* survey_cmd = partition_cmd->add_subcommand("survey", "All residue partitions, |F| against the bounds");
  survey_cmd->add_option("--max-m", max_m, "Largest modulus")->check(CLI::Range(1, 10));
  survey_cmd->add_option("--min-n", min_n, "Fewest cells")->check(CLI::Range(1, 10));
  survey_cmd->add_option("--max-n", max_n, "Most cells")->check(CLI::Range(1, 10));
  survey_cmd->add_option("--csv", csv, "Write rows to this file");

  std::size_t random_count = 0;
  auto* oracle_cmd = app.add_subcommand("check-oracle", "Oracle stable core against exact Δ");
  oracle_cmd->add_option("expr", expr, "Expression");
  oracle_cmd->add_option("--random", random_count, "Check this many random EP sets (uses --seed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  const GroupId g = gl.group_id();
  try {
    if (*eval_cmd || *classify_cmd) {
      dsl::Evaluator ev({g, radius});
      dsl::NodePtr ast = dsl::parse(expr);
      if (*classify_cmd) ast = dsl::parse("classify(" + dsl::print(*ast) + ")");
      dsl::Value v = ev.eval(*ast);
      if (gl.json)
        out << json{{"expr", dsl::print(*ast)}, {"result", json_io::value(v, ev)}}.dump() << '\n';
      else
        out << ev.render(v) << '\n';
      return kOk;
    }

    if (*inverse_cmd) {
      SymbolicSet t = detail::parse_set(target, g);
      ConstructOptions opts;
      if (!source.empty()) opts.source = detail::parse_set(source, g);
      opts.sparse = sparse;
      opts.meet_all_translates = meet;
      return detail::emit_construction(out, inverse_construct(t, gl.stages, opts), true);
    }

    if (*fp_cmd) {
      std::vector<Element> xs;
      if (powers) {
        if (g != GroupId::IntegersZ) throw UsageError("--powers needs --group Z");
        Integer v = 1;
        for (std::size_t i = 0; i < terms; ++i, v *= powers) xs.push_back(Element(v));
      } else {
        if (seq.empty()) throw UsageError("construct fp needs --seq or --powers");
        xs = detail::parse_list(seq, g);
      }
      return detail::emit_construction(out, fp_delta_witness(xs, gl.stages), false);
    }

    if (*traj_cmd) {
      std::optional<SymbolicSet> b;
      if (!base.empty()) b = detail::parse_set(base, g);
      TrajectoryBundle tb = realize_trajectory(parse_trajectory_kind(kind), tn, gl.stages, g, b);
      for (std::size_t i = 0; i < tb.logs.size(); ++i)
        for (const StageRecord& s : tb.logs[i].stages) {
          json line = json_io::stage(s, tb.logs[i].kind, g);
          line["chain"] = i < tb.labels.size() ? tb.labels[i] : std::to_string(i);
          out << line.dump() << '\n';
        }
      json summary{{"record", "summary"},
                   {"kind", trajectory_name(tb.kind)},
                   {"group", std::string(group_name(g))},
                   {"stages", gl.stages},
                   {"chains", tb.labels},
                   {"certificates", json_io::certificates(tb.certificates)},
                   {"verified", false},
                   {"failures", json::array()},
                   {"passed", tb.passed()}};
      if (tb.non_subgroup_witness)
        summary["non_subgroup_witness"] = {json_io::element(tb.non_subgroup_witness->first),
                                           json_io::element(tb.non_subgroup_witness->second)};
      out << summary.dump() << '\n';
      return tb.passed() ? kOk : kCheckFailed;
    }

    if (*cover_cmd) {
      PartitionSpec spec;
      for (const std::string& c : cells) spec.cells.push_back(detail::parse_set(c, g));
      CoverReport r = delta_cover(spec);
      if (gl.json) {
        out << json_io::cover(r).dump() << '\n';
      } else {
        out << "|F|=" << r.F.size() << " F=" << json_io::ints(r.F).dump() << " cell=" << r.chosen
            << " verified=" << (r.verified ? "yes" : "no") << " bound_n=" << r.bound_n
            << " bound_2n=" << r.bound_2n << " bound_tower=" << r.bound_tower << '\n';
      }
      return r.verified && r.within_n() ? kOk : kCheckFailed;
    }

    if (*check2_cmd) {
      TwoPartitionReport r = two_partition_check(detail::parse_set(set_expr, g));
      json j = json_io::two_partition(r);
      if (gl.json) {
        out << j.dump() << '\n';
      } else {
        for (const char* key : {"A", "B", "delta_A", "delta_B", "diff_A", "diff_B"})
          out << key << ": " << j[key].get<std::string>() << '\n';
        out << "(i) Z = AA^-1 or Z = BB^-1: " << (r.cond_i ? "holds" : "fails") << '\n';
        out << "(iii) Z = Δ(A) or Z = Δ(B): " << (r.cond_iii ? "holds" : "fails") << '\n';
        if (r.witness_iii) out << "missing from Δ(A) ∪ Δ(B): " << *r.witness_iii << '\n';
      }
      return kOk;
    }

    if (*meager_cmd) {
      MeagerReport r = meager_search(k, 2, max_period);
      if (gl.json) {
        out << json_io::meager(r).dump() << '\n';
      } else if (r.found) {
        out << "k=" << k << " period=" << r.period << " cells: "
            << dsl::format_set(r.partition.cells[0], 64) << " ; "
            << dsl::format_set(r.partition.cells[1], 64) << '\n';
      } else {
        out << "k=" << k << " none up to period " << max_period << '\n';
      }
      return r.found ? kOk : kCheckFailed;
    }

    if (*survey_cmd) {
      std::vector<BoundRow> rows = bound_survey(max_m, min_n, max_n);
      std::size_t over = 0, unverified = 0;
      for (const BoundRow& r : rows) {
        over += Integer(r.f_size) > r.bound_n;
        unverified += !r.verified;
      }
      if (!csv.empty()) {
        std::ofstream f(csv);
        if (!f) throw UsageError("cannot write " + csv);
        f << bound_csv_header() << '\n';
        for (const BoundRow& r : rows) f << bound_csv_row(r) << '\n';
      }
      out << json{{"rows", rows.size()}, {"over_n", over}, {"unverified", unverified}}.dump() << '\n';
      return over == 0 && unverified == 0 ? kOk : kCheckFailed;
    }

    if (*oracle_cmd) {
      if (g != GroupId::IntegersZ) throw UsageError("check-oracle compares against exact Δ over Z");
      if (expr.empty() == (random_count == 0))
        throw UsageError("check-oracle needs exactly one of an expression or --random");
      OracleSchedule sched = detail::schedule(gl);
      std::vector<SymbolicSet> sets;
      if (random_count) {
        std::mt19937_64 rng(gl.seed);
        for (std::size_t i = 0; i < random_count; ++i) sets.push_back(detail::random_ep(rng));
      } else {
        sets.push_back(detail::parse_set(expr, g));
      }
      std::size_t bad = 0;
      for (const SymbolicSet& s : sets) {
        StabilityReport rep = stability_report(s, sched);
        DeltaResult d = delta(s);
        bool exact = d.exactness == Exactness::Exact;
        bool agree = exact && rep.stable_core == window(d.value, rep.core_radius);
        bad += !agree;
        if (gl.json) {
          json j = json_io::stability(rep);
          j["set"] = dsl::format_set(s, 64);
          j["exact_delta"] = exact ? json(dsl::format_set(d.value, 64)) : json(nullptr);
          j["agree"] = agree;
          out << j.dump() << '\n';
        } else {
          out << dsl::format_set(s, 64) << ": " << (agree ? "agree" : "DISAGREE") << '\n';
        }
      }
      return bad ? kCheckFailed : kOk;
    }
  } catch (const dsl::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const dsl::EvalError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace deltaset::cli
