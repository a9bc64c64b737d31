#include "bfh/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "bfh/json_io.hpp"
#include "bfh/seifert.hpp"

namespace bfh::cli {

namespace {

using json_io::json;

json closure_to_json(const braid::ClosureInfo& info) {
  json perm = json::array();
  for (int p : info.permutation) perm.push_back(p + 1);
  return json{{"components", info.components},
              {"exponent_sum", info.exponent_sum},
              {"permutation", perm}};
}

struct RepsOptions {
  repvar::SolverConfig cfg;
  bool stability_check = true;
  bool predict_composite = false;
};

json strata_summary(const std::vector<repvar::RepStratum>& strata) {
  json out = json::array();
  for (const auto& s : strata)
    out.push_back({{"kind", repvar::kind_name(s.kind)},
                   {"tangent_dim", s.tangent_dim},
                   {"sample_count", s.samples.size()}});
  return out;
}

double stratum_distance(const repvar::RepStratum& a, const repvar::RepStratum& b) {
  double best = 1e18;
  for (const auto& pa : a.samples)
    for (const auto& pb : b.samples) {
      if (pa.vectors.size() != pb.vectors.size()) return 1e18;
      double d = 0;
      for (size_t i = 0; i < pa.vectors.size(); ++i)
        d = std::max(d, (pa.vectors[i] - pb.vectors[i]).lpNorm<Eigen::Infinity>());
      best = std::min(best, d);
    }
  return best;
}

/// Match predicted strata against directly enumerated ones; returns the list
/// of discrepancies (empty on a perfect match).
json diff_strata(const std::vector<repvar::RepStratum>& predicted,
                 const std::vector<repvar::RepStratum>& direct) {
  json diff = json::array();
  std::vector<bool> taken(direct.size(), false);
  for (const auto& p : predicted) {
    int found = -1;
    double best = 1e18;
    for (size_t i = 0; i < direct.size(); ++i) {
      if (taken[i]) continue;
      if (direct[i].kind != p.kind || direct[i].tangent_dim != p.tangent_dim) continue;
      double d = stratum_distance(p, direct[i]);
      if (d < best) {
        best = d;
        found = static_cast<int>(i);
      }
    }
    double tol = p.kind == repvar::StratumKind::isolated ? 1e-4 : 0.35;
    if (found < 0 || best > tol) {
      diff.push_back({{"missing_in_direct", repvar::kind_name(p.kind)},
                      {"tangent_dim", p.tangent_dim},
                      {"nearest_distance", found < 0 ? -1.0 : best}});
      continue;
    }
    taken[static_cast<size_t>(found)] = true;
  }
  for (size_t i = 0; i < direct.size(); ++i)
    if (!taken[i])
      diff.push_back({{"unpredicted", repvar::kind_name(direct[i].kind)},
                      {"tangent_dim", direct[i].tangent_dim}});
  return diff;
}

int cmd_reps(const std::vector<std::string>& words, const RepsOptions& opt, std::ostream& out,
             std::ostream& err) {
  json report;
  report["schema_version"] = json_io::kSchemaVersion;
  report["provenance"] = {{"seed", opt.cfg.seed},
                          {"restarts", opt.cfg.restarts},
                          {"tol", opt.cfg.tol},
                          {"rank_tol", opt.cfg.rank_tol}};
  if (opt.predict_composite) {
    braid::BraidWord b1 = braid::parse(words.at(0));
    braid::BraidWord b2 = braid::parse(words.at(1));
    braid::BraidWord sum = braid::connected_sum(b1, b2);
    auto s1 = repvar::find_strata(b1, opt.cfg);
    auto s2 = repvar::find_strata(b2, opt.cfg);
    auto predicted = repvar::compose_strata(s1, s2);
    auto direct = repvar::find_strata(sum, opt.cfg);
    report["braid"] = braid::print(sum);
    report["strata"] = json_io::strata_to_json(direct);
    report["predicted"] = strata_summary(predicted);
    report["diff"] = diff_strata(predicted, direct);
    out << report.dump(2) << "\n";
    return kOk;
  }
  braid::BraidWord b = braid::parse(words.at(0));
  auto strata = repvar::find_strata(b, opt.cfg);
  if (opt.stability_check) {
    repvar::SolverConfig other = opt.cfg;
    other.seed = opt.cfg.seed + 1;
    auto again = repvar::find_strata(b, other);
    auto shape = [](const std::vector<repvar::RepStratum>& ss) {
      std::multiset<std::pair<int, int>> m;
      for (const auto& s : ss) m.insert({static_cast<int>(s.kind), s.tangent_dim});
      return m;
    };
    if (shape(strata) != shape(again)) {
      err << "solver instability: stratum counts differ between seeds " << opt.cfg.seed << " and "
          << other.seed << "\n";
      return kInstability;
    }
  }
  report["braid"] = braid::print(b);
  report["strata"] = json_io::strata_to_json(strata);
  out << report.dump(2) << "\n";
  return kOk;
}

int cmd_floer(const std::vector<std::string>& files, const std::string& r_text,
              const std::string& d2_file, std::ostream& out) {
  exact::Rat r = r_text.empty() ? exact::Rat(0) : exact::Rat::from_string(r_text);
  json report;
  report["schema_version"] = json_io::kSchemaVersion;
  if (files.size() == 1) {
    if (!d2_file.empty())
      throw std::invalid_argument("--d2 applies to composite runs (two packages)");
    floer::KnotFloerData k = json_io::load_knot_data_file(files[0]);
    floer::SpectralRun run = floer::deck_spectral(k, r);
    report["mode"] = "single";
    report["knot"] = k.name;
    report["window_r"] = r.str();
    report["spectral"] = json_io::run_to_json(run);
    report["identities"] = json_io::identities_to_json(floer::check_identities(k, run));
    out << report.dump(2) << "\n";
    return kOk;
  }
  floer::KnotFloerData k1 = json_io::load_knot_data_file(files[0]);
  floer::KnotFloerData k2 = json_io::load_knot_data_file(files[1]);
  floer::CompositeFloerData c = floer::compose(k1, k2);
  std::optional<linalg::IntMat> d2;
  if (!d2_file.empty()) {
    std::ifstream in(d2_file);
    if (!in) throw json_io::SchemaError("cannot open " + d2_file);
    json doc = json::parse(in, nullptr, true, true);
    d2 = json_io::matrix_from_json(doc.at("d2"), c.size(), c.size());
  }
  floer::SpectralRun run = floer::stratum_spectral(c, d2 ? &*d2 : nullptr);
  report["mode"] = "composite";
  report["knots"] = {k1.name, k2.name};
  json gens = json::array();
  for (const auto& g : c.generators)
    gens.push_back({{"id", g.id}, {"maslov", g.maslov}});
  report["composite"] = {{"chern_N", c.chern_n},
                         {"alpha", c.alpha.str()},
                         {"generator_count", c.size()},
                         {"generators", std::move(gens)}};
  if (auto b = c.braid()) report["composite"]["braid"] = braid::print(*b);
  report["spectral"] = json_io::run_to_json(run);
  report["collapsed_at"] = run.converged_at;
  report["identities"] = json_io::identities_to_json(floer::check_identities(c, run));
  out << report.dump(2) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"symplectic Floer homology of knots presented as braid closures"};
  app.require_subcommand(1);

  auto* braid_cmd = app.add_subcommand("braid", "braid word operations");
  braid_cmd->require_subcommand(1);
  std::string w1, w2;
  bool reduce = false;
  auto* parse_cmd = braid_cmd->add_subcommand("parse", "parse and reprint a braid word");
  parse_cmd->add_option("word", w1)->required();
  auto* sum_cmd = braid_cmd->add_subcommand("sum", "connected sum of two braid closures");
  sum_cmd->add_option("left", w1)->required();
  sum_cmd->add_option("right", w2)->required();
  auto* conj_cmd = braid_cmd->add_subcommand("conjugate", "conjugate: x^-1 b x");
  conj_cmd->add_option("word", w1)->required();
  conj_cmd->add_option("by", w2)->required();
  conj_cmd->add_flag("--reduce", reduce, "freely reduce the result");
  auto* stab_cmd = braid_cmd->add_subcommand("stabilize", "append sigma_n on one more strand");
  stab_cmd->add_option("word", w1)->required();
  auto* clos_cmd = braid_cmd->add_subcommand("closure", "closure permutation and component count");
  clos_cmd->add_option("word", w1)->required();

  std::string inv_word;
  auto* inv_cmd = app.add_subcommand("invariants", "signature and determinant of the closure");
  inv_cmd->add_option("word", inv_word)->required();

  auto* reps_cmd =
      app.add_subcommand("reps", "enumerate irreducible traceless representation strata");
  std::vector<std::string> reps_words;
  RepsOptions ropt;
  reps_cmd->add_option("word", reps_words, "braid word (two words with --predict-composite)")
      ->required();
  reps_cmd->add_option("--seed", ropt.cfg.seed);
  reps_cmd->add_option("--restarts", ropt.cfg.restarts);
  reps_cmd->add_option("--tol", ropt.cfg.tol);
  reps_cmd->add_option("--rank-tol", ropt.cfg.rank_tol);
  bool no_stability = false;
  reps_cmd->add_flag("--no-stability-check", no_stability);
  reps_cmd->add_flag("--predict-composite", ropt.predict_composite,
                     "diff the composed prediction against direct enumeration");

  auto* floer_cmd = app.add_subcommand("floer", "spectral sequences of knot data packages");
  std::vector<std::string> files;
  std::string r_text, d2_file;
  floer_cmd->add_option("package", files, "one or two knot data JSON files")
      ->required()
      ->expected(1, 2);
  floer_cmd->add_option("--r", r_text, "window cut as a rational, default 0");
  floer_cmd->add_option("--d2", d2_file, "JSON file with an optional d2 matrix");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  try {
    if (parse_cmd->parsed()) {
      out << braid::print(braid::parse(w1)) << "\n";
      return kOk;
    }
    if (sum_cmd->parsed()) {
      out << braid::print(braid::connected_sum(braid::parse(w1), braid::parse(w2))) << "\n";
      return kOk;
    }
    if (conj_cmd->parsed()) {
      braid::BraidWord r = braid::markov_conjugate(braid::parse(w1), braid::parse(w2));
      if (reduce) r = braid::free_reduce(r);
      out << braid::print(r) << "\n";
      return kOk;
    }
    if (stab_cmd->parsed()) {
      out << braid::print(braid::markov_stabilize(braid::parse(w1))) << "\n";
      return kOk;
    }
    if (clos_cmd->parsed()) {
      out << closure_to_json(braid::closure_info(braid::parse(w1))).dump(2) << "\n";
      return kOk;
    }
    if (inv_cmd->parsed()) {
      braid::BraidWord b = braid::parse(inv_word);
      if (!braid::closure_is_knot(b)) {
        err << "error: closure is not a knot (" << braid::closure_info(b).components
            << " components)\n";
        return kSemanticError;
      }
      json res{{"signature", seifert::signature(b)},
               {"determinant", seifert::determinant(b).to_int64()}};
      out << res.dump(2) << "\n";
      return kOk;
    }
    if (reps_cmd->parsed()) {
      ropt.stability_check = !no_stability;
      if (ropt.predict_composite && reps_words.size() != 2) {
        err << "error: --predict-composite needs exactly two braid words\n";
        return kParseError;
      }
      if (!ropt.predict_composite && reps_words.size() != 1) {
        err << "error: reps takes one braid word\n";
        return kParseError;
      }
      return cmd_reps(reps_words, ropt, out, err);
    }
    if (floer_cmd->parsed()) return cmd_floer(files, r_text, d2_file, out);
  } catch (const braid::ParseError& e) {
    err << "parse error at position " << e.position << ": " << e.what() << "\n";
    return kParseError;
  } catch (const floer::InvariantViolation& e) {
    err << "data invariant violated (" << e.law << "): " << e.what() << "\n";
    return kDataInvariant;
  } catch (const json_io::SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kDataInvariant;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kSemanticError;
  }
  err << "error: no subcommand\n";
  return kParseError;
}

}  // namespace bfh::cli
