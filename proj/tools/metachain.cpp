#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "metachain/config.hpp"
#include "metachain/errors.hpp"
#include "metachain/ising.hpp"
#include "metachain/montecarlo.hpp"
#include "metachain/report.hpp"

using namespace metachain;
using json = nlohmann::ordered_json;

namespace {

constexpr int kRegimeMismatch = 4;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// "a,b;c" -> {{a,b},{c}}
std::vector<std::vector<int>> parse_targets(const Chain& chain, const std::string& text) {
  std::vector<std::vector<int>> sets;
  std::stringstream outer(text);
  std::string group;
  while (std::getline(outer, group, ';')) {
    std::vector<int> set;
    std::stringstream inner(group);
    std::string item;
    while (std::getline(inner, item, ',')) {
      item = trim(item);
      if (!item.empty()) set.push_back(chain.index(item));
    }
    if (set.empty()) throw Error(ErrorCode::kEmptySubset, "empty target set in \"" + text + "\"");
    sets.push_back(std::move(set));
  }
  if (sets.empty()) throw Error(ErrorCode::kEmptySubset, "no target sets given");
  label_sets(chain.size(), sets);
  return sets;
}

// Accepts a decimal/scientific literal or p/q.
double parse_epsilon(const std::string& text) {
  double eps = 0;
  if (text.find('/') != std::string::npos) {
    eps = parse_rational(text).get_d();
  } else {
    std::size_t used = 0;
    try {
      eps = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size()) throw Error(ErrorCode::kParse, "cannot parse epsilon \"" + text + "\"");
  }
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::kParse, "epsilon must lie in (0, 1)");
  return eps;
}

json stats_json(const Chain& chain, const std::vector<std::vector<int>>& targets, const ExitStatistics& s) {
  json j;
  j["format"] = "metachain-exit-statistics";
  j["version"] = kReportVersion;
  j["epsilon"] = s.epsilon;
  j["seed"] = s.seed;
  j["samples"] = s.samples;
  j["completed"] = s.completed;
  j["timeouts"] = s.timeouts;
  j["mean_exit"] = s.mean_exit;
  j["cv"] = s.cv;
  json hits = json::array();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    json names = json::array();
    for (int x : targets[t]) names.push_back(chain.name(x));
    hits.push_back({{"target", names}, {"count", s.hit_counts[t]}, {"mean_exit", s.mean_exit_by_target[t]}});
  }
  j["hit_counts"] = hits;
  return j;
}

json verification_json(const IsingVerification& v) {
  const auto& m = v.model;
  json j;
  j["format"] = "metachain-ising-verification";
  j["version"] = kReportVersion;
  j["L"] = m.L;
  j["h"] = format_rational(m.h);
  j["n0"] = m.n0;
  j["in_regime"] = m.in_regime;
  j["states"] = v.states;
  j["omega_o_size"] = v.omega.size();
  j["leaves"] = v.leaves;
  j["leaves_match_omega_o"] = v.leaves_match;
  j["barrier_matches"] = v.barrier_matches;
  j["barrier_mismatches"] = v.barrier_mismatches;
  j["cardinalities_ok"] = v.cardinalities_ok;
  j["p_sums_ok"] = v.p_sums_ok;
  if (v.hierarchy) {
    j["depth_count"] = v.hierarchy->depth_count;
    json thetas = json::array();
    for (const auto& lv : v.hierarchy->levels) thetas.push_back(to_label(lv.depths.theta));
    j["theta"] = thetas;
    j["terminal_is_plus"] = v.terminal_is_plus;
  }
  j["c_h"] = format_rational(v.c_h);
  if (v.minus_one) {
    j["minus_one"] = {{"W1", v.minus_one->W1.size()},
                      {"W2", v.minus_one->W2.size()},
                      {"theta", format_rational(v.minus_one->theta)}};
  }
  json table = json::array();
  for (const auto& r : v.omega) {
    json row;
    row["sigma"] = config_name(m, r.info.config);
    row["ell"] = r.info.ell;
    row["Nr"] = r.info.Nr;
    row["Ns"] = r.info.Ns;
    row["rings"] = r.info.rings;
    row["barrier_predicted"] = format_rational(r.barrier.predicted);
    row["barrier_engine"] = format_rational(r.barrier.engine);
    row["barrier_match"] = r.barrier.match;
    if (r.W_expected) {
      row["W"] = r.W;
      row["W_expected"] = *r.W_expected;
    }
    if (r.theta) row["theta_predicted"] = format_rational(*r.theta);
    if (r.p_sum) row["p_sum"] = format_rational(*r.p_sum);
    table.push_back(row);
  }
  j["omega_o"] = table;
  j["notes"] = v.notes;
  return j;
}

HarmonicChoice parse_harmonic(const std::string& s) {
  if (s == "trace") return HarmonicChoice::kTrace;
  if (s == "network") return HarmonicChoice::kNetwork;
  return HarmonicChoice::kAuto;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  CLI::App app{"Metastable hierarchy of reversible chains with monomial rates"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  std::string model_path, report_path, dot_path, harmonic = "auto", reference;
  bool no_cross_check = false;
  std::size_t cross_check_limit = 600;
  auto* analyze = app.add_subcommand("analyze", "compute the full hierarchy of a model");
  analyze->add_option("model", model_path, "model JSON")->required()->check(CLI::ExistingFile);
  analyze->add_option("--report", report_path, "write the report JSON here (stdout if absent)");
  analyze->add_option("--dot", dot_path, "write the level diagrams in DOT");
  analyze->add_option("--harmonic", harmonic, "harmonic-function route")
      ->check(CLI::IsMember({"auto", "trace", "network"}));
  analyze->add_flag("--no-cross-check", no_cross_check, "skip the trace-rate cross-check");
  analyze->add_option("--cross-check-limit", cross_check_limit, "largest chain that is cross-checked");
  analyze->add_option("--reference", reference, "anchor state of the measure");

  int L = 3;
  std::string h_text = "4/5", emit_path, classify_path;
  auto* ising = app.add_subcommand("ising", "emit a low-temperature Glauber Ising model");
  ising->add_option("--L", L, "torus side")->required();
  ising->add_option("--h", h_text, "external field p/q")->required();
  ising->add_option("--emit", emit_path, "model JSON output")->required();
  ising->add_option("--classify-report", classify_path, "Omega_o classification JSON");

  std::string eps_text = "1e-2", start, targets_text, stats_path;
  SimulationOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo exit statistics at a finite epsilon");
  simulate->add_option("model", model_path, "model JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--epsilon", eps_text, "epsilon as a decimal or p/q");
  simulate->add_option("--start", start, "start state")->required();
  simulate->add_option("--targets", targets_text, "target sets, e.g. \"a,b;c\"")->required();
  simulate->add_option("--samples", sim.samples, "number of samples");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--max-steps", sim.max_steps, "jump cap per sample");
  simulate->add_option("--out", stats_path, "statistics JSON (stdout if absent)");

  std::string verify_path;
  bool strict = false;
  auto* verify = app.add_subcommand("verify-ising", "compare the engine with the Ising closed forms");
  verify->add_option("--L", L, "torus side")->required();
  verify->add_option("--h", h_text, "external field p/q")->required();
  verify->add_option("--out", verify_path, "verification JSON (stdout if absent)");
  verify->add_flag("--strict-regime", strict, "exit 4 when any barrier mismatches");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      const Chain chain = build_chain(parse_model(read_text_file(model_path)));
      EngineOptions opt;
      opt.harmonic = parse_harmonic(harmonic);
      opt.cross_check = !no_cross_check;
      opt.cross_check_state_limit = cross_check_limit;
      if (!reference.empty()) opt.reference = chain.index(reference);
      const auto report = full_hierarchy(chain, opt);
      const auto text = report_json(chain, report);
      if (report_path.empty())
        std::cout << text;
      else
        write_text_file(report_path, text);
      if (!dot_path.empty()) write_text_file(dot_path, report_dot(chain, report));
    } else if (*ising) {
      const auto m = make_ising(L, parse_rational(h_text));
      const Chain chain = build_ising_chain(m);
      write_text_file(emit_path, serialize_model(to_model_spec(chain)));
      if (!classify_path.empty()) {
        json rows = json::array();
        for (Config s : enumerate_omega_o(m)) {
          const auto info = classify(m, s);
          rows.push_back({{"sigma", config_name(m, s)},
                          {"ell", info.ell},
                          {"Nr", info.Nr},
                          {"Ns", info.Ns},
                          {"rings", info.rings},
                          {"barrier", format_rational(barrier_exponent(m, info))}});
        }
        json j = {{"format", "metachain-omega-o"},
                  {"version", kReportVersion},
                  {"L", m.L},
                  {"h", format_rational(m.h)},
                  {"n0", m.n0},
                  {"in_regime", m.in_regime},
                  {"omega_o", rows}};
        write_text_file(classify_path, j.dump(2) + "\n");
      }
    } else if (*simulate) {
      const Chain chain = build_chain(parse_model(read_text_file(model_path)));
      const auto targets = parse_targets(chain, targets_text);
      const int s0 = chain.index(start);
      const auto stats = simulate_exit(evaluate(chain, parse_epsilon(eps_text)), s0, targets, sim);
      const auto text = stats_json(chain, targets, stats).dump(2) + "\n";
      if (stats_path.empty())
        std::cout << text;
      else
        write_text_file(stats_path, text);
    } else if (*verify) {
      const auto v = verify_ising(L, parse_rational(h_text));
      const auto text = verification_json(v).dump(2) + "\n";
      if (verify_path.empty())
        std::cout << text;
      else
        write_text_file(verify_path, text);
      if (v.barrier_mismatches > 0) {
        for (const auto& r : v.omega)
          if (!r.barrier.match)
            std::cerr << "barrier mismatch at " << config_name(v.model, r.info.config) << ": predicted "
                      << format_rational(r.barrier.predicted) << ", engine " << format_rational(r.barrier.engine)
                      << (v.model.in_regime ? "" : " (outside the regime)") << "\n";
        if (strict) return kRegimeMismatch;
      }
    }
  } catch (const Error& e) {
    std::cerr << "metachain: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "metachain: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
