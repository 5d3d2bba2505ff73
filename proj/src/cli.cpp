#include "altcfr/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "altcfr/builders.hpp"
#include "altcfr/evaluator.hpp"
#include "altcfr/game_io.hpp"
#include "altcfr/verifier.hpp"

namespace altcfr {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_seed_range(const std::string& text, std::vector<std::uint64_t>& out) {
  auto sep = text.find("..");
  if (sep == std::string::npos) return false;
  try {
    long a = std::stol(text.substr(0, sep));
    long b = std::stol(text.substr(sep + 2));
    if (a < 0 || b < a) return false;
    for (long s = a; s <= b; ++s) out.push_back(static_cast<std::uint64_t>(s));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

Game random_game_from_spec(const std::string& spec) {
  std::istringstream in(spec.substr(std::string("random:").size()));
  std::string part;
  long fields[3];
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(in, part, ':')) {
      throw UsageError("random game spec must be random:<seed>:<depth>:<branching>");
    }
    try {
      fields[i] = std::stol(part);
    } catch (const std::exception&) {
      throw UsageError("random game spec must be random:<seed>:<depth>:<branching>");
    }
  }
  if (std::getline(in, part, ':')) {
    throw UsageError("random game spec must be random:<seed>:<depth>:<branching>");
  }
  try {
    return random_game(static_cast<std::uint64_t>(fields[0]),
                       static_cast<int>(fields[1]), static_cast<int>(fields[2]));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int print_reports_and_exit(const std::vector<TheoremReport>& reports) {
  bool all_pass = true;
  for (const TheoremReport& report : reports) {
    std::cout << report.to_string() << "\n";
    all_pass = all_pass && report.pass;
  }
  return all_pass ? kExitOk : kExitVerifyFailed;
}

std::vector<TheoremReport> with_id_prefix(std::vector<TheoremReport> reports,
                                          const std::string& prefix) {
  for (TheoremReport& report : reports) report.id = prefix + report.id;
  return reports;
}

Game verify_random_game(std::uint64_t seed) {
  return random_game(seed, 2 + static_cast<int>(seed % 2), 2);
}

int run_verify(const std::string& scope, const std::vector<std::uint64_t>& seeds,
               bool self_test) {
  std::vector<std::vector<TheoremReport>> groups;
  const bool all = scope == "all";

  if (all || scope == "rm") {
    groups.push_back(check_rm_lemmas(seeds, 200));
  }

  if (all || scope == "cfr") {
    Game kuhn = build_kuhn_poker();
    SolverConfig plus{MinimizerKind::RegretMatchingPlus, UpdateMode::Alternating,
                      Averaging::Linear, 500, 500, true};
    groups.push_back(check_cfr_improvement(kuhn, run(kuhn, plus).trace));
    for (std::uint64_t seed : seeds) {
      Game game = verify_random_game(seed);
      SolverConfig sim{MinimizerKind::RegretMatching, UpdateMode::Simultaneous,
                       Averaging::Uniform, 50, 50, true};
      SolverConfig alt{MinimizerKind::RegretMatchingPlus, UpdateMode::Alternating,
                       Averaging::Linear, 50, 50, true};
      groups.push_back(check_cfr_improvement(game, run(game, sim).trace));
      groups.push_back(check_cfr_improvement(game, run(game, alt).trace));
    }
  }

  if (all || scope == "folk") {
    Game obs1 = build_observation1_game();
    SolveTrace forced{UpdateMode::Alternating, obs1_forced_sequence(obs1, 5)};
    groups.push_back(check_folk_decomposition(obs1, forced));
    Game kuhn = build_kuhn_poker();
    SolverConfig plus{MinimizerKind::RegretMatchingPlus, UpdateMode::Alternating,
                      Averaging::Linear, 100, 100, true};
    groups.push_back(check_folk_decomposition(kuhn, run(kuhn, plus).trace));
    for (std::uint64_t seed : seeds) {
      Game game = verify_random_game(seed);
      SolverConfig config{seed % 2 == 0 ? MinimizerKind::RegretMatching
                                        : MinimizerKind::RegretMatchingPlus,
                          UpdateMode::Alternating, Averaging::Uniform, 100, 100,
                          true};
      groups.push_back(check_folk_decomposition(game, run(game, config).trace));
    }
  }

  if (all || scope == "bound") {
    SolverConfig certified{MinimizerKind::RegretMatchingPlus,
                           UpdateMode::Alternating, Averaging::Linear, 2000, 50,
                           true};
    groups.push_back(certify_run(build_kuhn_poker(), certified));
    certified.iterations = 1000;
    groups.push_back(certify_run(build_observation1_game(), certified));
    certified.iterations = 400;
    certified.stride = 20;
    for (size_t i = 0; i < seeds.size() && i < 3; ++i) {
      groups.push_back(certify_run(verify_random_game(seeds[i]), certified));
    }
  }

  if (self_test) {
    Game obs1 = build_observation1_game();
    groups.push_back(with_id_prefix(
        check_cfr_improvement(obs1, argmin_update_trace(obs1, 5)), "selftest."));
  }

  return print_reports_and_exit(merge_reports(groups));
}

int run_solve(const std::string& game_spec, const SolverConfig& config,
              const std::string& out_path) {
  Game game = resolve_game(game_spec);
  SolveResult result = run(game, config);
  if (out_path.empty()) {
    write_record_csv(std::cout, result.record);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open output file: " << out_path << "\n";
      return kExitIo;
    }
    write_record_csv(out, result.record);
  }
  return kExitOk;
}

int run_replay(long big_t, const std::string& out_path) {
  Game game = build_observation1_game();
  std::vector<Profile> profiles = obs1_forced_sequence(game, big_t);
  SolveRecord record =
      replay_forced_sequence(game, profiles, UpdateMode::Alternating);

  std::ostringstream table;
  write_record_csv(table, record);
  if (out_path.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open output file: " << out_path << "\n";
      return kExitIo;
    }
    out << table.str();
  }

  const long t = 2 * big_t;
  std::span<const Profile> span(profiles);
  std::vector<double> weights(t, 1.0);
  std::vector<BehaviorStrategy> w1, w2;
  for (long i = 1; i <= t; ++i) w1.push_back(profiles[i].strategy1);
  for (long i = 0; i < t; ++i) w2.push_back(profiles[i].strategy2);
  BehaviorStrategy avg1 = average_strategy(game, 1, w1, weights);
  BehaviorStrategy avg2 = average_strategy(game, 2, w2, weights);
  const Policy& p1 = avg1.at(infoset_index(game, "x"));
  const Policy& p2 = avg2.at(infoset_index(game, "y"));
  const SnapshotRow& last = record.rows.back();

  std::cout << "t=" << t << " avg_regret_1=" << format_value(last.avg_regret_1)
            << " avg_regret_2=" << format_value(last.avg_regret_2) << "\n";
  std::cout << "avg_strategy_1=(" << format_value(p1[0]) << ","
            << format_value(p1[1]) << ")"
            << " avg_strategy_2=(" << format_value(p2[0]) << ","
            << format_value(p2[1]) << ")\n";
  std::cout << "exploitability=" << format_value(last.exploitability) << "\n";

  bool match = std::abs(last.avg_regret_1) <= 1e-12 &&
               std::abs(last.avg_regret_2) <= 1e-12 &&
               std::abs(last.exploitability - 0.5) <= 1e-12 &&
               std::abs(p1[0] - 0.5) <= 1e-12 && std::abs(p1[1] - 0.5) <= 1e-12 &&
               std::abs(p2[0] - 0.5) <= 1e-12 && std::abs(p2[1] - 0.5) <= 1e-12;
  return match ? kExitOk : kExitVerifyFailed;
}

}  // namespace

Game resolve_game(const std::string& spec) {
  if (spec == "obs1") return build_observation1_game();
  if (spec == "kuhn") return build_kuhn_poker();
  if (spec.rfind("random:", 0) == 0) return random_game_from_spec(spec);
  return load_game_file(spec);
}

std::vector<Profile> obs1_forced_sequence(const Game& obs1_game, long big_t) {
  int x = infoset_index(obs1_game, "x");
  int y = infoset_index(obs1_game, "y");
  if (x < 0 || y < 0) {
    throw std::invalid_argument("forced sequence: game has no x/y infosets");
  }
  std::vector<Profile> profiles;
  for (long i = 0; i <= 2 * big_t; ++i) {
    std::vector<int> actions(obs1_game.infosets.size(), 0);
    actions[x] = static_cast<int>(i % 2);
    actions[y] = static_cast<int>(i % 2);
    profiles.push_back(pure_profile(obs1_game, actions));
  }
  return profiles;
}

void write_record_csv(std::ostream& os, const SolveRecord& record) {
  os << "t,expl,avg_regret_1,avg_regret_2,improvement,bound\n";
  for (const SnapshotRow& row : record.rows) {
    os << row.t << ',' << format_value(row.exploitability) << ','
       << format_value(row.avg_regret_1) << ',' << format_value(row.avg_regret_2)
       << ',' << format_value(row.improvement) << ',' << format_value(row.bound)
       << '\n';
  }
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"CFR / CFR+ solver and convergence verifier for two-player "
               "zero-sum extensive form games"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "run a solver and write a CSV log");
  std::string game_spec;
  std::string algo = "cfr+";
  std::string update = "alternating";
  std::string avg = "linear";
  long iters = 1000;
  long stride = 10;
  std::string out_path;
  solve->add_option("--game", game_spec,
                    "obs1 | kuhn | random:<seed>:<depth>:<branching> | file path")
      ->required();
  solve->add_option("--algo", algo)->check(CLI::IsMember({"cfr", "cfr+"}));
  solve->add_option("--update", update)
      ->check(CLI::IsMember({"simultaneous", "alternating"}));
  solve->add_option("--avg", avg)->check(CLI::IsMember({"uniform", "linear"}));
  solve->add_option("--iters", iters)->check(CLI::PositiveNumber);
  solve->add_option("--stride", stride)->check(CLI::PositiveNumber);
  solve->add_option("--out", out_path, "CSV output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "run the numeric property checks");
  std::string scope = "all";
  std::string seeds_text = "0..19";
  bool self_test = false;
  verify->add_option("--scope", scope)
      ->check(CLI::IsMember({"all", "rm", "cfr", "folk", "bound"}));
  verify->add_option("--seeds", seeds_text, "seed range, e.g. 0..49");
  verify->add_flag("--self-test", self_test,
                   "inject a non-regret-matching run; its checks must fail");

  auto* replay = app.add_subcommand(
      "replay-obs1", "replay the zero-regret high-exploitability sequence");
  long big_t = 5;
  std::string replay_out;
  replay->add_option("--T", big_t, "half horizon; the replay runs to t = 2T");
  replay->add_option("--out", replay_out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) {
      SolverConfig config;
      config.minimizer = algo == "cfr+" ? MinimizerKind::RegretMatchingPlus
                                        : MinimizerKind::RegretMatching;
      config.update = update == "alternating" ? UpdateMode::Alternating
                                              : UpdateMode::Simultaneous;
      config.averaging = avg == "linear" ? Averaging::Linear : Averaging::Uniform;
      config.iterations = iters;
      config.stride = stride;
      config.record_trace = false;
      return run_solve(game_spec, config, out_path);
    }
    if (verify->parsed()) {
      std::vector<std::uint64_t> seeds;
      if (!parse_seed_range(seeds_text, seeds)) {
        std::cerr << "bad --seeds range: " << seeds_text << "\n";
        return kExitUsage;
      }
      return run_verify(scope, seeds, self_test);
    }
    if (replay->parsed()) {
      if (big_t < 1) {
        std::cerr << "--T must be >= 1\n";
        return kExitUsage;
      }
      return run_replay(big_t, replay_out);
    }
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const GameParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const GameValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace altcfr
