// nashcompat: command-line front end.
//
//   nashcompat solve GAME [--tolerance T] [--out FILE]
//   nashcompat score FORM R1 R2 [--weighted] [--out FILE]
//   nashcompat quiz run FORM [--weighted] [--out FILE]
//   nashcompat idd scores|zd|simulate CONFIG [--seed S] [--rounds N] [--out FILE]
//   nashcompat serve [--config FILE] [--storage DIR] [--static DIR]

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nashcompat/documents.hpp"
#include "nashcompat/equilibrium.hpp"
#include "nashcompat/http.hpp"
#include "nashcompat/idd.hpp"
#include "nashcompat/quiz.hpp"
#include "nashcompat/session.hpp"

namespace {

using namespace nashcompat;
using doc::json;

constexpr const char* kStorageEnv = "NASHCOMPAT_STORAGE";

void emit(const json& j, const std::string& out) {
  if (out.empty()) std::cout << doc::dump(j);
  else doc::write_atomically(out, doc::dump(j));
}

std::string format_vector(const std::vector<double>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << std::setprecision(10) << v[i];
  os << ")";
  return os.str();
}

int run_solve(const std::string& path, double tolerance, const std::string& out) {
  const auto d = doc::game_from_json(doc::load_file(path));
  const auto result = enumerate_equilibria_2p(d.game, tolerance);
  std::cout << result.equilibria.size() << " equilibri" << (result.equilibria.size() == 1 ? "um" : "a")
            << (result.degenerate ? " (degenerate game: vertices of equilibrium components)" : "")
            << "\n";
  json listing = doc::detail::versioned();
  listing["degenerate"] = result.degenerate;
  listing["equilibria"] = json::array();
  std::size_t n = 0;
  for (const auto& e : result.equilibria) {
    std::cout << "#" << ++n << " " << to_string(e.kind) << "\n";
    for (std::size_t i = 0; i < d.game.player_count(); ++i) {
      std::cout << "  player " << i + 1 << ": " << format_vector(e.profile.strategy(i))
                << "  support {";
      for (std::size_t k = 0; k < e.support[i].size(); ++k)
        std::cout << (k ? ", " : "") << doc::strategy_label(d, i, e.support[i][k]);
      std::cout << "}\n";
    }
    std::cout << "  payoffs: " << format_vector(expected_payoff(d.game, e.profile)) << "\n"
              << "  max deviation gain: " << e.max_deviation_gain << "\n";
    listing["equilibria"].push_back(doc::to_json(e, d));
  }
  if (!out.empty()) doc::write_atomically(out, doc::dump(listing));
  return 0;
}

ScoreReport score(const QuizForm& form, const PartnerResponse& r1, const PartnerResponse& r2,
                  bool weighted) {
  return weighted ? score_weighted(form, r1, r2) : score_uniform(form, r1, r2);
}

int report_and_summarize(const ScoreReport& r, const QuizForm& form, const std::string& out) {
  const json j = doc::to_json(r, form);
  if (out.empty()) {
    std::cout << doc::dump(j);
    std::cerr << doc::summarize(r);
  } else {
    doc::write_atomically(out, doc::dump(j));
    std::cout << doc::summarize(r);
  }
  return 0;
}

int run_score(const std::string& form_path, const std::string& r1_path, const std::string& r2_path,
              bool weighted, const std::string& out) {
  const auto form = doc::form_from_json(doc::load_file(form_path));
  const auto r1 = doc::response_from_json(doc::load_file(r1_path));
  const auto r2 = doc::response_from_json(doc::load_file(r2_path));
  return report_and_summarize(score(form, r1, r2, weighted), form, out);
}

// Reads one triple for question t; re-prompts until valid. Empty on EOF.
std::optional<Triple> ask(const Question& q, std::size_t t, std::size_t total_questions,
                          int total) {
  std::cout << "\nQuestion " << t + 1 << " of " << total_questions << ": " << q.prompt << "\n"
            << "  A: " << q.outcomes[0] << "\n"
            << "  B: " << q.outcomes[1] << "\n"
            << "  C: " << q.outcomes[2] << "\n";
  std::string line;
  while (true) {
    std::cout << "Enter a b c (adding up to " << total << "): " << std::flush;
    if (!std::getline(std::cin, line)) return std::nullopt;
    std::istringstream is(line);
    Triple tr{};
    std::string extra;
    if (!(is >> tr[0] >> tr[1] >> tr[2]) || (is >> extra)) {
      std::cout << "Please enter three whole numbers.\n";
      continue;
    }
    const auto problems = triple_problems(tr, total);
    if (problems.empty()) return tr;
    for (const auto& p : problems) std::cout << "  " << p << "\n";
  }
}

void clear_screen() { std::cout << "\033[2J\033[H" << std::flush; }

int run_quiz(const std::string& form_path, bool weighted, const std::string& out) {
  const auto form = doc::form_from_json(doc::load_file(form_path));
  std::array<PartnerResponse, 2> responses{PartnerResponse{1, {}}, PartnerResponse{2, {}}};
  for (int partner = 1; partner <= 2; ++partner) {
    clear_screen();
    std::cout << "==== Partner #" << partner << " ====\n"
              << "Answer privately. For each question split the points over outcomes A, B "
                 "and C.\n";
    if (partner == 1) std::cout << "Partner #2 should not watch the screen.\n";
    for (std::size_t t = 0; t < form.size(); ++t) {
      auto tr = ask(form.questions[t], t, form.size(), form.total_for(partner, t));
      if (!tr) {
        std::cerr << "\ninterrupted; nothing was saved\n";
        return 130;
      }
      responses[partner - 1].answers.push_back(*tr);
    }
    clear_screen();
    if (partner == 1) {
      std::cout << "==== Partner #1 is done ====\n"
                << "Hand the keyboard to partner #2 and press Enter to continue." << std::flush;
      std::string dummy;
      if (!std::getline(std::cin, dummy)) {
        std::cerr << "\ninterrupted; nothing was saved\n";
        return 130;
      }
    }
  }
  clear_screen();
  return report_and_summarize(score(form, responses[0], responses[1], weighted), form, out);
}

json stationary_json(const idd::StationaryResult& r) {
  json j = json::object();
  j["pat_score"] = r.pat;
  j["gene_score"] = r.gene;
  j["v"] = r.v;
  j["uniquely_ergodic"] = r.uniquely_ergodic;
  return j;
}

int run_idd(const std::string& which, const std::string& config_path,
            std::optional<std::uint64_t> seed, std::optional<std::uint64_t> rounds,
            const std::string& out) {
  auto cfg = doc::idd_config_from_json(doc::load_file(config_path));
  if (seed) cfg.seed = *seed;
  if (rounds) {
    if (*rounds < 1) throw ValidationError("rounds: must be at least 1");
    cfg.rounds = *rounds;
  }
  json result = doc::detail::versioned();
  result["payoffs"] = doc::to_json(cfg.payoffs);

  auto need = [](const std::optional<idd::Strategy>& s, const char* name) -> const idd::Strategy& {
    if (!s) throw ValidationError(std::string(name) + ": missing");
    return *s;
  };

  if (which == "scores") {
    const auto r = idd::long_run_scores(need(cfg.pat, "pat"), need(cfg.gene, "gene"), cfg.payoffs,
                                        cfg.initial_state);
    result["scores"] = stationary_json(r);
  } else if (which == "zd") {
    if (!cfg.target) throw ValidationError("target: missing");
    const auto eq = idd::zd_equalizer(cfg.payoffs, *cfg.target);
    result["target"] = *cfg.target;
    result["feasible"] = eq.feasible;
    if (!eq.feasible) {
      result["violated_bound"] = eq.violated_bound;
    } else {
      result["strategy"] = doc::to_json(eq.strategy);
      result["spec"] = {{"alpha", eq.spec.alpha}, {"beta", eq.spec.beta}, {"gamma", eq.spec.gamma}};
      result["beta_range"] = {eq.beta_low, eq.beta_high};
      // Verification against seeded random memory-one opponents.
      std::mt19937_64 rng(cfg.seed);
      constexpr int kOpponents = 100;
      double worst = 0.0;
      for (int i = 0; i < kOpponents; ++i) {
        const auto q = idd::random_interior_strategy(rng);
        const auto s = idd::stationary_scores(eq.strategy, q, cfg.payoffs);
        worst = std::max(worst, std::abs(s.gene - *cfg.target));
      }
      result["verification"] = {{"opponents", kOpponents},
                                {"seed", cfg.seed},
                                {"max_abs_error", worst}};
    }
  } else {
    const auto m = idd::simulate_match(need(cfg.pat, "pat"), need(cfg.gene, "gene"), cfg.payoffs,
                                       cfg.rounds, cfg.seed, cfg.initial_state);
    result["rounds"] = m.rounds;
    result["seed"] = m.seed;
    result["avg_pat"] = m.avg_pat;
    result["avg_gene"] = m.avg_gene;
    result["stderr_pat"] = m.stderr_pat;
    result["stderr_gene"] = m.stderr_gene;
    json counts = json::object();
    for (std::size_t s = 0; s < 4; ++s) counts[idd::kStateNames[s]] = m.outcome_counts[s];
    result["outcome_counts"] = counts;
  }
  emit(result, out);
  return 0;
}

int run_serve(const std::string& config_path, std::string storage, const std::string& static_dir) {
  std::string bind = "127.0.0.1";
  int port = 8080;
  double ttl_days = 30;
  if (!config_path.empty()) {
    const auto cfg = doc::load_file(config_path);
    doc::detail::check_version(cfg);
    if (cfg.contains("bind")) bind = doc::detail::get<std::string>(cfg, "bind");
    if (cfg.contains("port")) port = doc::detail::get<int>(cfg, "port");
    if (cfg.contains("ttl_days")) ttl_days = doc::detail::get<double>(cfg, "ttl_days");
    if (storage.empty() && cfg.contains("storage"))
      storage = doc::detail::get<std::string>(cfg, "storage");
  }
  if (storage.empty()) {
    if (const char* env = std::getenv(kStorageEnv)) storage = env;
  }
  if (storage.empty())
    throw ValidationError(std::string("storage: pass --storage or set ") + kStorageEnv);
  if (!(ttl_days > 0)) throw ValidationError("ttl_days: must be positive");

  service::SessionService svc(
      {storage, std::chrono::seconds(static_cast<std::int64_t>(ttl_days * 86400))});
  httplib::Server server;
  service::mount(server, svc);
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir))
    throw ValidationError("static: no such directory " + static_dir);
  if (port == 0) {
    port = server.bind_to_any_port(bind);
    if (port < 0) throw std::runtime_error("cannot bind " + bind);
    std::cout << "listening on http://" << bind << ":" << port << std::endl;
    return server.listen_after_bind() ? 0 : 1;
  }
  std::cout << "listening on http://" << bind << ":" << port << std::endl;
  return server.listen(bind, port) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium solver, compatibility-test scoring and dating-dilemma dynamics"};
  app.require_subcommand(1);

  std::string out;
  double tolerance = kCheckTolerance;
  bool weighted = false;

  std::string game_path;
  auto* solve = app.add_subcommand("solve", "Enumerate equilibria of a two-player game");
  solve->add_option("game", game_path, "Game document")->required();
  solve->add_option("--tolerance", tolerance, "Best-response tolerance")->check(CLI::NonNegativeNumber);
  solve->add_option("--out", out, "Write the equilibria listing here");

  std::string form_path, r1_path, r2_path;
  auto* score_cmd = app.add_subcommand("score", "Score two partner responses");
  score_cmd->add_option("form", form_path, "Quiz form document")->required();
  score_cmd->add_option("response1", r1_path, "Partner #1 response")->required();
  score_cmd->add_option("response2", r2_path, "Partner #2 response")->required();
  score_cmd->add_flag("--weighted", weighted, "Use per-question weights");
  score_cmd->add_option("--out", out, "Write the report document here");

  auto* quiz = app.add_subcommand("quiz", "Interactive questionnaire");
  quiz->require_subcommand(1);
  auto* quiz_run = quiz->add_subcommand("run", "Run a dual-blind session in this terminal");
  quiz_run->add_option("form", form_path, "Quiz form document")->required();
  quiz_run->add_flag("--weighted", weighted, "Use per-question weights");
  quiz_run->add_option("--out", out, "Write the report document here");

  std::string config_path;
  std::optional<std::uint64_t> seed, rounds;
  auto* idd_cmd = app.add_subcommand("idd", "Iterated dating dilemma");
  idd_cmd->require_subcommand(1);
  for (const char* name : {"scores", "zd", "simulate"}) {
    auto* sub = idd_cmd->add_subcommand(name);
    sub->add_option("config", config_path, "Dating-dilemma config document")->required();
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--rounds", rounds, "Number of rounds");
    sub->add_option("--out", out, "Write the result document here");
  }

  std::string serve_config, storage, static_dir;
  auto* serve = app.add_subcommand("serve", "Run the session service");
  serve->add_option("--config", serve_config, "Service config document (bind, port, ttl_days)");
  serve->add_option("--storage", storage, std::string("Storage directory (default $") + kStorageEnv + ")");
  serve->add_option("--static", static_dir, "Directory of web client files to serve at /");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(game_path, tolerance, out);
    if (*score_cmd) return run_score(form_path, r1_path, r2_path, weighted, out);
    if (*quiz_run) return run_quiz(form_path, weighted, out);
    if (*idd_cmd) {
      for (auto* sub : idd_cmd->get_subcommands())
        return run_idd(sub->get_name(), config_path, seed, rounds, out);
    }
    if (*serve) return run_serve(serve_config, storage, static_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
