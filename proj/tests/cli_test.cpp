#include <gtest/gtest.h>

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "nashcompat/http.hpp"

namespace nashcompat {
namespace {

namespace fs = std::filesystem;
const std::string kCli = NASHCOMPAT_CLI;
const std::string kData = NASHCOMPAT_DATA_DIR;

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is merged when `merge` is set.
Run run(const std::string& args, bool merge = true, const std::string& input = "") {
  std::string cmd = kCli + " " + args;
  if (!input.empty()) {
    const fs::path in = fs::temp_directory_path() / ("nashcompat-cli-in-" + std::to_string(::getpid()));
    std::ofstream(in) << input;
    cmd += " < " + in.string();
  } else {
    cmd += " < /dev/null";
  }
  if (merge) cmd += " 2>&1";
  else cmd += " 2>/dev/null";
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& rel) { return kData + "/" + rel; }

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("nashcompat-cli-" + std::to_string(::getpid()) + "-" + name);
}

TEST(Cli, SolveFilmGameListsThreeEquilibria) {
  const auto out = temp_file("film.json");
  const auto r = run("solve " + data("games/film_v1.json") + " --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("3 equilibria"), std::string::npos) << r.out;
  const auto listing = doc::load_file(out);
  EXPECT_EQ(listing["equilibria"].size(), 3u);
  EXPECT_EQ(listing["degenerate"], false);
  fs::remove(out);
}

TEST(Cli, SolveMyWayIsUnique) {
  const auto r = run("solve " + data("games/my_way.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1 equilibrium"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("{M}"), std::string::npos) << r.out;
}

TEST(Cli, MalformedGameNamesTheField) {
  const auto bad = temp_file("bad-game.json");
  std::ofstream(bad) << R"({"schema_version": 1, "players": 2, "payoffs": []})";
  const auto r = run("solve " + bad.string());
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("strategy_counts"), std::string::npos) << r.out;
  EXPECT_NE(run("solve /nonexistent.json").code, 0);
  fs::remove(bad);
}

TEST(Cli, ScoreWritesReportAndSummary) {
  const auto out = temp_file("report.json");
  const auto r = run("score " + data("forms/default.json") + " " + data("responses/all_a_partner1.json") + " " +
                     data("responses/all_a_partner2.json") + " --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("balanced"), std::string::npos) << r.out;
  const auto rep = doc::load_file(out);
  EXPECT_EQ(rep["K"], 200.0);
  EXPECT_EQ(rep["K_max"], 200.0);
  fs::remove(out);

  // Without --out the document goes to stdout alone.
  const auto s = run("score " + data("forms/default.json") + " " + data("responses/all_a_partner1.json") + " " +
                         data("responses/all_c_partner2.json"),
                     false);
  EXPECT_EQ(doc::parse_text(s.out)["verdict"], "Partner1Dominant");
}

TEST(Cli, WeightedScoring) {
  const auto s = run("score " + data("forms/weighted_example.json") + " " + data("responses/weighted_partner1.json") +
                         " " + data("responses/weighted_partner2.json") + " --weighted",
                     false);
  const auto rep = doc::parse_text(s.out);
  EXPECT_EQ(rep["mode"], "weighted");
  EXPECT_DOUBLE_EQ(rep["K1"].get<double>(), 0.0);
  const auto m = run("score " + data("forms/weighted_example.json") + " " +
                         data("responses/weighted_max_partner1.json") + " " +
                         data("responses/weighted_max_partner2.json") + " --weighted",
                     false);
  EXPECT_EQ(doc::parse_text(m.out)["K"], 4.0);
  // Mismatched totals need --weighted.
  const auto u = run("score " + data("forms/weighted_example.json") + " " + data("responses/weighted_partner1.json") +
                     " " + data("responses/weighted_partner2.json"));
  EXPECT_NE(u.code, 0);
  EXPECT_NE(u.out.find("weighted"), std::string::npos) << u.out;
}

TEST(Cli, ScoreRejectsMismatchedQuestionCount) {
  const auto r = run("score " + data("forms/weighted_example.json") + " " + data("responses/all_a_partner1.json") +
                     " " + data("responses/all_a_partner2.json") + " --weighted");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("answers"), std::string::npos) << r.out;
}

TEST(Cli, InteractiveQuizRePromptsAndScores) {
  std::string input = "4 4 4\n10 0 0\n";
  for (int i = 1; i < 10; ++i) input += "10 0 0\n";
  input += "\n";
  for (int i = 0; i < 10; ++i) input += "0 0 10\n";
  const auto out = temp_file("quiz.json");
  const auto r = run("quiz run " + data("forms/default.json") + " --out " + out.string(), true, input);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("must add up to 10"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Hand the keyboard to partner #2"), std::string::npos);
  const auto rep = doc::load_file(out);
  EXPECT_EQ(rep["P1"], 100.0);
  fs::remove(out);
}

TEST(Cli, InterruptedQuizSavesNothing) {
  const auto out = temp_file("quiz-interrupted.json");
  const auto r = run("quiz run " + data("forms/default.json") + " --out " + out.string(), true, "10 0 0\n");
  EXPECT_EQ(r.code, 130);
  EXPECT_NE(r.out.find("nothing was saved"), std::string::npos);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, IddScores) {
  const auto r = run("idd scores " + data("idd/wsls_vs_alld.json"), false);
  EXPECT_EQ(r.code, 0);
  const auto j = doc::parse_text(r.out);
  EXPECT_NEAR(j["scores"]["pat_score"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["scores"]["gene_score"].get<double>(), 3.0, 1e-12);
}

TEST(Cli, IddZeroDeterminant) {
  const auto ok = doc::parse_text(run("idd zd " + data("idd/zd_target_2.json"), false).out);
  EXPECT_EQ(ok["feasible"], true);
  EXPECT_LT(ok["verification"]["max_abs_error"].get<double>(), 1e-6);
  const auto hi = run("idd zd " + data("idd/zd_target_4.json"), false);
  EXPECT_EQ(hi.code, 0);
  EXPECT_EQ(doc::parse_text(hi.out)["feasible"], false);
  EXPECT_EQ(doc::parse_text(run("idd zd " + data("idd/zd_target_0_5.json"), false).out)["feasible"], false);
}

TEST(Cli, IddSimulateIsSeeded) {
  const std::string cmd = "idd simulate " + data("idd/equalizer_vs_tft.json") + " --rounds 200000";
  const auto a = run(cmd + " --seed 5", false), b = run(cmd + " --seed 5", false);
  EXPECT_EQ(a.out, b.out);
  const auto j = doc::parse_text(a.out);
  EXPECT_NEAR(j["avg_gene"].get<double>(), 2.0, 0.05);
  EXPECT_NE(run("idd simulate " + data("idd/zd_target_2.json")).code, 0);
}

// Starts `serve` on an ephemeral port; returns the pid and the port.
std::pair<pid_t, int> start_server(const fs::path& storage) {
  int fds[2];
  if (::pipe(fds) != 0) return {-1, -1};
  const pid_t pid = ::fork();
  if (pid == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    const auto cfg = storage.string() + ".serve.json";
    std::ofstream(cfg) << R"({"schema_version": 1, "bind": "127.0.0.1", "port": 0})";
    ::execl(kCli.c_str(), kCli.c_str(), "serve", "--config", cfg.c_str(), "--storage", storage.c_str(),
            static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(fds[1]);
  std::string line;
  char c;
  while (::read(fds[0], &c, 1) == 1 && c != '\n') line += c;
  ::close(fds[0]);
  const auto colon = line.rfind(':');
  if (line.rfind("listening on", 0) != 0 || colon == std::string::npos) return {pid, -1};
  return {pid, std::stoi(line.substr(colon + 1))};
}

TEST(Cli, ServeSurvivesAKillBetweenSubmissions) {
  const auto storage = temp_file("serve-storage");
  fs::remove_all(storage);
  auto [pid, port] = start_server(storage);
  ASSERT_GT(port, 0);
  std::string t1, t2;
  {
    httplib::Client cli("127.0.0.1", port);
    auto created = cli.Post("/api/sessions", "{}", "application/json");
    ASSERT_TRUE(created);
    const auto body = doc::parse_text(created->body);
    t1 = body["partner1_token"];
    t2 = body["partner2_token"];
    auto sub = cli.Post("/api/sessions/" + t1 + "/answers",
                        doc::load_file(data("responses/mixed_partner1.json")).dump(), "application/json");
    ASSERT_TRUE(sub);
    EXPECT_EQ(sub->status, 200);
  }
  ::kill(pid, SIGKILL);
  ::waitpid(pid, nullptr, 0);

  std::tie(pid, port) = start_server(storage);
  ASSERT_GT(port, 0);
  {
    httplib::Client cli("127.0.0.1", port);
    auto waiting = cli.Get("/api/sessions/" + t1 + "/report");
    ASSERT_TRUE(waiting);
    EXPECT_EQ(waiting->status, 202);
    EXPECT_EQ(doc::parse_text(waiting->body)["state"], "OneSubmitted");
    EXPECT_EQ(cli.Post("/api/sessions/" + t1 + "/answers",
                       doc::load_file(data("responses/mixed_partner1.json")).dump(), "application/json")
                  ->status,
              409);
    EXPECT_EQ(cli.Post("/api/sessions/" + t2 + "/answers",
                       doc::load_file(data("responses/mixed_partner2.json")).dump(), "application/json")
                  ->status,
              200);
    auto report = cli.Get("/api/sessions/" + t2 + "/report");
    ASSERT_TRUE(report);
    EXPECT_EQ(report->status, 200);
    const auto direct = run("score " + data("forms/default.json") + " " + data("responses/mixed_partner1.json") +
                                " " + data("responses/mixed_partner2.json"),
                            false);
    EXPECT_EQ(report->body, direct.out);
  }
  ::kill(pid, SIGTERM);
  ::waitpid(pid, nullptr, 0);
  fs::remove_all(storage);
  fs::remove(storage.string() + ".serve.json");
}

}  // namespace
}  // namespace nashcompat
