// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "nashcompat/documents.hpp"
#include "nashcompat/equilibrium.hpp"
#include "nashcompat/idd.hpp"
#include "nashcompat/quiz.hpp"
#include "nashcompat/scenarios.hpp"
#include "nashcompat/session.hpp"

namespace {

using namespace nashcompat;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const std::string kData = NASHCOMPAT_DATA_DIR;
const std::string kCli = NASHCOMPAT_CLI;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  (" << detail << ")" << std::endl;
  if (!ok) ++failures;
}

void criterion(const std::string& name, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  report(name, ok, detail.str());
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

NormalFormGame random_game(std::mt19937_64& rng, std::size_t m1, std::size_t m2) {
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<double> payoffs(m1 * m2 * 2);
  for (double& v : payoffs) v = u(rng);
  return NormalFormGame({m1, m2}, payoffs);
}

bool contains_profile(const EnumerationResult& r, const MixedProfile& p, double tol) {
  for (const auto& e : r.equilibria)
    if (e.profile.distance(p) <= tol) return true;
  return false;
}

PartnerResponse random_response(std::mt19937_64& rng, const QuizForm& form, int partner) {
  PartnerResponse r{partner, {}};
  for (std::size_t t = 0; t < form.size(); ++t) {
    const int total = form.total_for(partner, t);
    std::uniform_int_distribution<int> u(0, total);
    int a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    r.answers.push_back({a, b - a, total - b});
  }
  return r;
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  ::pclose(p);
  return out;
}

fs::path fresh_dir(const std::string& tag) {
  const auto d = fs::temp_directory_path() / ("nashcompat-accept-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  return d;
}

void film_v1() {
  criterion("film v1: (0,1), (1,0), (1/2,1/2) found, each certified at 1e-7, runtime < 1 s", [](auto& d) {
    const auto t0 = Clock::now();
    const auto r = enumerate_equilibria_2p(film_game_v1());
    const double dt = seconds_since(t0);
    bool ok = r.equilibria.size() == 3;
    for (const auto& [x, y] : {std::pair{0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}}) {
      const auto p = MixedProfile::two_by_two(x, y);
      ok = ok && contains_profile(r, p, 1e-7) && is_equilibrium(film_game_v1(), p, 1e-7).holds;
    }
    for (const auto& e : r.equilibria) ok = ok && e.max_deviation_gain <= 1e-7;
    d << r.equilibria.size() << " equilibria in " << dt << " s";
    return ok && dt < 1.0;
  });
}

void pp_condition() {
  criterion("(P,P) condition agrees with is_equilibrium on 500 draws", [](auto& d) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-10, 10);
    int disagreements = 0;
    for (int i = 0; i < 500; ++i) {
      const FilmMatrixParams f{u(rng), u(rng), u(rng), u(rng)};
      if (pp_equilibrium_condition(f) !=
          is_equilibrium(film_game_symmetric(f), MixedProfile::two_by_two(0, 0)).holds)
        ++disagreements;
    }
    d << disagreements << " disagreements";
    return disagreements == 0;
  });
}

void gg_condition() {
  criterion("(G,G) condition with b = c agrees on 500 draws; jealousy regime has exactly {(G,G),(P,P)}",
            [](auto& d) {
              std::mt19937_64 rng(102);
              std::uniform_real_distribution<double> u(-10, 10);
              int disagreements = 0;
              for (int i = 0; i < 500; ++i) {
                FilmMatrixParams f{u(rng), 0, u(rng), u(rng)};
                f.b = f.c;
                if (gg_equilibrium_condition(f) !=
                    is_equilibrium(film_game_symmetric(f), MixedProfile::two_by_two(1, 1)).holds)
                  ++disagreements;
              }
              // Jealousy regime d < a < c with b = c, random draws.
              int regime_bad = 0;
              for (int i = 0; i < 100; ++i) {
                double v[3] = {u(rng), u(rng), u(rng)};
                std::sort(v, v + 3);
                if (v[0] == v[1] || v[1] == v[2]) continue;
                const auto g = film_game_symmetric(FilmMatrixParams::jealousy(v[1], v[2], v[0]));
                const auto r = enumerate_equilibria_2p(g);
                const bool ok = r.equilibria.size() == 2 &&
                                contains_profile(r, MixedProfile::two_by_two(1, 1), 1e-7) &&
                                contains_profile(r, MixedProfile::two_by_two(0, 0), 1e-7);
                if (!ok) ++regime_bad;
              }
              d << disagreements << " disagreements; " << regime_bad << " of 100 regime games off";
              return disagreements == 0 && regime_bad == 0;
            });
}

void my_way_unique() {
  criterion("my-way: exactly one equilibrium, (M,M)", [](auto& d) {
    const auto r = enumerate_equilibria_2p(my_way_game());
    d << r.equilibria.size() << " equilibria";
    return r.equilibria.size() == 1 && contains_profile(r, MixedProfile::two_by_two(1, 1), 1e-7);
  });
}

void existence() {
  criterion("existence: 200 random games up to 3x3 each have a certified equilibrium", [](auto& d) {
    std::mt19937_64 rng(103);
    int empty = 0;
    for (int i = 0; i < 200; ++i) {
      const auto g = random_game(rng, 1 + rng() % 3, 1 + rng() % 3);
      const auto r = enumerate_equilibria_2p(g);
      bool ok = !r.equilibria.empty();
      for (const auto& e : r.equilibria) ok = ok && is_equilibrium(g, e.profile, 1e-7).holds;
      if (!ok) ++empty;
    }
    d << empty << " games without a certified equilibrium";
    return empty == 0;
  });
}

void scoring_maxima() {
  criterion("scoring maxima: default all-A K = 200, weighted all-A K = 2T, P1 = -P2 on 1000 pairs", [](auto& d) {
    const auto f = default_form();
    const auto u = score_uniform(f, {1, std::vector<Triple>(10, {10, 0, 0})}, {2, std::vector<Triple>(10, {10, 0, 0})});
    std::mt19937_64 rng(104);
    bool weighted_ok = true;
    for (std::size_t n : {1u, 2u, 7u, 25u}) {
      QuizForm w;
      std::uniform_int_distribution<int> total(1, 60);
      for (std::size_t t = 0; t < n; ++t) w.questions.push_back({"q", {"A", "B", "C"}, total(rng), total(rng)});
      PartnerResponse r1{1, {}}, r2{2, {}};
      for (const auto& q : w.questions) {
        r1.answers.push_back({q.partner1_total, 0, 0});
        r2.answers.push_back({q.partner2_total, 0, 0});
      }
      weighted_ok = weighted_ok && score_weighted(w, r1, r2).K == 2.0 * static_cast<double>(n);
    }
    int exceptions = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto a = random_response(rng, f, 1), b = random_response(rng, f, 2);
      const auto s = score_uniform(f, a, b);
      const auto w = score_weighted(f, a, b);
      if (s.P1 != -s.P2 || w.P1 != -w.P2) ++exceptions;
    }
    d << "K = " << u.K << ", weighted " << (weighted_ok ? "2T" : "wrong") << ", " << exceptions
      << " antisymmetry exceptions";
    return u.K == 200.0 && weighted_ok && exceptions == 0;
  });
}

void reduction() {
  criterion("weighted reduces to uniform/100 and /10 within 1e-12 on 200 pairs", [](auto& d) {
    const auto f = default_form();
    std::mt19937_64 rng(105);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const auto a = random_response(rng, f, 1), b = random_response(rng, f, 2);
      const auto u = score_uniform(f, a, b), w = score_weighted(f, a, b);
      worst = std::max({worst, std::abs(w.P1 - u.P1 / 100.0), std::abs(w.K1 - u.K1 / 10.0)});
    }
    d << "max error " << worst;
    return worst <= 1e-12;
  });
}

void stationary_oracle() {
  criterion("stationary oracle: determinant within 1e-8 and 10^6-round simulation within 0.01 on 1000 pairs",
            [](auto& d) {
              const IDDPayoffs po{};
              const auto f = idd::payoff_vectors(po);
              std::mt19937_64 rng(106);
              double det_worst = 0.0, sim_worst = 0.0;
              int sim_bad = 0;
              const auto t0 = Clock::now();
              for (int i = 0; i < 1000; ++i) {
                const auto p = idd::random_interior_strategy(rng), q = idd::random_interior_strategy(rng);
                const auto s = idd::stationary_scores(p, q, po);
                det_worst = std::max({det_worst, std::abs(idd::determinant_score(p, q, f.pat) - s.pat),
                                      std::abs(idd::determinant_score(p, q, f.gene) - s.gene)});
                const auto m = idd::simulate_match(p, q, po, 1'000'000, 5000 + i);
                const double e = std::max(std::abs(m.avg_pat - s.pat), std::abs(m.avg_gene - s.gene));
                sim_worst = std::max(sim_worst, e);
                if (e > 0.01) ++sim_bad;
              }
              d << "determinant max error " << det_worst << ", simulation max error " << sim_worst << ", "
                << sim_bad << " pairs over 0.01, " << seconds_since(t0) << " s";
              return det_worst <= 1e-8 && sim_bad == 0;
            });
}

void zd_forcing() {
  criterion("ZD equalizer s = 2: 100 memory-one + 10 memory-3 opponents, 1e-6 stationary, 3 sigma simulation; "
            "s = 4 and s = 0.5 infeasible",
            [](auto& d) {
              const IDDPayoffs po{};
              const auto eq = idd::zd_equalizer(po, 2.0);
              if (!eq.feasible) {
                d << "s = 2 reported infeasible";
                return false;
              }
              std::mt19937_64 rng(107);
              std::vector<idd::Strategy> opponents;
              for (int i = 0; i < 100; ++i) opponents.emplace_back(idd::random_interior_strategy(rng));
              for (int i = 0; i < 10; ++i) opponents.push_back(idd::random_table_strategy(3, rng));
              double stat_worst = 0.0, worst_sigmas = 0.0;
              int sim_bad = 0;
              for (std::size_t i = 0; i < opponents.size(); ++i) {
                const idd::Strategy pat(eq.strategy);
                const auto s = idd::long_run_scores(pat, opponents[i], po);
                stat_worst = std::max(stat_worst, std::abs(s.gene - 2.0));
                const auto m = idd::simulate_match(pat, opponents[i], po, 1'000'000, 9000 + i);
                const double z = std::abs(m.avg_gene - 2.0) / m.stderr_gene;
                worst_sigmas = std::max(worst_sigmas, z);
                if (z > 3.0) ++sim_bad;
              }
              const bool hi = idd::zd_equalizer(po, 4.0).feasible;
              const bool lo = idd::zd_equalizer(po, 0.5).feasible;
              d << "stationary max error " << stat_worst << ", simulation worst " << worst_sigmas << " sigma, "
                << sim_bad << " of 110 beyond 3 sigma; s=4 " << (hi ? "feasible" : "infeasible") << ", s=0.5 "
                << (lo ? "feasible" : "infeasible");
              return stat_worst <= 1e-6 && sim_bad == 0 && !hi && !lo;
            });
}

void self_control() {
  criterion("no self-equalizer on the (alpha,gamma) grid at 1e-2 over 100 opponents, runtime < 60 s", [](auto& d) {
    const auto t0 = Clock::now();
    const auto r = idd::check_no_self_control(IDDPayoffs{}, 100, 108, 1e-2);
    const double dt = seconds_since(t0);
    d << r.grid_points << " grid points, " << r.in_cube << " in cube, " << r.counterexamples.size()
      << " counterexamples, " << r.excluded.size() << " excluded, " << dt << " s";
    return r.no_self_equalizer_found() && !r.insufficient_trials && dt < 60.0;
  });
}

void service_protocol() {
  criterion("service: dual-blind and state machine over random call sequences", [](auto& d) {
    using namespace service;
    std::mt19937_64 rng(109);
    int violations = 0, sequences = 0;
    const auto dir = fresh_dir("protocol");
    SessionService svc({dir});
    for (int trial = 0; trial < 200; ++trial, ++sequences) {
      const auto c = svc.create_session();
      const std::string id = c.body["session_id"];
      const std::array<std::string, 2> tok = {c.body["partner1_token"], c.body["partner2_token"]};
      std::array<bool, 2> done{false, false};
      for (int step = 0; step < 16; ++step) {
        const int who = static_cast<int>(rng() % 2);
        Reply r;
        switch (rng() % 4) {
          case 0: r = svc.fetch_form(tok[who]); break;
          case 1: {
            const int a = static_cast<int>(rng() % 11);
            json body = doc::detail::versioned();
            body["answers"] = std::vector<Triple>(10, {a, 0, (rng() % 5 ? 10 : 12) - a});
            r = svc.submit(tok[who], body);
            if (r.status == kOk) {
              if (done[who]) ++violations;
              done[who] = true;
            }
            break;
          }
          case 2: r = svc.fetch_report(tok[who]); break;
          default: r = svc.fetch_form("bogus" + std::to_string(rng())); if (r.status != kNotFound) ++violations;
        }
        const bool complete = done[0] && done[1];
        if (r.body.contains("P1") && !complete) ++violations;
        const std::string text = doc::dump(r.body);
        if (text.find("\"answers\"") != std::string::npos) ++violations;
        if (text.find(tok[1 - who]) != std::string::npos) ++violations;
        const auto expect = complete ? SessionState::Complete
                            : done[0] || done[1] ? SessionState::OneSubmitted
                                                 : SessionState::Created;
        if (svc.state(id) != expect) ++violations;
      }
    }
    fs::remove_all(dir);
    d << sequences << " sequences, " << violations << " violations";
    return violations == 0;
  });

  criterion("service report is byte-identical to the CLI report on shared fixtures", [](auto& d) {
    using namespace service;
    const auto dir = fresh_dir("bytes");
    SessionService svc({dir});
    int mismatches = 0, cases = 0;
    for (const auto& [a, b] : {std::pair{"mixed", "mixed"}, {"all_a", "all_a"}, {"all_a", "all_c"}, {"all_c", "mixed"}}) {
      const std::string r1 = kData + "/responses/" + a + "_partner1.json";
      const std::string r2 = kData + "/responses/" + b + "_partner2.json";
      const auto c = svc.create_session();
      svc.submit(c.body["partner1_token"], doc::load_file(r1));
      svc.submit(c.body["partner2_token"], doc::load_file(r2));
      const auto rep = svc.fetch_report(c.body["partner2_token"]);
      const std::string cli = capture(kCli + " score " + kData + "/forms/default.json " + r1 + " " + r2 + " 2>/dev/null");
      ++cases;
      if (rep.status != kOk || doc::dump(rep.body) != cli) ++mismatches;
    }
    fs::remove_all(dir);
    d << mismatches << " of " << cases << " fixture pairs differ";
    return mismatches == 0;
  });

  criterion("service restart resumes a OneSubmitted session", [](auto& d) {
    using namespace service;
    const auto dir = fresh_dir("restart");
    std::string id, t1, t2;
    {
      SessionService svc({dir});
      const auto c = svc.create_session();
      id = c.body["session_id"];
      t1 = c.body["partner1_token"];
      t2 = c.body["partner2_token"];
      svc.submit(t1, doc::load_file(kData + "/responses/mixed_partner1.json"));
    }
    SessionService svc({dir});
    const bool resumed = svc.state(id) == SessionState::OneSubmitted;
    const bool conflict = svc.submit(t1, doc::load_file(kData + "/responses/mixed_partner1.json")).status == kConflict;
    const bool second = svc.submit(t2, doc::load_file(kData + "/responses/mixed_partner2.json")).status == kOk;
    const bool report = svc.fetch_report(t1).status == kOk;
    fs::remove_all(dir);
    d << "resumed " << resumed << ", duplicate rejected " << conflict << ", completed " << (second && report);
    return resumed && conflict && second && report;
  });
}

}  // namespace

int main() {
  film_v1();
  pp_condition();
  gg_condition();
  my_way_unique();
  existence();
  scoring_maxima();
  reduction();
  stationary_oracle();
  zd_forcing();
  self_control();
  service_protocol();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
