#pragma once

// JSON document schemas for games, quiz forms, partner responses, score
// reports, strategies and dating-dilemma configs. Every document carries
// `schema_version`; parsers reject other versions and name the offending
// field on error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nashcompat/equilibrium.hpp"
#include "nashcompat/game.hpp"
#include "nashcompat/idd.hpp"
#include "nashcompat/quiz.hpp"
#include "nashcompat/scenarios.hpp"

namespace nashcompat::doc {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw ValidationError(std::string("document: expected an object around '") +
                                            name + "'");
  auto it = j.find(name);
  if (it == j.end()) throw ValidationError(std::string(name) + ": missing");
  return *it;
}

template <class T>
T get(const json& j, const char* name) {
  const json& v = field(j, name);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string(name) + ": wrong type");
  }
}

inline void check_version(const json& j) {
  const int v = get<int>(j, "schema_version");
  if (v != kSchemaVersion)
    throw ValidationError("schema_version: unsupported version " + std::to_string(v));
}

inline json versioned() {
  json j = json::object();
  j["schema_version"] = kSchemaVersion;
  return j;
}

}  // namespace detail

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("document: not valid JSON (") + e.what() + ")");
  }
}

inline json load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("file: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

// Canonical text: two-space indent, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- games ----------------------------------------------------------------

struct GameDocument {
  NormalFormGame game;
  // Optional per-player strategy labels.
  std::vector<std::vector<std::string>> labels;
};

inline GameDocument game_from_json(const json& j) {
  detail::check_version(j);
  const int players = detail::get<int>(j, "players");
  if (players < 1) throw ValidationError("players: must be at least 1");
  const auto counts = detail::get<std::vector<std::size_t>>(j, "strategy_counts");
  if (counts.size() != static_cast<std::size_t>(players))
    throw ValidationError("strategy_counts: expected " + std::to_string(players) + " entries");
  const json& payoffs = detail::field(j, "payoffs");
  if (!payoffs.is_array()) throw ValidationError("payoffs: expected an array");
  std::vector<std::pair<PureProfile, std::vector<double>>> entries;
  for (const auto& e : payoffs)
    entries.emplace_back(detail::get<PureProfile>(e, "profile"),
                         detail::get<std::vector<double>>(e, "values"));
  GameDocument d{NormalFormGame::from_entries(counts, entries), {}};
  if (auto it = j.find("strategy_labels"); it != j.end()) {
    try {
      d.labels = it->get<std::vector<std::vector<std::string>>>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError("strategy_labels: wrong type");
    }
    if (d.labels.size() != counts.size())
      throw ValidationError("strategy_labels: expected one list per player");
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (d.labels[i].size() != counts[i])
        throw ValidationError("strategy_labels[" + std::to_string(i) + "]: wrong length");
  }
  return d;
}

inline json to_json(const GameDocument& d) {
  json j = detail::versioned();
  const auto& g = d.game;
  j["players"] = g.player_count();
  j["strategy_counts"] = g.strategy_counts();
  if (!d.labels.empty()) j["strategy_labels"] = d.labels;
  json arr = json::array();
  for (std::size_t flat = 0; flat < g.profile_count(); ++flat) {
    std::vector<double> values;
    for (std::size_t i = 0; i < g.player_count(); ++i) values.push_back(g.payoff_flat(flat, i));
    arr.push_back({{"profile", g.unflatten(flat)}, {"values", values}});
  }
  j["payoffs"] = std::move(arr);
  return j;
}

inline std::string strategy_label(const GameDocument& d, std::size_t player, std::size_t s) {
  if (player < d.labels.size() && s < d.labels[player].size()) return d.labels[player][s];
  return std::to_string(s);
}

inline json to_json(const EquilibriumReport& r, const GameDocument& d) {
  json j = json::object();
  j["kind"] = to_string(r.kind);
  j["profile"] = r.profile.strategies();
  json support = json::array();
  for (std::size_t i = 0; i < r.support.size(); ++i) {
    json labels = json::array();
    for (auto s : r.support[i]) labels.push_back(strategy_label(d, i, s));
    support.push_back(labels);
  }
  j["support"] = std::move(support);
  j["payoffs"] = expected_payoff(d.game, r.profile);
  j["max_deviation_gain"] = r.max_deviation_gain;
  return j;
}

// ---- quiz -----------------------------------------------------------------

inline QuizForm form_from_json(const json& j) {
  detail::check_version(j);
  const json& qs = detail::field(j, "questions");
  if (!qs.is_array()) throw ValidationError("questions: expected an array");
  QuizForm form;
  for (std::size_t t = 0; t < qs.size(); ++t) {
    const json& q = qs[t];
    Question out;
    out.prompt = detail::get<std::string>(q, "prompt");
    const auto outcomes = detail::get<std::vector<std::string>>(q, "outcomes");
    if (outcomes.size() != 3)
      throw ValidationError("questions[" + std::to_string(t) + "].outcomes: expected 3 labels");
    std::copy(outcomes.begin(), outcomes.end(), out.outcomes.begin());
    out.partner1_total = q.contains("partner1_total") ? detail::get<int>(q, "partner1_total") : 10;
    out.partner2_total = q.contains("partner2_total") ? detail::get<int>(q, "partner2_total") : 10;
    form.questions.push_back(std::move(out));
  }
  form.validate();
  return form;
}

inline json to_json(const QuizForm& form) {
  json j = detail::versioned();
  json qs = json::array();
  for (const auto& q : form.questions) {
    qs.push_back({{"prompt", q.prompt},
                  {"outcomes", q.outcomes},
                  {"partner1_total", q.partner1_total},
                  {"partner2_total", q.partner2_total}});
  }
  j["questions"] = std::move(qs);
  return j;
}

inline PartnerResponse response_from_json(const json& j,
                                          std::optional<int> partner_override = std::nullopt) {
  detail::check_version(j);
  PartnerResponse r;
  if (partner_override) {
    r.partner_id = *partner_override;
    if (j.contains("partner") && detail::get<int>(j, "partner") != *partner_override)
      throw ValidationError("partner: does not match the submitting token");
  } else {
    r.partner_id = detail::get<int>(j, "partner");
  }
  const json& answers = detail::field(j, "answers");
  if (!answers.is_array()) throw ValidationError("answers: expected an array");
  for (std::size_t t = 0; t < answers.size(); ++t) {
    std::vector<int> triple;
    try {
      triple = answers[t].get<std::vector<int>>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError("answers[" + std::to_string(t) + "]: expected three integers");
    }
    if (triple.size() != 3)
      throw ValidationError("answers[" + std::to_string(t) + "]: expected three integers");
    r.answers.push_back({triple[0], triple[1], triple[2]});
  }
  return r;
}

inline json to_json(const PartnerResponse& r) {
  json j = detail::versioned();
  j["partner"] = r.partner_id;
  j["answers"] = r.answers;
  return j;
}

inline json to_json(const ScoreReport& r, const QuizForm& form) {
  json j = detail::versioned();
  j["mode"] = to_string(r.mode);
  j["X"] = r.X;
  j["Y"] = r.Y;
  j["P1"] = r.P1;
  j["P2"] = r.P2;
  j["K1"] = r.K1;
  j["K2"] = r.K2;
  j["K"] = r.K;
  j["K_max"] = r.K_max;
  j["balance_point"] = {r.x, r.y};
  j["verdict"] = to_string(r.verdict);
  j["region"] = to_string(r.region);
  json prompts = json::array();
  for (const auto& q : form.questions) prompts.push_back(q.prompt);
  j["questions"] = std::move(prompts);
  return j;
}

inline ScoreReport report_from_json(const json& j) {
  detail::check_version(j);
  ScoreReport r;
  const auto mode = detail::get<std::string>(j, "mode");
  if (mode == "uniform") r.mode = ScoringMode::Uniform;
  else if (mode == "weighted") r.mode = ScoringMode::Weighted;
  else throw ValidationError("mode: expected uniform or weighted");
  r.X = detail::get<double>(j, "X");
  r.Y = detail::get<double>(j, "Y");
  r.P1 = detail::get<double>(j, "P1");
  r.P2 = detail::get<double>(j, "P2");
  r.K1 = detail::get<double>(j, "K1");
  r.K2 = detail::get<double>(j, "K2");
  r.K = detail::get<double>(j, "K");
  r.K_max = detail::get<double>(j, "K_max");
  const auto bp = detail::get<std::vector<double>>(j, "balance_point");
  if (bp.size() != 2) throw ValidationError("balance_point: expected [x, y]");
  r.x = bp[0];
  r.y = bp[1];
  classify(r);
  if (detail::get<std::string>(j, "verdict") != to_string(r.verdict))
    throw ValidationError("verdict: inconsistent with P1/P2");
  if (detail::get<std::string>(j, "region") != to_string(r.region))
    throw ValidationError("region: inconsistent with balance_point");
  return r;
}

// Human summary naming the dominant partner and the satisfaction level.
inline std::string summarize(const ScoreReport& r) {
  std::ostringstream os;
  switch (r.verdict) {
    case Verdict::Partner1Dominant: os << "Partner #1 is dominant"; break;
    case Verdict::Partner2Dominant: os << "Partner #2 is dominant"; break;
    default: os << "The relationship is balanced"; break;
  }
  os << " (P1 = " << r.P1 << ", P2 = " << r.P2 << ").\n";
  const double frac = r.K_max > 0 ? r.K / r.K_max : 0.0;
  const char* level = frac >= 0.75   ? "very high"
                      : frac >= 0.25 ? "high"
                      : frac > -0.25 ? "moderate"
                      : frac > -0.75 ? "low"
                                     : "very low";
  os << "Satisfaction K = " << r.K << " of a possible " << r.K_max << " (" << level
     << "); K1 = " << r.K1 << ", K2 = " << r.K2 << ".\n";
  os << "Balance point (x, y) = (" << r.x << ", " << r.y << "), " << to_string(r.region)
     << " region.\n";
  return os.str();
}

// ---- dating dilemma -------------------------------------------------------

inline IDDPayoffs payoffs_from_json(const json& j) {
  return idd_payoffs(detail::get<double>(j, "W"), detail::get<double>(j, "X"),
                     detail::get<double>(j, "Y"), detail::get<double>(j, "Z"));
}

inline json to_json(const IDDPayoffs& p) {
  return json{{"W", p.W}, {"X", p.X}, {"Y", p.Y}, {"Z", p.Z}};
}

// Strategy bodies: {kind: "memory-one", probs: [4]} or
// {kind: "table", memory: k, entries: [4^k]}.
inline idd::Strategy strategy_from_json(const json& j) {
  const auto kind = detail::get<std::string>(j, "kind");
  if (kind == "memory-one") {
    const auto probs = detail::get<std::vector<double>>(j, "probs");
    if (probs.size() != 4) throw ValidationError("probs: expected 4 values");
    idd::MemoryOneStrategy m{{probs[0], probs[1], probs[2], probs[3]}};
    return idd::Strategy(m);
  }
  if (kind == "table")
    return idd::Strategy::table(detail::get<int>(j, "memory"),
                                detail::get<std::vector<double>>(j, "entries"));
  throw ValidationError("kind: expected memory-one or table, got '" + kind + "'");
}

inline json to_json(const idd::Strategy& s) {
  json j = json::object();
  if (s.memory() == 1) {
    j["kind"] = "memory-one";
    j["probs"] = s.entries();
  } else {
    j["kind"] = "table";
    j["memory"] = s.memory();
    j["entries"] = s.entries();
  }
  return j;
}

inline json to_json(const idd::MemoryOneStrategy& s) { return to_json(idd::Strategy(s)); }

struct IddConfig {
  IDDPayoffs payoffs;
  std::optional<idd::Strategy> pat;
  std::optional<idd::Strategy> gene;
  std::optional<double> target;
  std::uint64_t rounds = 1'000'000;
  std::uint64_t seed = 1;
  idd::State initial_state = idd::CC;
};

inline IddConfig idd_config_from_json(const json& j) {
  detail::check_version(j);
  IddConfig c;
  c.payoffs = j.contains("payoffs") ? payoffs_from_json(j["payoffs"]) : IDDPayoffs{};
  if (j.contains("pat")) c.pat = strategy_from_json(j["pat"]);
  if (j.contains("gene")) c.gene = strategy_from_json(j["gene"]);
  if (j.contains("target")) c.target = detail::get<double>(j, "target");
  if (j.contains("rounds")) {
    const auto r = detail::get<std::int64_t>(j, "rounds");
    if (r < 1) throw ValidationError("rounds: must be at least 1");
    c.rounds = static_cast<std::uint64_t>(r);
  }
  if (j.contains("seed")) c.seed = detail::get<std::uint64_t>(j, "seed");
  if (j.contains("initial_state"))
    c.initial_state = idd::parse_state(detail::get<std::string>(j, "initial_state"));
  return c;
}

inline json to_json(const IddConfig& c) {
  json j = detail::versioned();
  j["payoffs"] = to_json(c.payoffs);
  if (c.pat) j["pat"] = to_json(*c.pat);
  if (c.gene) j["gene"] = to_json(*c.gene);
  if (c.target) j["target"] = *c.target;
  j["rounds"] = c.rounds;
  j["seed"] = c.seed;
  j["initial_state"] = idd::kStateNames[c.initial_state];
  return j;
}

// Writes via a temporary sibling and rename so readers never see a partial
// file.
inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nashcompat::doc
