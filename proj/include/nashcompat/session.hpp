#pragma once

// Dual-blind quiz sessions. Each session hands out two capability tokens;
// a token can fetch the form, submit its own partner's answers once, and
// read the joint report after both partners have submitted. No operation
// ever returns raw answers.
//
// Storage is one directory per session under the storage root:
//   <id>/session.json        form, scoring mode, tokens, creation time
//   <id>/submission-<k>.json partner k's answers, created exactly once
// Submissions are created with link(2), which fails if the target exists, so
// the at-most-once rule holds across threads and processes.

#include <unistd.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>

#include "nashcompat/documents.hpp"
#include "nashcompat/quiz.hpp"

namespace nashcompat::service {

namespace fs = std::filesystem;
using json = doc::json;

enum class SessionState { Created, OneSubmitted, Complete };

inline const char* to_string(SessionState s) {
  switch (s) {
    case SessionState::Created: return "Created";
    case SessionState::OneSubmitted: return "OneSubmitted";
    default: return "Complete";
  }
}

// Transport-neutral reply; status uses HTTP codes.
struct Reply {
  int status = 200;
  json body;
};

inline constexpr int kCreated = 201;
inline constexpr int kOk = 200;
inline constexpr int kWaiting = 202;
inline constexpr int kBadRequest = 400;
inline constexpr int kNotFound = 404;
inline constexpr int kConflict = 409;
inline constexpr int kUnprocessable = 422;

// 128 bits from the OS entropy source, hex encoded.
inline std::string random_token() {
  static thread_local std::random_device rd;
  std::string out;
  char buf[9];
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
    out += buf;
  }
  return out;
}

class SessionService {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  struct Options {
    fs::path storage;
    std::chrono::seconds ttl = std::chrono::hours(24 * 30);
    Clock clock = [] { return std::chrono::system_clock::now(); };
  };

  explicit SessionService(Options opts) : opts_(std::move(opts)) {
    fs::create_directories(opts_.storage);
    reload();
  }

  // Body (optional): {"form": <quiz form document>, "weighted": bool}.
  Reply create_session(const json& body = json::object()) {
    QuizForm form;
    bool weighted = false;
    try {
      if (!body.is_null() && !body.is_object()) throw ValidationError("body: expected an object");
      form = body.contains("form") ? doc::form_from_json(body["form"]) : default_form();
      if (body.contains("weighted")) weighted = doc::detail::get<bool>(body, "weighted");
      if (!weighted) {
        const int n = form.questions.front().partner1_total;
        for (const auto& q : form.questions)
          if (q.partner1_total != n || q.partner2_total != n)
            throw ValidationError("form: totals differ; set weighted to true");
      }
    } catch (const ValidationError& e) {
      return error(kUnprocessable, e.what());
    }

    std::lock_guard lock(mu_);
    Session s{random_token(), form, weighted, {random_token(), random_token()}, now_seconds()};
    const fs::path dir = opts_.storage / s.id;
    fs::create_directories(dir);
    json rec = doc::detail::versioned();
    rec["session_id"] = s.id;
    rec["created_at"] = s.created_at;
    rec["weighted"] = s.weighted;
    rec["partner_tokens"] = {s.tokens[0], s.tokens[1]};
    rec["form"] = doc::to_json(s.form);
    doc::write_atomically(dir / "session.json", doc::dump(rec));
    index(s);

    json out = json::object();
    out["session_id"] = s.id;
    out["partner1_token"] = s.tokens[0];
    out["partner2_token"] = s.tokens[1];
    out["links"] = {{"partner1", "#session=" + s.id + "&token=" + s.tokens[0]},
                    {"partner2", "#session=" + s.id + "&token=" + s.tokens[1]}};
    out["state"] = to_string(SessionState::Created);
    return {kCreated, std::move(out)};
  }

  Reply fetch_form(const std::string& token) {
    std::lock_guard lock(mu_);
    auto found = lookup(token);
    if (!found) return not_found();
    const auto& [s, partner] = *found;
    json out = doc::detail::versioned();
    out["session_id"] = s->id;
    out["partner"] = partner;
    out["weighted"] = s->weighted;
    out["submitted"] = fs::exists(submission_path(*s, partner));
    out["form"] = doc::to_json(s->form);
    return {kOk, std::move(out)};
  }

  // Body: a response document; `partner` may be omitted and is taken from
  // the token.
  Reply submit(const std::string& token, const json& body) {
    std::lock_guard lock(mu_);
    auto found = lookup(token);
    if (!found) return not_found();
    const auto& [s, partner] = *found;
    const fs::path target = submission_path(*s, partner);
    if (fs::exists(target)) return error(kConflict, "already submitted");

    PartnerResponse response;
    try {
      response = doc::response_from_json(body, partner);
    } catch (const ValidationError& e) {
      return error(kUnprocessable, e.what());
    }
    if (auto v = validate_response(s->form, response); !v.empty()) {
      Reply r = error(kUnprocessable, "invalid answers");
      json list = json::array();
      for (const auto& x : v) list.push_back({{"question", x.question + 1}, {"message", x.message}});
      r.body["violations"] = std::move(list);
      return r;
    }

    json rec = doc::to_json(response);
    rec["submitted_at"] = now_seconds();
    const fs::path tmp = target.string() + "." + random_token() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      out << doc::dump(rec);
      if (!out) return error(500, "storage write failed");
    }
    const int rc = ::link(tmp.c_str(), target.c_str());
    const int err = errno;
    fs::remove(tmp);
    if (rc != 0) {
      if (err == EEXIST) return error(kConflict, "already submitted");
      return error(500, "storage write failed");
    }
    json out = json::object();
    out["status"] = "accepted";
    out["state"] = to_string(state_of(*s));
    return {kOk, std::move(out)};
  }

  Reply fetch_report(const std::string& token) {
    std::lock_guard lock(mu_);
    auto found = lookup(token);
    if (!found) return not_found();
    const Session& s = *found->first;
    const SessionState st = state_of(s);
    if (st != SessionState::Complete) {
      json out = json::object();
      out["status"] = "waiting for partner";
      out["state"] = to_string(st);
      return {kWaiting, std::move(out)};
    }
    const auto r1 = doc::response_from_json(doc::load_file(submission_path(s, 1)), 1);
    const auto r2 = doc::response_from_json(doc::load_file(submission_path(s, 2)), 2);
    const ScoreReport report =
        s.weighted ? score_weighted(s.form, r1, r2) : score_uniform(s.form, r1, r2);
    return {kOk, doc::to_json(report, s.form)};
  }

  std::optional<SessionState> state(const std::string& session_id) {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end() || expired(it->second)) return std::nullopt;
    return state_of(it->second);
  }

 private:
  struct Session {
    std::string id;
    QuizForm form;
    bool weighted = false;
    std::array<std::string, 2> tokens;
    std::int64_t created_at = 0;
  };

  std::int64_t now_seconds() const {
    return std::chrono::duration_cast<std::chrono::seconds>(opts_.clock().time_since_epoch())
        .count();
  }

  bool expired(const Session& s) const { return now_seconds() - s.created_at > opts_.ttl.count(); }

  fs::path submission_path(const Session& s, int partner) const {
    return opts_.storage / s.id / ("submission-" + std::to_string(partner) + ".json");
  }

  SessionState state_of(const Session& s) const {
    const int n = static_cast<int>(fs::exists(submission_path(s, 1))) +
                  static_cast<int>(fs::exists(submission_path(s, 2)));
    return n == 0 ? SessionState::Created : n == 1 ? SessionState::OneSubmitted
                                                   : SessionState::Complete;
  }

  void index(const Session& s) {
    sessions_.insert_or_assign(s.id, s);
    tokens_[s.tokens[0]] = {s.id, 1};
    tokens_[s.tokens[1]] = {s.id, 2};
  }

  std::optional<std::pair<const Session*, int>> lookup(const std::string& token) const {
    auto t = tokens_.find(token);
    if (t == tokens_.end()) return std::nullopt;
    auto s = sessions_.find(t->second.first);
    if (s == sessions_.end() || expired(s->second)) return std::nullopt;
    return std::make_pair(&s->second, t->second.second);
  }

  void reload() {
    for (const auto& entry : fs::directory_iterator(opts_.storage)) {
      if (!entry.is_directory()) continue;
      const fs::path rec_path = entry.path() / "session.json";
      if (!fs::exists(rec_path)) continue;  // interrupted create
      const json rec = doc::load_file(rec_path);
      Session s;
      s.id = rec.at("session_id").get<std::string>();
      s.created_at = rec.at("created_at").get<std::int64_t>();
      s.weighted = rec.at("weighted").get<bool>();
      s.tokens = {rec.at("partner_tokens")[0].get<std::string>(),
                  rec.at("partner_tokens")[1].get<std::string>()};
      s.form = doc::form_from_json(rec.at("form"));
      index(s);
    }
  }

  static Reply error(int status, const std::string& message) {
    return {status, json{{"error", message}}};
  }
  static Reply not_found() { return error(kNotFound, "not found"); }

  Options opts_;
  std::mutex mu_;
  std::map<std::string, Session> sessions_;
  std::map<std::string, std::pair<std::string, int>> tokens_;
};

}  // namespace nashcompat::service
