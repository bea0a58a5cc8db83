#pragma once

// The three-slot compatibility questionnaire and its scoring.
//
// Each partner distributes a question's point total over outcomes
// A ("my way"), B (compromise) and C ("the highway"). Dominance compares the
// partners' cumulative A mass; satisfaction sums A minus C. B is validated
// for the sum constraint but never scored.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nashcompat/game.hpp"

namespace nashcompat {

struct Question {
  std::string prompt;
  std::array<std::string, 3> outcomes;  // A, B, C
  int partner1_total = 10;
  int partner2_total = 10;
};

struct QuizForm {
  std::vector<Question> questions;

  std::size_t size() const { return questions.size(); }
  int total_for(int partner, std::size_t t) const {
    return partner == 1 ? questions.at(t).partner1_total : questions.at(t).partner2_total;
  }

  void validate() const {
    if (questions.empty()) throw ValidationError("questions: form needs at least one question");
    for (std::size_t t = 0; t < questions.size(); ++t) {
      if (questions[t].partner1_total < 1 || questions[t].partner2_total < 1)
        throw ValidationError("questions[" + std::to_string(t) + "]: totals must be >= 1");
    }
  }
};

using Triple = std::array<int, 3>;

struct PartnerResponse {
  int partner_id = 1;
  std::vector<Triple> answers;
};

struct Violation {
  // Zero-based question index; -1 for response-level problems.
  int question = -1;
  std::string message;
};

inline QuizForm default_form() {
  auto q = [](std::string prompt, std::string a, std::string b, std::string c) {
    return Question{std::move(prompt), {std::move(a), std::move(b), std::move(c)}, 10, 10};
  };
  return QuizForm{{
      q("You have decided to spend the weekend together. How does it go?", "It's a blast!",
        "It's not my first choice, but it's nice.", "Well, at least my partner is happy."),
      q("How do you feel about your sex life?", "Sex is just the way I like it!",
        "I'm satisfied.", "I am sexually frustrated."),
      q("How do you and your partner manage your careers and chores?",
        "Career and chores are just the way I like them.", "I've had to make some compromises.",
        "I've made significant sacrifices for my partner."),
      q("Your partner has fallen ill. What happens?", "I rarely catch whatever s/he has.",
        "I take care of him/her and might get sick.", "I stay by his/her side and get sick."),
      q("How often do you see your family and your in-laws?", "Exactly as much as I would like.",
        "It's a compromise but we manage to get along.", "I don't see my own family enough."),
      q("If you are in a long relationship, your circle of friends often change. Whose friends "
        "do you tend to see?",
        "I spend as much time with my friends as I want.",
        "I spend less time with my friends but still keep up.", "I rarely see my old friends."),
      q("How is your financial situation?", "Great.",
        "I can't always spend the way I'd like, but it's fine.", "We have financial problems."),
      q("Have you and your partner talked about having children?",
        "Yes and I'm happy with our decisions.", "We will discuss it eventually.",
        "That is up to my partner to decide."),
      q("How do you feel about your lifestyle in terms of health, fitness, and physical "
        "appearance?",
        "I am totally happy.", "Fine.", "It is not what it used to be."),
      q("You have agreed to spend a cozy night at home watching TV. How does it go?",
        "I love what we watch.", "We compromise on something.",
        "My partner chooses what we watch."),
  }};
}

// Violations for one triple against a point total; empty when valid.
inline std::vector<std::string> triple_problems(const Triple& t, int total) {
  std::vector<std::string> out;
  const char* slot[3] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i) {
    if (t[i] < 0) out.push_back(std::string("slot ") + slot[i] + " is negative");
    else if (t[i] > total)
      out.push_back(std::string("slot ") + slot[i] + " exceeds " + std::to_string(total));
  }
  const long sum = static_cast<long>(t[0]) + t[1] + t[2];
  if (sum != total)
    out.push_back("must add up to " + std::to_string(total) + " (got " + std::to_string(sum) +
                  ")");
  return out;
}

inline std::vector<Violation> validate_response(const QuizForm& form,
                                                const PartnerResponse& response) {
  std::vector<Violation> out;
  if (response.partner_id != 1 && response.partner_id != 2)
    out.push_back({-1, "partner must be 1 or 2"});
  if (response.answers.size() != form.size()) {
    out.push_back({-1, "expected " + std::to_string(form.size()) + " answers, got " +
                           std::to_string(response.answers.size())});
    return out;
  }
  if (!out.empty()) return out;
  for (std::size_t t = 0; t < form.size(); ++t) {
    for (auto& msg : triple_problems(response.answers[t], form.total_for(response.partner_id, t)))
      out.push_back({static_cast<int>(t), std::move(msg)});
  }
  return out;
}

class ResponseError : public ValidationError {
 public:
  ResponseError(int partner, std::vector<Violation> violations)
      : ValidationError(describe(partner, violations)),
        partner_(partner),
        violations_(std::move(violations)) {}

  int partner() const { return partner_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string describe(int partner, const std::vector<Violation>& v) {
    std::string s = "partner " + std::to_string(partner) + " response invalid:";
    for (const auto& x : v) {
      s += x.question >= 0 ? " [question " + std::to_string(x.question + 1) + "] " : " ";
      s += x.message + ";";
    }
    return s;
  }
  int partner_;
  std::vector<Violation> violations_;
};

enum class ScoringMode { Uniform, Weighted };
enum class Verdict { Partner1Dominant, Partner2Dominant, Balanced };
enum class Region { Cyan, Magenta, Diagonal };

inline const char* to_string(ScoringMode m) {
  return m == ScoringMode::Uniform ? "uniform" : "weighted";
}
inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Partner1Dominant: return "Partner1Dominant";
    case Verdict::Partner2Dominant: return "Partner2Dominant";
    default: return "Balanced";
  }
}
inline const char* to_string(Region r) {
  switch (r) {
    case Region::Cyan: return "cyan";
    case Region::Magenta: return "magenta";
    default: return "diagonal";
  }
}

struct ScoreReport {
  ScoringMode mode = ScoringMode::Uniform;
  // Uniform: raw sums of A slots. Weighted: X/W1 and Y/W2.
  double X = 0.0;
  double Y = 0.0;
  double P1 = 0.0;
  double P2 = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double K = 0.0;
  double K_max = 0.0;
  double x = 0.0;  // balance point
  double y = 0.0;
  Verdict verdict = Verdict::Balanced;
  Region region = Region::Diagonal;
};

// Region of the unit square: y > x magenta, x > y cyan.
inline Region classify_point(double x, double y) {
  if (x > y) return Region::Cyan;
  if (y > x) return Region::Magenta;
  return Region::Diagonal;
}

inline void classify(ScoreReport& r) {
  if (r.P1 > r.P2) r.verdict = Verdict::Partner1Dominant;
  else if (r.P2 > r.P1) r.verdict = Verdict::Partner2Dominant;
  else r.verdict = Verdict::Balanced;
  r.region = classify_point(r.x, r.y);
}

namespace detail {

inline void require_valid(const QuizForm& form, const PartnerResponse& r, int expected_partner) {
  auto v = validate_response(form, r);
  if (r.partner_id != expected_partner)
    v.insert(v.begin(), {-1, "expected partner " + std::to_string(expected_partner) +
                                 ", got " + std::to_string(r.partner_id)});
  if (!v.empty()) throw ResponseError(expected_partner, std::move(v));
}

}  // namespace detail

// Equal-weight scoring. Requires one common point total N for all questions
// and both partners; X/(N T) is each partner's cumulative "my way"
// probability and K_max = 2 N T.
inline ScoreReport score_uniform(const QuizForm& form, const PartnerResponse& r1,
                                 const PartnerResponse& r2) {
  form.validate();
  const int n = form.questions.front().partner1_total;
  for (std::size_t t = 0; t < form.size(); ++t) {
    if (form.questions[t].partner1_total != n || form.questions[t].partner2_total != n)
      throw ValidationError("questions[" + std::to_string(t) +
                            "]: totals differ; use weighted scoring");
  }
  detail::require_valid(form, r1, 1);
  detail::require_valid(form, r2, 2);

  std::int64_t sx = 0, sy = 0, k1 = 0, k2 = 0;
  for (std::size_t t = 0; t < form.size(); ++t) {
    sx += r1.answers[t][0];
    sy += r2.answers[t][0];
    k1 += r1.answers[t][0] - r1.answers[t][2];
    k2 += r2.answers[t][0] - r2.answers[t][2];
  }
  const double scale = static_cast<double>(n) * static_cast<double>(form.size());
  ScoreReport r;
  r.mode = ScoringMode::Uniform;
  r.X = static_cast<double>(sx);
  r.Y = static_cast<double>(sy);
  r.P1 = static_cast<double>(sx - sy);
  r.P2 = static_cast<double>(sy - sx);
  r.K1 = static_cast<double>(k1);
  r.K2 = static_cast<double>(k2);
  r.K = static_cast<double>(k1 + k2);
  r.K_max = 2.0 * scale;
  r.x = r.X / scale;
  r.y = r.Y / scale;
  classify(r);
  return r;
}

// Per-question weights: partner 1 puts p(t) points on question t, partner 2
// q(t). Dominance uses X/W1 - Y/W2; satisfaction normalizes each question by
// its own weight, so K_max = 2T.
inline ScoreReport score_weighted(const QuizForm& form, const PartnerResponse& r1,
                                  const PartnerResponse& r2) {
  form.validate();
  detail::require_valid(form, r1, 1);
  detail::require_valid(form, r2, 2);

  std::int64_t sx = 0, sy = 0, w1 = 0, w2 = 0;
  double k1 = 0.0, k2 = 0.0;
  for (std::size_t t = 0; t < form.size(); ++t) {
    const int p = form.questions[t].partner1_total;
    const int q = form.questions[t].partner2_total;
    sx += r1.answers[t][0];
    sy += r2.answers[t][0];
    w1 += p;
    w2 += q;
    k1 += static_cast<double>(r1.answers[t][0] - r1.answers[t][2]) / p;
    k2 += static_cast<double>(r2.answers[t][0] - r2.answers[t][2]) / q;
  }
  if (w1 <= 0 || w2 <= 0) throw ValidationError("questions: weights must be positive");
  ScoreReport r;
  r.mode = ScoringMode::Weighted;
  r.X = static_cast<double>(sx) / static_cast<double>(w1);
  r.Y = static_cast<double>(sy) / static_cast<double>(w2);
  r.P1 = r.X - r.Y;
  r.P2 = -r.P1;
  r.K1 = k1;
  r.K2 = k2;
  r.K = k1 + k2;
  r.K_max = 2.0 * static_cast<double>(form.size());
  r.x = r.X;
  r.y = r.Y;
  classify(r);
  return r;
}

}  // namespace nashcompat
