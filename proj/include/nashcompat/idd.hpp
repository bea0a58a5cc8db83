#pragma once

// Iterated dating dilemma: memory-one and lookup-table strategies, the joint
// Markov chain over previous outcomes, long-run scores (stationary solve and
// the determinant formula), zero-determinant strategy construction, and
// seeded match simulation.
//
// States are the previous joint outcome ordered CC, CD, DC, DD from Pat's
// point of view (Pat's move first). Gene conditions on the mirrored outcome,
// so Gene's strategy is indexed through kMirror.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nashcompat/game.hpp"
#include "nashcompat/scenarios.hpp"

namespace nashcompat::idd {

enum State : std::size_t { CC = 0, CD = 1, DC = 2, DD = 3 };
inline constexpr std::array<std::size_t, 4> kMirror = {CC, DC, CD, DD};
inline constexpr std::array<const char*, 4> kStateNames = {"CC", "CD", "DC", "DD"};

inline constexpr std::size_t kFallbackSteps = 1'000'000;
inline constexpr int kMaxTableMemory = 8;
inline constexpr int kMaxExactMemory = 5;

inline State parse_state(const std::string& s) {
  for (std::size_t i = 0; i < 4; ++i)
    if (s == kStateNames[i]) return static_cast<State>(i);
  throw ValidationError("initial_state: expected CC, CD, DC or DD, got '" + s + "'");
}

using Vec4 = std::array<double, 4>;

struct MemoryOneStrategy {
  Vec4 probs{};  // cooperation probability after CC, CD, DC, DD (own move first)

  void validate() const {
    for (std::size_t i = 0; i < 4; ++i)
      if (!(probs[i] >= 0.0 && probs[i] <= 1.0))
        throw ValidationError("probs[" + std::to_string(i) + "]: must lie in [0,1]");
  }

  static MemoryOneStrategy all_cooperate() { return {{1, 1, 1, 1}}; }
  static MemoryOneStrategy all_defect() { return {{0, 0, 0, 0}}; }
  static MemoryOneStrategy win_stay_lose_shift() { return {{1, 0, 0, 1}}; }
  static MemoryOneStrategy tit_for_tat() { return {{1, 0, 1, 0}}; }
  static MemoryOneStrategy repeat() { return {{1, 1, 0, 0}}; }
};

struct PayoffVectors {
  Vec4 pat{};
  Vec4 gene{};
};

inline PayoffVectors payoff_vectors(const IDDPayoffs& po) {
  return {{po.W, po.Z, po.Y, po.X}, {po.W, po.Y, po.Z, po.X}};
}

struct JointChain {
  Eigen::Matrix4d transition;
};

inline JointChain joint_chain(const MemoryOneStrategy& p, const MemoryOneStrategy& q) {
  p.validate();
  q.validate();
  JointChain chain{Eigen::Matrix4d::Zero()};
  for (std::size_t s = 0; s < 4; ++s) {
    const double pc = p.probs[s];
    const double qc = q.probs[kMirror[s]];
    const auto r = static_cast<Eigen::Index>(s);
    chain.transition(r, CC) = pc * qc;
    chain.transition(r, CD) = pc * (1.0 - qc);
    chain.transition(r, DC) = (1.0 - pc) * qc;
    chain.transition(r, DD) = (1.0 - pc) * (1.0 - qc);
  }
  return chain;
}

// Cooperation rule over the last k joint outcomes (own perspective). Entry
// index is sum over lag l = 1..k of outcome(t-l) * 4^(l-1), so a memory-1
// table coincides with a memory-one strategy.
class Strategy {
 public:
  Strategy(const MemoryOneStrategy& m) : memory_(1), entries_(m.probs.begin(), m.probs.end()) {
    m.validate();
  }

  static Strategy table(int memory, std::vector<double> entries) {
    if (memory < 1 || memory > kMaxTableMemory)
      throw ValidationError("memory: must be between 1 and " + std::to_string(kMaxTableMemory));
    const std::size_t expected = std::size_t{1} << (2 * memory);
    if (entries.size() != expected)
      throw ValidationError("entries: expected " + std::to_string(expected) + " values, got " +
                            std::to_string(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (!(entries[i] >= 0.0 && entries[i] <= 1.0))
        throw ValidationError("entries[" + std::to_string(i) + "]: must lie in [0,1]");
    Strategy s;
    s.memory_ = memory;
    s.entries_ = std::move(entries);
    return s;
  }

  int memory() const { return memory_; }
  const std::vector<double>& entries() const { return entries_; }
  double cooperation(std::size_t history) const { return entries_[history]; }

  std::optional<MemoryOneStrategy> as_memory_one() const {
    if (memory_ != 1) return std::nullopt;
    return MemoryOneStrategy{{entries_[0], entries_[1], entries_[2], entries_[3]}};
  }

 private:
  Strategy() = default;
  int memory_ = 1;
  std::vector<double> entries_;
};

struct StationaryResult {
  double pat = 0.0;
  double gene = 0.0;
  // Long-run distribution over the most recent outcome.
  Vec4 v{};
  // False when the stationary distribution is not unique; the scores are
  // then a Cesaro average of the trajectory from the initial state.
  bool uniquely_ergodic = true;
};

namespace detail {

inline std::size_t pow4(int k) { return std::size_t{1} << (2 * k); }

// Mirror every base-4 digit of a history index.
inline std::size_t mirror_history(std::size_t h, int k) {
  std::size_t out = 0, scale = 1;
  for (int i = 0; i < k; ++i) {
    out += kMirror[h % 4] * scale;
    h /= 4;
    scale *= 4;
  }
  return out;
}

inline std::size_t constant_history(State s, int k) {
  std::size_t h = 0;
  for (int i = 0; i < k; ++i) h = h * 4 + s;
  return h;
}

// Sparse chain over k-step histories: each state has four successors.
struct HistoryChain {
  int memory = 1;
  std::size_t states = 4;
  std::vector<std::array<double, 4>> move_probs;  // successor outcome probabilities

  std::size_t successor(std::size_t h, std::size_t outcome) const {
    return outcome + 4 * (h % pow4(memory - 1));
  }
};

inline HistoryChain history_chain(const Strategy& pat, const Strategy& gene) {
  HistoryChain c;
  c.memory = std::max(pat.memory(), gene.memory());
  c.states = pow4(c.memory);
  c.move_probs.resize(c.states);
  const std::size_t pm = pow4(pat.memory()), gm = pow4(gene.memory());
  for (std::size_t h = 0; h < c.states; ++h) {
    const double pc = pat.cooperation(h % pm);
    const double qc = gene.cooperation(mirror_history(h, c.memory) % gm);
    c.move_probs[h] = {pc * qc, pc * (1.0 - qc), (1.0 - pc) * qc, (1.0 - pc) * (1.0 - qc)};
  }
  return c;
}

// Unique stationary distribution via the null space of (T^T - I); empty
// when the null space is not one-dimensional.
inline std::optional<Eigen::VectorXd> unique_stationary(const Eigen::MatrixXd& transition) {
  const Eigen::Index n = transition.rows();
  Eigen::MatrixXd sys = transition.transpose() - Eigen::MatrixXd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
  lu.setThreshold(1e-12);
  if (lu.rank() != n - 1) return std::nullopt;
  sys.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd v = sys.fullPivLu().solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i)
    if (v(i) < 0.0) v(i) = 0.0;
  v /= v.sum();
  return v;
}

inline std::vector<double> cesaro_average(const HistoryChain& c, std::size_t start,
                                          std::size_t steps) {
  std::vector<double> dist(c.states, 0.0), next(c.states), acc(c.states, 0.0);
  dist[start] = 1.0;
  for (std::size_t t = 0; t < steps; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t h = 0; h < c.states; ++h) {
      if (dist[h] == 0.0) continue;
      for (std::size_t o = 0; o < 4; ++o) next[c.successor(h, o)] += dist[h] * c.move_probs[h][o];
    }
    dist.swap(next);
    for (std::size_t h = 0; h < c.states; ++h) acc[h] += dist[h];
  }
  for (double& a : acc) a /= static_cast<double>(steps);
  return acc;
}

inline StationaryResult scores_from_history_distribution(const std::vector<double>& dist,
                                                         const PayoffVectors& f, bool unique) {
  StationaryResult r;
  r.uniquely_ergodic = unique;
  for (std::size_t h = 0; h < dist.size(); ++h) r.v[h % 4] += dist[h];
  for (std::size_t s = 0; s < 4; ++s) {
    r.pat += r.v[s] * f.pat[s];
    r.gene += r.v[s] * f.gene[s];
  }
  return r;
}

}  // namespace detail

// Exact long-run scores for any pair of table strategies with memory up to
// kMaxExactMemory.
inline StationaryResult long_run_scores(const Strategy& pat, const Strategy& gene,
                                        const IDDPayoffs& payoffs, State initial = CC,
                                        std::size_t fallback_steps = kFallbackSteps) {
  const int k = std::max(pat.memory(), gene.memory());
  if (k > kMaxExactMemory)
    throw ValidationError("memory: exact long-run scores support memory up to " +
                          std::to_string(kMaxExactMemory) + "; use simulate_match");
  const auto chain = detail::history_chain(pat, gene);
  const auto n = static_cast<Eigen::Index>(chain.states);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t h = 0; h < chain.states; ++h)
    for (std::size_t o = 0; o < 4; ++o)
      t(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(chain.successor(h, o))) +=
          chain.move_probs[h][o];
  const auto f = payoff_vectors(payoffs);
  if (auto v = detail::unique_stationary(t)) {
    return detail::scores_from_history_distribution(
        std::vector<double>(v->data(), v->data() + v->size()), f, true);
  }
  const auto avg =
      detail::cesaro_average(chain, detail::constant_history(initial, k), fallback_steps);
  return detail::scores_from_history_distribution(avg, f, false);
}

inline StationaryResult stationary_scores(const MemoryOneStrategy& p, const MemoryOneStrategy& q,
                                          const IDDPayoffs& payoffs, State initial = CC,
                                          std::size_t fallback_steps = kFallbackSteps) {
  return long_run_scores(Strategy(p), Strategy(q), payoffs, initial, fallback_steps);
}

class DegenerateChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double score_determinant(const MemoryOneStrategy& p, const MemoryOneStrategy& q,
                                const Vec4& f) {
  const auto& a = p.probs;
  const auto& b = q.probs;
  Eigen::Matrix4d m;
  m << -1 + a[0] * b[0], -1 + a[0], -1 + b[0], f[0],
       a[1] * b[2],      -1 + a[1], b[2],      f[1],
       a[2] * b[1],      a[2],      -1 + b[1], f[2],
       a[3] * b[3],      a[3],      b[3],      f[3];
  return m.determinant();
}

}  // namespace detail

// Long-run value of the per-state quantity f as the ratio D(p,q,f)/D(p,q,1)
// of two 4x4 determinants.
inline double determinant_score(const MemoryOneStrategy& p, const MemoryOneStrategy& q,
                                const Vec4& f) {
  p.validate();
  q.validate();
  const double norm = detail::score_determinant(p, q, {1, 1, 1, 1});
  if (std::abs(norm) < 1e-12)
    throw DegenerateChainError(
        "determinant_score: D(p,q,1) vanishes; the stationary distribution is not unique, "
        "use stationary_scores");
  return detail::score_determinant(p, q, f) / norm;
}

// Linear form alpha*f_Pat + beta*f_Gene + gamma*1 that Pat's strategy
// pins to zero in the long run.
struct ZDSpec {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::optional<double> target_score;

  bool nontrivial() const { return alpha != 0.0 || beta != 0.0; }
};

// Pat's strategy p with (p1-1, p2-1, p3, p4) = alpha f_Pat + beta f_Gene +
// gamma 1; empty when that p leaves [0,1]^4.
inline std::optional<MemoryOneStrategy> zd_strategy(const IDDPayoffs& payoffs, const ZDSpec& spec,
                                                    double slack = 1e-12) {
  const auto f = payoff_vectors(payoffs);
  constexpr Vec4 base = {1, 1, 0, 0};
  MemoryOneStrategy p;
  for (std::size_t i = 0; i < 4; ++i) {
    const double v = base[i] + spec.alpha * f.pat[i] + spec.beta * f.gene[i] + spec.gamma;
    if (v < -slack || v > 1.0 + slack) return std::nullopt;
    p.probs[i] = std::clamp(v, 0.0, 1.0);
  }
  return p;
}

struct EqualizerResult {
  bool feasible = false;
  MemoryOneStrategy strategy{};
  ZDSpec spec;
  // Admissible beta range (beta = 0 excluded); meaningful when feasible.
  double beta_low = 0.0;
  double beta_high = 0.0;
  std::string violated_bound;
};

// Pat's equalizer forcing Gene's long-run score to `target`: p-tilde =
// beta (f_Gene - target 1). The free scale beta is chosen to keep p as far
// from the faces of the unit hypercube as possible.
inline EqualizerResult zd_equalizer(const IDDPayoffs& payoffs, double target) {
  if (!std::isfinite(target)) throw ValidationError("target: must be finite");
  const auto f = payoff_vectors(payoffs);
  constexpr Vec4 base = {1, 1, 0, 0};
  Vec4 slope{};
  for (std::size_t i = 0; i < 4; ++i) slope[i] = f.gene[i] - target;

  // 0 <= base_i + beta slope_i <= 1 for each entry.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 4; ++i) {
    if (slope[i] == 0.0) continue;
    double a = (0.0 - base[i]) / slope[i];
    double b = (1.0 - base[i]) / slope[i];
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }

  EqualizerResult r;
  r.spec.target_score = target;
  r.beta_low = lo;
  r.beta_high = hi;
  if (lo > hi || (lo == 0.0 && hi == 0.0)) {
    if (target > payoffs.W)
      r.violated_bound = "target exceeds W = " + std::to_string(payoffs.W) +
                         " (mutual give payoff); p1 or p2 would leave [0,1]";
    else if (target < payoffs.X)
      r.violated_bound = "target is below X = " + std::to_string(payoffs.X) +
                         " (mutual take payoff); p3 or p4 would leave [0,1]";
    else
      r.violated_bound = "no nonzero scale keeps p inside [0,1]^4";
    return r;
  }

  // Search the admissible side(s) for the beta maximizing the distance to the
  // hypercube boundary. That distance is concave and piecewise linear in beta,
  // so its maximum sits at an endpoint or at a crossing of two pieces.
  auto distance = [&](double beta) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i) {
      const double v = base[i] + beta * slope[i];
      d = std::min({d, v, 1.0 - v});
    }
    return d;
  };
  const double seg_lo = lo, seg_hi = hi;
  std::vector<double> candidates = {seg_lo, seg_hi};
  // Linear pieces v_i and 1 - v_i as (intercept, slope).
  std::vector<std::pair<double, double>> pieces;
  for (std::size_t i = 0; i < 4; ++i) {
    pieces.emplace_back(base[i], slope[i]);
    pieces.emplace_back(1.0 - base[i], -slope[i]);
  }
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const double ds = pieces[i].second - pieces[j].second;
      if (ds == 0.0) continue;
      const double beta = (pieces[j].first - pieces[i].first) / ds;
      if (beta >= seg_lo && beta <= seg_hi) candidates.push_back(beta);
    }
  double best_beta = 0.0, best = -1.0;
  for (double beta : candidates) {
    if (beta == 0.0 || !std::isfinite(beta)) continue;
    const double d = distance(beta);
    if (d > best + 1e-15) {
      best = d;
      best_beta = beta;
    }
  }
  if (best <= 0.0) {
    // Every admissible point touches a face; take the middle of a side.
    best_beta = lo < 0.0 ? 0.5 * (lo + std::min(hi, 0.0)) : 0.5 * (std::max(lo, 0.0) + hi);
  }

  r.feasible = true;
  r.spec.beta = best_beta;
  r.spec.gamma = -best_beta * target;
  for (std::size_t i = 0; i < 4; ++i)
    r.strategy.probs[i] = std::clamp(base[i] + best_beta * slope[i], 0.0, 1.0);
  return r;
}

struct MatchResult {
  double avg_pat = 0.0;
  double avg_gene = 0.0;
  // Batch-means standard errors of the averages.
  double stderr_pat = 0.0;
  double stderr_gene = 0.0;
  std::array<std::uint64_t, 4> outcome_counts{};  // CC, CD, DC, DD from Pat's side
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
};

inline MatchResult simulate_match(const Strategy& pat, const Strategy& gene,
                                  const IDDPayoffs& payoffs, std::uint64_t rounds,
                                  std::uint64_t seed, State initial = CC) {
  if (rounds < 1) throw ValidationError("rounds: must be at least 1");
  const auto f = payoff_vectors(payoffs);
  const int k = std::max(pat.memory(), gene.memory());
  const std::size_t keep = detail::pow4(k - 1);
  const std::size_t pm = detail::pow4(pat.memory()), gm = detail::pow4(gene.memory());

  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return std::generate_canonical<double, 53>(rng); };

  std::size_t h = detail::constant_history(initial, k);
  std::size_t hm = detail::constant_history(static_cast<State>(kMirror[initial]), k);

  const std::uint64_t batches = std::min<std::uint64_t>(100, rounds);
  const std::uint64_t batch_len = rounds / batches;
  std::vector<double> batch_pat, batch_gene;
  double sum_pat = 0.0, sum_gene = 0.0, bp = 0.0, bg = 0.0;
  std::uint64_t in_batch = 0;

  MatchResult r;
  r.rounds = rounds;
  r.seed = seed;
  for (std::uint64_t t = 0; t < rounds; ++t) {
    const bool pat_c = uniform() < pat.cooperation(h % pm);
    const bool gene_c = uniform() < gene.cooperation(hm % gm);
    const std::size_t o = pat_c ? (gene_c ? CC : CD) : (gene_c ? DC : DD);
    ++r.outcome_counts[o];
    sum_pat += f.pat[o];
    sum_gene += f.gene[o];
    bp += f.pat[o];
    bg += f.gene[o];
    if (++in_batch == batch_len && batch_pat.size() < batches) {
      batch_pat.push_back(bp / static_cast<double>(batch_len));
      batch_gene.push_back(bg / static_cast<double>(batch_len));
      bp = bg = 0.0;
      in_batch = 0;
    }
    h = o + 4 * (h % keep);
    hm = kMirror[o] + 4 * (hm % keep);
  }
  r.avg_pat = sum_pat / static_cast<double>(rounds);
  r.avg_gene = sum_gene / static_cast<double>(rounds);

  auto batch_se = [](const std::vector<double>& b) {
    if (b.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : b) mean += x;
    mean /= static_cast<double>(b.size());
    double ss = 0.0;
    for (double x : b) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(b.size() - 1) / static_cast<double>(b.size()));
  };
  r.stderr_pat = batch_se(batch_pat);
  r.stderr_gene = batch_se(batch_gene);
  return r;
}

inline MemoryOneStrategy random_interior_strategy(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MemoryOneStrategy s;
  for (double& p : s.probs) {
    do p = u(rng);
    while (p <= 0.0 || p >= 1.0);
  }
  return s;
}

inline Strategy random_table_strategy(int memory, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> entries(detail::pow4(memory));
  for (double& p : entries) {
    do p = u(rng);
    while (p <= 0.0 || p >= 1.0);
  }
  return Strategy::table(memory, std::move(entries));
}

struct SelfControlCandidate {
  ZDSpec spec;
  MemoryOneStrategy strategy;
  double spread = 0.0;  // max - min of own long-run score over the opponents
  std::string note;
};

struct SelfControlReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double resolution = 0.0;
  double alpha_range = 0.0;
  double gamma_range = 0.0;
  std::size_t grid_points = 0;
  std::size_t in_cube = 0;
  double spread_threshold = 1e-3;
  // Candidates inside [0,1]^4 that were excluded from the verdict.
  std::vector<SelfControlCandidate> excluded;
  // Nontrivial in-cube candidates whose own-score spread stayed within the
  // threshold. Empty means no self-equalizer was found.
  std::vector<SelfControlCandidate> counterexamples;
  // Nontrivial in-cube candidates that failed to hold their own score.
  std::vector<SelfControlCandidate> rejected;
  bool insufficient_trials = false;
  std::vector<std::string> notes;

  bool no_self_equalizer_found() const { return counterexamples.empty(); }
};

// Scans the self-referential ZD family p-tilde = alpha f_Pat + gamma 1 on a
// grid and checks every in-cube candidate against `trials` random interior
// opponents.
inline SelfControlReport check_no_self_control(const IDDPayoffs& payoffs, std::size_t trials,
                                               std::uint64_t seed = 1, double resolution = 1e-2) {
  if (trials < 1) throw ValidationError("trials: must be at least 1");
  if (!(resolution > 0.0)) throw ValidationError("resolution: must be positive");
  const auto f = payoff_vectors(payoffs);

  SelfControlReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.resolution = resolution;
  rep.insufficient_trials = trials < 2;
  if (rep.insufficient_trials)
    rep.notes.push_back("a single opponent gives zero spread by construction; evidence is "
                        "insufficient");

  // In-cube entries of p-tilde lie in [-1,1], so alpha times any payoff gap
  // stays within 2 and |gamma| within 1 + |alpha| max|f|.
  double min_gap = std::numeric_limits<double>::infinity(), max_abs = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    max_abs = std::max(max_abs, std::abs(f.pat[i]));
    for (std::size_t j = i + 1; j < 4; ++j)
      if (f.pat[i] != f.pat[j]) min_gap = std::min(min_gap, std::abs(f.pat[i] - f.pat[j]));
  }
  rep.alpha_range = 2.0 / min_gap;
  rep.gamma_range = 1.0 + rep.alpha_range * max_abs;
  const auto na = static_cast<long>(std::ceil(rep.alpha_range / resolution));
  const auto ng = static_cast<long>(std::ceil(rep.gamma_range / resolution));

  std::mt19937_64 rng(seed);
  std::vector<MemoryOneStrategy> opponents;
  for (std::size_t i = 0; i < trials; ++i) opponents.push_back(random_interior_strategy(rng));

  auto spread_of = [&](const MemoryOneStrategy& p) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& q : opponents) {
      const double s = stationary_scores(p, q, payoffs).pat;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    return hi - lo;
  };

  for (long i = -na; i <= na; ++i) {
    for (long j = -ng; j <= ng; ++j) {
      ++rep.grid_points;
      ZDSpec spec{static_cast<double>(i) * resolution, 0.0, static_cast<double>(j) * resolution,
                  std::nullopt};
      const auto p = zd_strategy(payoffs, spec);
      if (!p) continue;
      ++rep.in_cube;
      SelfControlCandidate c{spec, *p, spread_of(*p), {}};
      if (!spec.nontrivial()) {
        c.note = "trivial form (alpha = beta = 0): p is the repeat-own-move strategy";
        rep.excluded.push_back(std::move(c));
      } else if (c.spread <= rep.spread_threshold) {
        rep.counterexamples.push_back(std::move(c));
      } else {
        rep.rejected.push_back(std::move(c));
      }
    }
  }

  SelfControlCandidate alld{{0.0, 0.0, 0.0, payoffs.X}, MemoryOneStrategy::all_defect(),
                            spread_of(MemoryOneStrategy::all_defect()),
                            "all-defect lock-in at X is a joint outcome, not a unilateral one"};
  rep.excluded.push_back(std::move(alld));
  rep.notes.push_back("all-defect excluded as the boundary lock-in at X");
  return rep;
}

}  // namespace nashcompat::idd
