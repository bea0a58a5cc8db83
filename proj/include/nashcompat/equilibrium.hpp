#pragma once

// Expected payoffs, deviation certificates, and exhaustive equilibrium
// enumeration for small bimatrix games.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nashcompat/game.hpp"

namespace nashcompat {

inline constexpr double kCheckTolerance = 1e-9;
inline constexpr double kEnumerationTolerance = 1e-7;
inline constexpr std::size_t kMaxEnumerationStrategies = 6;

enum class EquilibriumKind { Pure, Mixed };

inline const char* to_string(EquilibriumKind k) {
  return k == EquilibriumKind::Pure ? "pure" : "mixed";
}

struct EquilibriumReport {
  MixedProfile profile;
  double max_deviation_gain = 0.0;
  std::vector<std::vector<std::size_t>> support;
  EquilibriumKind kind = EquilibriumKind::Mixed;
};

struct EquilibriumCheck {
  bool holds = false;
  EquilibriumReport report;
};

struct EnumerationResult {
  std::vector<EquilibriumReport> equilibria;
  // Some strategy has more pure best responses than its support size;
  // equilibrium components may then be segments, reported by their vertices.
  bool degenerate = false;
};

namespace detail {

inline void check_dimensions(const NormalFormGame& game, const MixedProfile& profile) {
  if (profile.player_count() != game.player_count())
    throw ValidationError("profile: expected " + std::to_string(game.player_count()) +
                          " players, got " + std::to_string(profile.player_count()));
  for (std::size_t i = 0; i < game.player_count(); ++i) {
    if (profile.strategy(i).size() != game.strategy_count(i))
      throw ValidationError("profile[" + std::to_string(i) + "]: expected " +
                            std::to_string(game.strategy_count(i)) + " entries");
  }
}

// Payoff to `player` for each of its pure strategies, opponents fixed.
inline std::vector<double> pure_strategy_payoffs(const NormalFormGame& game,
                                                 const MixedProfile& profile,
                                                 std::size_t player) {
  std::vector<double> out(game.strategy_count(player), 0.0);
  for (std::size_t flat = 0; flat < game.profile_count(); ++flat) {
    const PureProfile pure = game.unflatten(flat);
    double weight = 1.0;
    for (std::size_t j = 0; j < game.player_count() && weight != 0.0; ++j) {
      if (j != player) weight *= profile.strategy(j)[pure[j]];
    }
    if (weight != 0.0) out[pure[player]] += weight * game.payoff_flat(flat, player);
  }
  return out;
}

inline std::vector<std::size_t> support_of(const std::vector<double>& s, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (s[j] > tol) out.push_back(j);
  return out;
}

}  // namespace detail

inline std::vector<double> expected_payoff(const NormalFormGame& game,
                                           const MixedProfile& profile) {
  detail::check_dimensions(game, profile);
  std::vector<double> out(game.player_count(), 0.0);
  for (std::size_t flat = 0; flat < game.profile_count(); ++flat) {
    const PureProfile pure = game.unflatten(flat);
    double weight = 1.0;
    for (std::size_t j = 0; j < game.player_count(); ++j)
      weight *= profile.strategy(j)[pure[j]];
    if (weight == 0.0) continue;
    for (std::size_t i = 0; i < game.player_count(); ++i)
      out[i] += weight * game.payoff_flat(flat, i);
  }
  return out;
}

// Best gain `player` can obtain by a unilateral switch. Pure deviations
// suffice because payoffs are linear in the deviator's own strategy.
inline double deviation_gain(const NormalFormGame& game, const MixedProfile& profile,
                             std::size_t player) {
  detail::check_dimensions(game, profile);
  if (player >= game.player_count())
    throw ValidationError("player: index " + std::to_string(player) + " out of range");
  const auto pure = detail::pure_strategy_payoffs(game, profile, player);
  const auto& own = profile.strategy(player);
  double current = 0.0;
  for (std::size_t j = 0; j < own.size(); ++j) current += own[j] * pure[j];
  const double best = *std::max_element(pure.begin(), pure.end());
  return std::max(0.0, best - current);
}

inline EquilibriumReport make_report(const NormalFormGame& game, const MixedProfile& profile,
                                     double support_tol = kCheckTolerance) {
  EquilibriumReport r{profile, 0.0, {}, EquilibriumKind::Pure};
  for (std::size_t i = 0; i < game.player_count(); ++i) {
    r.max_deviation_gain = std::max(r.max_deviation_gain, deviation_gain(game, profile, i));
    r.support.push_back(detail::support_of(profile.strategy(i), support_tol));
    if (r.support.back().size() != 1) r.kind = EquilibriumKind::Mixed;
  }
  return r;
}

inline EquilibriumCheck is_equilibrium(const NormalFormGame& game, const MixedProfile& profile,
                                       double tol = kCheckTolerance) {
  if (!(tol >= 0.0)) throw ValidationError("tolerance: must be nonnegative");
  EquilibriumReport r = make_report(game, profile);
  const bool holds = r.max_deviation_gain <= tol;
  return {holds, std::move(r)};
}

namespace detail {

// A vertex of one player's best-response polyhedron
//   { (s, v) : s in simplex, M s <= v 1 }
// where M holds the OPPONENT's payoffs against s. `tight` lists the
// opponent's pure best responses to s.
struct BestResponseVertex {
  std::vector<double> strategy;
  std::vector<std::size_t> support;
  std::vector<std::size_t> tight;
};

inline std::vector<std::size_t> subset_members(std::uint32_t mask, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (1u << i)) out.push_back(i);
  return out;
}

// Support enumeration over (tight set, support) pairs. `m` is
// (#opponent strategies) x (#own strategies).
inline std::vector<BestResponseVertex> polyhedron_vertices(const Eigen::MatrixXd& m,
                                                           double tol, bool& degenerate) {
  const std::size_t rows = static_cast<std::size_t>(m.rows());
  const std::size_t cols = static_cast<std::size_t>(m.cols());
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double btol = tol * scale;
  std::vector<BestResponseVertex> out;

  for (std::uint32_t lmask = 1; lmask < (1u << cols); ++lmask) {
    const auto support = subset_members(lmask, cols);
    const std::size_t ls = support.size();
    for (std::uint32_t kmask = 1; kmask < (1u << rows); ++kmask) {
      const auto tight = subset_members(kmask, rows);
      if (tight.size() < ls) continue;  // cannot pin down |L|+1 unknowns
      const Eigen::Index neq = static_cast<Eigen::Index>(tight.size() + 1);
      const Eigen::Index nun = static_cast<Eigen::Index>(ls + 1);
      Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(neq, nun);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(neq);
      for (std::size_t r = 0; r < tight.size(); ++r) {
        for (std::size_t c = 0; c < ls; ++c)
          sys(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              m(static_cast<Eigen::Index>(tight[r]), static_cast<Eigen::Index>(support[c]));
        sys(static_cast<Eigen::Index>(r), nun - 1) = -1.0;
      }
      for (std::size_t c = 0; c < ls; ++c) sys(neq - 1, static_cast<Eigen::Index>(c)) = 1.0;
      rhs(neq - 1) = 1.0;

      Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
      lu.setThreshold(1e-10);
      if (lu.rank() != nun) continue;
      const Eigen::VectorXd sol = lu.solve(rhs);
      if ((sys * sol - rhs).cwiseAbs().maxCoeff() > btol) continue;

      std::vector<double> s(cols, 0.0);
      bool ok = true;
      for (std::size_t c = 0; c < ls; ++c) {
        const double val = sol(static_cast<Eigen::Index>(c));
        if (val <= tol) { ok = false; break; }  // vertex belongs to a smaller support
        s[support[c]] = val;
      }
      if (!ok) continue;
      const double value = sol(nun - 1);
      Eigen::VectorXd sv(static_cast<Eigen::Index>(cols));
      for (std::size_t c = 0; c < cols; ++c) sv(static_cast<Eigen::Index>(c)) = s[c];
      const Eigen::VectorXd resp = m * sv;
      if (resp.maxCoeff() > value + btol) continue;

      BestResponseVertex v;
      v.strategy = std::move(s);
      v.support = support;
      for (std::size_t r = 0; r < rows; ++r)
        if (resp(static_cast<Eigen::Index>(r)) >= value - btol) v.tight.push_back(r);

      bool dup = false;
      for (const auto& existing : out) {
        double d = 0.0;
        for (std::size_t c = 0; c < cols; ++c)
          d = std::max(d, std::abs(existing.strategy[c] - v.strategy[c]));
        if (d < kEnumerationTolerance) { dup = true; break; }
      }
      if (dup) continue;
      if (v.tight.size() > v.support.size()) degenerate = true;
      out.push_back(std::move(v));
    }
  }
  return out;
}

inline bool includes(const std::vector<std::size_t>& big, const std::vector<std::size_t>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace detail

// All extreme equilibria of a two-player game with at most six strategies
// per player. Equilibria closer than 1e-7 (max-abs metric) are merged.
inline EnumerationResult enumerate_equilibria_2p(const NormalFormGame& game,
                                                 double tol = kCheckTolerance) {
  if (game.player_count() != 2)
    throw ValidationError("players: enumeration supports exactly 2 players, got " +
                          std::to_string(game.player_count()));
  const std::size_t m1 = game.strategy_count(0), m2 = game.strategy_count(1);
  if (m1 > kMaxEnumerationStrategies || m2 > kMaxEnumerationStrategies)
    throw ValidationError("strategy_counts: enumeration supports at most 6 strategies per player");

  Eigen::MatrixXd row(static_cast<Eigen::Index>(m1), static_cast<Eigen::Index>(m2));
  Eigen::MatrixXd col(static_cast<Eigen::Index>(m1), static_cast<Eigen::Index>(m2));
  for (std::size_t r = 0; r < m1; ++r)
    for (std::size_t c = 0; c < m2; ++c) {
      row(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = game.payoff({r, c}, 0);
      col(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = game.payoff({r, c}, 1);
    }

  EnumerationResult result;
  // Row strategies x are judged by the column player's payoffs and vice versa.
  const auto xs = detail::polyhedron_vertices(col.transpose(), tol, result.degenerate);
  const auto ys = detail::polyhedron_vertices(row, tol, result.degenerate);

  for (const auto& x : xs) {
    for (const auto& y : ys) {
      if (!detail::includes(y.tight, x.support) || !detail::includes(x.tight, y.support))
        continue;
      MixedProfile profile({x.strategy, y.strategy});
      auto check = is_equilibrium(game, profile, kEnumerationTolerance);
      if (!check.holds) continue;
      const bool dup = std::any_of(
          result.equilibria.begin(), result.equilibria.end(), [&](const EquilibriumReport& e) {
            return e.profile.distance(profile) < kEnumerationTolerance;
          });
      if (!dup) result.equilibria.push_back(std::move(check.report));
    }
  }
  return result;
}

}  // namespace nashcompat
