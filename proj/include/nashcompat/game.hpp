#pragma once

// Finite n-player normal-form games and mixed strategy profiles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nashcompat {

// Raised for malformed inputs: dimension mismatches, out-of-range values,
// constraint violations. The message names the offending field.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using PureProfile = std::vector<std::size_t>;

// Dense payoff tensor. Profiles are laid out row-major with player 0 as the
// most significant index; each profile stores one payoff per player.
class NormalFormGame {
 public:
  NormalFormGame(std::vector<std::size_t> strategy_counts,
                 std::vector<double> payoffs)
      : counts_(std::move(strategy_counts)), payoffs_(std::move(payoffs)) {
    if (counts_.empty()) throw ValidationError("players: must be at least 1");
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (counts_[i] == 0)
        throw ValidationError("strategy_counts[" + std::to_string(i) +
                              "]: must be positive");
    }
    profile_count_ = std::accumulate(counts_.begin(), counts_.end(),
                                     std::size_t{1}, std::multiplies<>());
    if (payoffs_.size() != profile_count_ * counts_.size())
      throw ValidationError("payoffs: expected " +
                            std::to_string(profile_count_ * counts_.size()) +
                            " values, got " + std::to_string(payoffs_.size()));
    for (double v : payoffs_)
      if (!std::isfinite(v)) throw ValidationError("payoffs: non-finite value");
  }

  // Builds a game from (profile, payoff vector) entries; every profile must
  // appear exactly once.
  static NormalFormGame from_entries(
      std::vector<std::size_t> strategy_counts,
      const std::vector<std::pair<PureProfile, std::vector<double>>>& entries) {
    const std::size_t n = strategy_counts.size();
    if (n == 0) throw ValidationError("players: must be at least 1");
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (strategy_counts[i] == 0)
        throw ValidationError("strategy_counts[" + std::to_string(i) +
                              "]: must be positive");
      total *= strategy_counts[i];
    }
    std::vector<double> data(total * n, 0.0);
    std::vector<bool> seen(total, false);
    for (const auto& [profile, values] : entries) {
      if (profile.size() != n)
        throw ValidationError("payoffs.profile: expected " + std::to_string(n) +
                              " indices");
      if (values.size() != n)
        throw ValidationError("payoffs.values: expected " + std::to_string(n) +
                              " values");
      std::size_t flat = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (profile[i] >= strategy_counts[i])
          throw ValidationError("payoffs.profile: index out of range");
        flat = flat * strategy_counts[i] + profile[i];
      }
      if (seen[flat]) throw ValidationError("payoffs: duplicate profile");
      seen[flat] = true;
      for (std::size_t i = 0; i < n; ++i) data[flat * n + i] = values[i];
    }
    for (bool s : seen)
      if (!s) throw ValidationError("payoffs: missing profile");
    return NormalFormGame(std::move(strategy_counts), std::move(data));
  }

  // Two-player convenience: row player's and column player's payoff
  // matrices, both indexed [row][col].
  static NormalFormGame bimatrix(const std::vector<std::vector<double>>& row,
                                 const std::vector<std::vector<double>>& col) {
    if (row.empty() || row.size() != col.size())
      throw ValidationError("bimatrix: row counts differ");
    const std::size_t m = row.size(), k = row.front().size();
    std::vector<double> data;
    data.reserve(m * k * 2);
    for (std::size_t r = 0; r < m; ++r) {
      if (row[r].size() != k || col[r].size() != k)
        throw ValidationError("bimatrix: ragged matrix");
      for (std::size_t c = 0; c < k; ++c) {
        data.push_back(row[r][c]);
        data.push_back(col[r][c]);
      }
    }
    return NormalFormGame({m, k}, std::move(data));
  }

  std::size_t player_count() const { return counts_.size(); }
  const std::vector<std::size_t>& strategy_counts() const { return counts_; }
  std::size_t strategy_count(std::size_t player) const { return counts_.at(player); }
  std::size_t profile_count() const { return profile_count_; }

  std::size_t flat_index(const PureProfile& profile) const {
    if (profile.size() != counts_.size())
      throw ValidationError("profile: wrong number of indices");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (profile[i] >= counts_[i])
        throw ValidationError("profile: index out of range");
      flat = flat * counts_[i] + profile[i];
    }
    return flat;
  }

  PureProfile unflatten(std::size_t flat) const {
    PureProfile p(counts_.size());
    for (std::size_t i = counts_.size(); i-- > 0;) {
      p[i] = flat % counts_[i];
      flat /= counts_[i];
    }
    return p;
  }

  double payoff(const PureProfile& profile, std::size_t player) const {
    return payoffs_[flat_index(profile) * counts_.size() + player];
  }

  double payoff_flat(std::size_t flat, std::size_t player) const {
    return payoffs_[flat * counts_.size() + player];
  }

  friend bool operator==(const NormalFormGame&, const NormalFormGame&) = default;

 private:
  std::vector<std::size_t> counts_;
  std::vector<double> payoffs_;
  std::size_t profile_count_ = 0;
};

// One probability vector per player. Construction clamps rounding noise,
// rejects genuinely negative entries, and renormalizes each vector to sum 1.
class MixedProfile {
 public:
  static constexpr double kNegativeSlack = 1e-9;

  explicit MixedProfile(std::vector<std::vector<double>> strategies)
      : strategies_(std::move(strategies)) {
    if (strategies_.empty()) throw ValidationError("profile: no players");
    for (std::size_t i = 0; i < strategies_.size(); ++i) {
      auto& s = strategies_[i];
      if (s.empty())
        throw ValidationError("profile[" + std::to_string(i) + "]: empty vector");
      double sum = 0.0;
      for (double& x : s) {
        if (!std::isfinite(x) || x < -kNegativeSlack)
          throw ValidationError("profile[" + std::to_string(i) +
                                "]: entries must be finite and nonnegative");
        if (x < 0.0) x = 0.0;
        sum += x;
      }
      if (sum <= 0.0)
        throw ValidationError("profile[" + std::to_string(i) + "]: zero mass");
      for (double& x : s) x /= sum;
    }
  }

  // Pure profile as degenerate mixed profile.
  static MixedProfile pure(const std::vector<std::size_t>& counts,
                           const PureProfile& choice) {
    if (counts.size() != choice.size())
      throw ValidationError("profile: wrong number of indices");
    std::vector<std::vector<double>> s;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (choice[i] >= counts[i]) throw ValidationError("profile: index out of range");
      std::vector<double> v(counts[i], 0.0);
      v[choice[i]] = 1.0;
      s.push_back(std::move(v));
    }
    return MixedProfile(std::move(s));
  }

  // 2x2 shorthand: x and y are the probabilities of each player's first
  // strategy.
  static MixedProfile two_by_two(double x, double y) {
    return MixedProfile({{x, 1.0 - x}, {y, 1.0 - y}});
  }

  std::size_t player_count() const { return strategies_.size(); }
  const std::vector<double>& strategy(std::size_t player) const {
    return strategies_.at(player);
  }
  const std::vector<std::vector<double>>& strategies() const { return strategies_; }

  MixedProfile with_strategy(std::size_t player, std::vector<double> s) const {
    auto copy = strategies_;
    copy.at(player) = std::move(s);
    return MixedProfile(std::move(copy));
  }

  // Maximum absolute entry difference across the concatenated vectors.
  double distance(const MixedProfile& other) const {
    if (other.strategies_.size() != strategies_.size())
      throw ValidationError("profile: player count mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < strategies_.size(); ++i) {
      if (strategies_[i].size() != other.strategies_[i].size())
        throw ValidationError("profile: dimension mismatch");
      for (std::size_t j = 0; j < strategies_[i].size(); ++j)
        d = std::max(d, std::abs(strategies_[i][j] - other.strategies_[i][j]));
    }
    return d;
  }

 private:
  std::vector<std::vector<double>> strategies_;
};

}  // namespace nashcompat
