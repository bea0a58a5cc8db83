#pragma once

// Named game instances: the bar-scene courting games, the "my way or the
// highway" quiz game, and validated dating-dilemma payoffs.

#include <cmath>
#include <sstream>
#include <string>

#include "nashcompat/game.hpp"

namespace nashcompat {

// Strategy 0 is G (court the gorgeous woman), strategy 1 is P (a pretty one).
namespace film {
inline constexpr std::size_t G = 0;
inline constexpr std::size_t P = 1;
}  // namespace film

// Strategy 0 is M (my way), strategy 1 is H (the highway).
namespace my_way {
inline constexpr std::size_t M = 0;
inline constexpr std::size_t H = 1;
}  // namespace my_way

// Symmetric courting matrix ((a,a),(c,d),(d,c),(b,b)).
struct FilmMatrixParams {
  double a = 0.0;  // both court G
  double b = 0.0;  // both court P
  double c = 0.0;  // lone G courter
  double d = 0.0;  // P courter while the other courts G

  void validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
      throw ValidationError("film params: entries must be finite");
  }

  // The jealousy regime: b = c and d < a < c.
  static FilmMatrixParams jealousy(double a, double c, double d) {
    if (!(d < a && a < c)) throw ValidationError("film params: require d < a < c");
    FilmMatrixParams p{a, c, c, d};
    p.validate();
    return p;
  }
};

inline NormalFormGame film_game_symmetric(const FilmMatrixParams& p) {
  p.validate();
  return NormalFormGame::bimatrix({{p.a, p.c}, {p.d, p.b}}, {{p.a, p.d}, {p.c, p.b}});
}

inline NormalFormGame film_game_v1() {
  return film_game_symmetric({-1.0, 0.0, 1.0, 0.0});
}

// (P,P) is an equilibrium iff deviating to G does not pay: c <= b.
inline bool pp_equilibrium_condition(const FilmMatrixParams& p) { return p.c <= p.b; }

// (G,G) is an equilibrium iff deviating to P does not pay: a >= d.
inline bool gg_equilibrium_condition(const FilmMatrixParams& p) { return p.a >= p.d; }

inline NormalFormGame my_way_game() {
  return NormalFormGame::bimatrix({{0.0, 1.0}, {-1.0, 0.0}}, {{0.0, -1.0}, {1.0, 0.0}});
}

// Dating-dilemma payoffs: W mutual give, X mutual take, Y lone taker,
// Z lone giver.
struct IDDPayoffs {
  double W = 3.0;
  double X = 1.0;
  double Y = 5.0;
  double Z = 0.0;
};

inline IDDPayoffs idd_payoffs(double W, double X, double Y, double Z) {
  if (!std::isfinite(W) || !std::isfinite(X) || !std::isfinite(Y) || !std::isfinite(Z))
    throw ValidationError("payoffs: W, X, Y, Z must be finite");
  auto fail = [&](const char* which) {
    std::ostringstream os;
    os << "payoffs: violates " << which << " (W=" << W << ", X=" << X << ", Y=" << Y
       << ", Z=" << Z << ")";
    throw ValidationError(os.str());
  };
  if (!(Y > W)) fail("Y > W");
  if (!(W > X)) fail("W > X");
  if (!(X > Z)) fail("X > Z");
  if (!(W > (Y + Z) / 2.0)) fail("W > (Y + Z)/2");
  return {W, X, Y, Z};
}

}  // namespace nashcompat
