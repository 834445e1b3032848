#pragma once

// Exhaustive pseudo-orbit sweep shared by the orbit tests and the acceptance
// runner. The re-checkers here resolve sites on their own and never call the
// library's tail rule or splice evaluation.

#include <map>
#include <string>
#include <vector>

#include "treeshift/fixtures.hpp"
#include "treeshift/orbits.hpp"

namespace sweep {

using namespace treeshift;

struct Candidates {
  std::string name;
  ShiftSystem system;
  std::vector<Configuration> points;  // all in the system
};

inline Candidates two_point_candidates() {
  auto sig = Signature::group(2);
  return {"two-point", two_point_system(sig), {Configuration::constant(sig, 0), Configuration::constant(sig, 1)}};
}

inline Candidates golden_mean_candidates() {
  auto sig = Signature::monoid(2);
  auto zero = Configuration::constant(sig, 0);
  return {"golden-mean-monoid",
          golden_mean_system(sig),
          {zero, parity_point(sig, 0), parity_point(sig, 1),
           // An isolated 1 five letters down: within 2^-5 of zero.
           Configuration::override_entries(zero, 6, {{"aaaaa", 1}})}};
}

/// Value sites of a pseudo-orbit, by site index into a ball.
struct Orbit {
  std::vector<int> choice;  // base index per site of Σ^(R+1)
};

/// Every assignment Σ^(R+1) -> base whose checked steps (both directions
/// for groups) are below δ, by backtracking in ball order.
inline std::vector<Orbit> enumerate_orbits(Signature sig, const std::vector<Configuration>& base, int radius,
                                           Dyadic delta, std::size_t cap = 200000) {
  const int depth = delta.exponent + 1;
  const auto ball = shared_ball(sig, radius + 1);
  const auto letters = sig.letters();
  const std::size_t q = base.size();
  // ok[p][i][r]: d(σ_i(base p), base r) < δ
  std::vector<std::vector<std::vector<bool>>> ok(q, std::vector<std::vector<bool>>(letters.size(), std::vector<bool>(q)));
  for (std::size_t p = 0; p < q; ++p)
    for (std::size_t i = 0; i < letters.size(); ++i)
      for (std::size_t r = 0; r < q; ++r)
        ok[p][i][r] = distance(shift(base[p], letters[i]), base[r], depth).less_than(delta);

  std::vector<int> parent(ball->size(), -1), via(ball->size(), -1);
  for (std::size_t s = 1; s < ball->size(); ++s) {
    const auto& u = (*ball)[s];
    parent[s] = static_cast<int>(*ball->index_of(u.prefix(u.length() - 1).str()));
    via[s] = static_cast<int>(sig.letter_index(u.last()));
  }

  std::vector<Orbit> out;
  std::vector<int> choice(ball->size(), -1);
  std::size_t s = 0;
  for (;;) {
    ++choice[s];
    if (choice[s] >= static_cast<int>(q)) {
      choice[s] = -1;
      if (s == 0) break;
      --s;
      continue;
    }
    if (s > 0) {
      int p = choice[parent[s]], c = choice[s];
      char letter = (*ball)[s].last();
      if (!ok[p][via[s]][c]) continue;
      if (sig.is_group() && !ok[c][sig.letter_index(inverse_letter(letter))][p]) continue;
    }
    if (s + 1 == ball->size()) {
      out.push_back({choice});
      if (out.size() >= cap) return out;
      continue;
    }
    ++s;
  }
  return out;
}

inline PseudoOrbit to_pseudo_orbit(Signature sig, const std::vector<Configuration>& base, int radius,
                                   const Orbit& o) {
  const auto ball = shared_ball(sig, radius + 1);
  PseudoOrbit::SiteMap sites;
  for (std::size_t s = 0; s < ball->size(); ++s) sites.emplace((*ball)[s].str(), base[o.choice[s]]);
  return PseudoOrbit(sig, std::move(sites));
}

/// 𝒪(u) evaluated at v, resolving the longest assigned prefix of u by hand.
inline Symbol orbit_value(const PseudoOrbit::SiteMap& sites, const ReducedWord& u, const ReducedWord& v) {
  std::string s = u.str();
  while (!sites.count(s)) s.pop_back();
  auto rest = ReducedWord::from_reduced(u.signature(), u.str().substr(s.size()));
  return sites.at(s).eval(concat(rest, v));
}

/// σ_u(x) and 𝒪(u) agree on Σ^k for every u in Σ^(R+2).
inline bool shadow_rechecks(const PseudoOrbit& orbit, const Configuration& x, int k) {
  const auto sig = orbit.signature();
  const auto inner = ball(k, sig);
  for (const auto& u : ball(orbit.radius() + 2, sig))
    for (const auto& v : inner)
      if (x.eval(concat(u, v)) != orbit_value(orbit.sites(), u, v)) return false;
  return true;
}

/// 𝒪(u)(v) = 𝒪(uv)(e) for u in Σ^(R+1), |v| < m - 1.
inline std::size_t tracing_failures(const PseudoOrbit& orbit, int m, std::size_t* checks = nullptr) {
  const auto sig = orbit.signature();
  const auto e = ReducedWord::identity(sig);
  std::size_t bad = 0;
  for (const auto& u : ball(orbit.radius() + 1, sig))
    for (const auto& v : ball(m - 1, sig)) {
      if (checks) ++*checks;
      if (orbit_value(orbit.sites(), u, v) != orbit_value(orbit.sites(), concat(u, v), e)) ++bad;
    }
  return bad;
}

struct SweepResult {
  std::size_t base_sets = 0;
  std::size_t orbits = 0;
  std::size_t shadow_failures = 0;
  std::size_t validation_mismatches = 0;
  std::size_t tracing_checks = 0;
  std::size_t tracing_failures = 0;
};

/// Criterion sweep: base sets of size <= 3, R = 3, k = M + 1.
inline SweepResult run_sweep(const Candidates& c, int radius = 3) {
  SweepResult res;
  const auto sig = c.system.signature();
  const int k = c.system.step() + 1;
  const std::size_t n = c.points.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) > 3) continue;
    std::vector<Configuration> base;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) base.push_back(c.points[i]);
    ++res.base_sets;
    for (const auto& o : enumerate_orbits(sig, base, radius, Dyadic{k + 1})) {
      ++res.orbits;
      auto orbit = to_pseudo_orbit(sig, base, radius, o);
      if (!validate_pseudo_orbit(orbit, Dyadic{k + 1}, k + 2).passed) ++res.validation_mismatches;
      try {
        auto x = shadow_sft(orbit, c.system, k);
        if (!shadow_rechecks(orbit, x, k) || !member_to_depth(x, c.system, radius + 1)) ++res.shadow_failures;
      } catch (const Error&) {
        ++res.shadow_failures;
      }
    }
    for (int m : {2, 3})
      for (const auto& o : enumerate_orbits(sig, base, radius, Dyadic{m}))
        res.tracing_failures += tracing_failures(to_pseudo_orbit(sig, base, radius, o), m, &res.tracing_checks);
  }
  return res;
}

}  // namespace sweep
