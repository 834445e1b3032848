#pragma once

// Pseudo-orbits over the Cayley tree and their shadowing by points of an SFT.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treeshift/shifts.hpp"

namespace treeshift {

enum class Tail { shift_extend, none };

/// 𝒪: G -> X given on a prefix-closed set of sites containing e. With the
/// shift-extend tail, 𝒪(u) = σ_{p^-1 u}(𝒪(p)) for p the longest site prefix of u.
class PseudoOrbit {
 public:
  using SiteMap = std::map<std::string, Configuration, WordOrder>;

  PseudoOrbit(Signature sig, SiteMap sites, Tail tail = Tail::shift_extend);

  /// Total assignment on Σ^(R+1) from a rule.
  static PseudoOrbit on_ball(Signature sig, int radius, const std::function<Configuration(const ReducedWord&)>& rule,
                             Tail tail = Tail::shift_extend);

  const Signature& signature() const noexcept { return sig_; }
  const SiteMap& sites() const noexcept { return sites_; }
  Tail tail() const noexcept { return tail_; }
  /// Longest site length.
  int radius() const noexcept { return radius_; }
  /// All of Σ^(R+1) is assigned.
  bool is_total() const;

  bool assigned(const ReducedWord& u) const { return sites_.count(u.str()) > 0; }
  /// Throws ConstructionError for unassigned u when the tail is none.
  Configuration at(const ReducedWord& u) const;

 private:
  Signature sig_;
  SiteMap sites_;
  Tail tail_;
  int radius_ = 0;
};

/// One checked step u -i-> ui.
struct Step {
  ReducedWord from;
  char letter;
  DyadicDistance defect;
};

struct DefectReport {
  DyadicDistance max_defect;
  std::optional<Step> worst;  // first step attaining the maximum, in ball and letter order
  std::size_t sites_checked = 0;
  Dyadic delta;
  int depth = 0;
  bool passed = false;  // max_defect < δ
};

/// Checks d(σ_i(𝒪(u)), 𝒪(ui)) < δ on every step whose two endpoints are both
/// sites, backward steps included. Tail steps are exact by construction.
DefectReport validate_pseudo_orbit(const PseudoOrbit& orbit, Dyadic delta, int depth);

/// Per-shell maximum defect. A step between shells r and r+1 belongs to shell r.
struct ShellDefect {
  int shell;
  DyadicDistance max_defect;
  std::optional<Step> worst;
};
std::vector<ShellDefect> asymptotic_defect(const PseudoOrbit& orbit, int depth);

/// δ = 2^-(k+1) for ε = 2^-k; needs k > M.
Dyadic shadowing_modulus(const ShiftSystem& sys, Dyadic epsilon);

/// x(u) = 𝒪(u)(e), extended by the tail rule.
Configuration trace_point(const PseudoOrbit& orbit);

/// The shadow of a validated 2^-(k+1) pseudo-orbit; σ_u(x) agrees with 𝒪(u) on Σ^k.
Configuration shadow_sft(const PseudoOrbit& orbit, const ShiftSystem& sys, int k);

struct ShellGuarantee {
  int k;           // d(σ_u(x), 𝒪(u)) <= 2^-k ...
  int from_shell;  // ... for every |u| >= from_shell
};

struct AsymptoticShadow {
  Configuration point;
  bool weak_delta_ok;  // the orbit is a 2^-(M+1) pseudo-orbit everywhere
  bool admissible;     // member_to_depth(point, sys, R)
  std::optional<ReducedWord> violation;
  std::vector<ShellDefect> profile;
  std::vector<ShellGuarantee> guarantees;
};

/// Throws DefectTooLarge if the outermost shells are not below 2^-(M+1).
/// Admissibility is scanned to `scan_radius` (default: the orbit radius).
AsymptoticShadow shadow_sft_asymptotic(const PseudoOrbit& orbit, const ShiftSystem& sys, int depth,
                                       std::optional<int> scan_radius = std::nullopt);

struct ShellMismatch {
  int shell;
  ReducedWord site;
  DyadicDistance distance;  // d(σ_u(y), 𝒪(u)), at least 2^-1
};

struct NoShadowCertificate {
  std::vector<Block> points;  // every point of the system, to a depth
  std::vector<std::vector<ShellMismatch>> mismatches;  // per point, one entry per shell 1..R
  bool holds = false;
};

struct Counterexample {
  ShiftSystem system;
  PseudoOrbit orbit;
  char branch;  // the letter j whose branch carries the constant 0
  NoShadowCertificate certificate;
};

/// The two-point system and 𝒪(ju) = 0^G, 𝒪(iu) = 1^G (i != j), 𝒪(e) = 1^G on Σ^(R+1).
Counterexample counterexample_asymptotic(Signature sig, char j = 'a', int radius = 5);

/// Forbidden m-blocks of a (possibly infinite) family.
using BlockFamily = std::function<std::vector<Block>(int m)>;

struct SubBlockCheck {
  int depth;
  ReducedWord at;
  bool admissible;
};

struct Obstruction {
  Block block;
  std::vector<SubBlockCheck> certificate;
};

/// A forbidden m-block, m > n, none of whose proper sub-blocks is forbidden.
/// Searches m in (n, n + span]; nullopt means not found there. Throws
/// SearchBudgetExhausted after `budget` candidate blocks.
std::optional<Obstruction> non_sft_obstruction(const BlockFamily& family, Signature sig, int n, int span = 3,
                                               std::size_t budget = 100000);

/// Family of an SFT: its M-blocks at depth M, nothing else.
BlockFamily sft_family(const ShiftSystem& sys);

/// Group signatures: forbids, for each m >= 2, the m-block that is 1 exactly
/// on the outer shell. Not of finite type.
BlockFamily sphere_family(Signature sig);

}  // namespace treeshift
