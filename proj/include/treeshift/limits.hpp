#pragma once

// Finite-range approximations of ω(x), ω_w(x), ω_{F_w}(x), and constructions
// realizing finite chain-transitive sets as such limit sets.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "treeshift/transitivity.hpp"

namespace treeshift {

enum class LimitKind { omega, omega_w, omega_Fw };

/// "omega", "omega-w", "omega-fw".
const char* limit_kind_name(LimitKind kind);
LimitKind parse_limit_kind(const std::string& text);

struct LimitMember {
  Block block;
  ReducedWord word;  // first candidate word producing the block
};

struct LimitSetApproximation {
  LimitKind kind;
  int inner;  // n
  int outer;  // N
  int depth;  // D
  std::vector<LimitMember> members;  // distinct blocks, first-occurrence order
  std::size_t candidates = 0;

  std::vector<Block> blocks() const;
};

/// Candidate words u of each kind, in order:
///   omega     n < |u| <= N, ball order
///   omega_w   w|_k for n < k <= N
///   omega_Fw  u|_n = w|_n with n < |u| <= N, ball order
/// `w` must have at least N letters for omega_w and n for omega_Fw.
std::vector<ReducedWord> candidate_words(LimitKind kind, Signature sig, const std::optional<ReducedWord>& w, int n,
                                         int N);

LimitSetApproximation limit_approx(LimitKind kind, const Configuration& x, const std::optional<ReducedWord>& w, int n,
                                   int N, int D);
LimitSetApproximation omega_approx(const Configuration& x, int n, int N, int D);
LimitSetApproximation omega_w_approx(const Configuration& x, const ReducedWord& w, int n, int N, int D);
LimitSetApproximation omega_w_approx(const Configuration& x, const EventuallyPeriodicWord& w, int n, int N, int D);
LimitSetApproximation omega_Fw_approx(const Configuration& x, const ReducedWord& w, int n, int N, int D);
LimitSetApproximation omega_Fw_approx(const Configuration& x, const EventuallyPeriodicWord& w, int n, int N, int D);

struct ScanRow {
  int inner;
  std::size_t members;
  std::optional<DyadicDistance> step;  // Hausdorff distance to the previous row
};

/// Rows for n = 0 .. N_max-1 over the ranges (n, N_max]. The scan is
/// stabilized at the first n >= 1 whose row equals the previous one.
struct StabilizationScan {
  LimitKind kind;
  int depth;
  int outer;
  std::vector<ScanRow> rows;
  std::optional<int> stabilized_at;
};

StabilizationScan stabilization_scan(LimitKind kind, const Configuration& x, const std::optional<ReducedWord>& w,
                                     int D, int N_max);

struct InvarianceFailure {
  std::size_t member;
  ReducedWord word;
  std::optional<char> letter;
  std::string reason;
};

struct InvarianceReport {
  LimitKind kind;
  int depth;
  bool passed = false;
  std::size_t checks = 0;
  std::vector<InvarianceFailure> failures;
};

/// Shifts every member (depth D+1) by one letter and matches it at depth D:
///   omega, omega_Fw  every letter must land on a member
///   omega_w, group   at least two distinct letters per member
///   omega_w, monoid  one letter forward and one predecessor per member
/// With a system, members must also be admissible at depth max(D, M).
InvarianceReport invariance_check(const LimitSetApproximation& approx, const ShiftSystem* sys, int D);

struct RealizationStage {
  int exponent;               // steps of this stage are below 2^-exponent
  std::vector<int> cover;     // indices into Y
  std::vector<std::string> words;  // chain words, or u_i / u_j / u_y sites
  int radius = 0;             // pseudo-orbit radius (IBT stages)
};

struct RealizationOutput {
  std::string mode;          // "cict", "ibt-star", "ibt-circ", plus "+shadow" variants
  LimitKind kind;
  int resolution;            // k
  ReducedWord word_prefix;
  Configuration point;
  PseudoOrbit orbit;
  std::vector<int> labels;   // Y index per orbit site, in site order
  int inner;                 // n*
  int outer;                 // N*
  LimitSetApproximation approximation;       // at depth k
  LimitSetApproximation approximation_fine;  // at depth k+1, for invariance at depth k
  DyadicDistance hausdorff;  // Y against the approximation, depth k
  bool within_bound = false;
  int declared_depth = 0;
  bool admissible = false;
  DefectReport orbit_report;  // the stitched orbit checked at 2^-(M+1)
  std::vector<RealizationStage> stages;
  std::vector<std::string> log;
};

/// Y = ω_w(x̄) at resolution k for a finite CICT set Y inside an SFT.
/// Throws NotCict.
RealizationOutput realize_cict_as_omega_w(const std::vector<Configuration>& Y, const ShiftSystem& sys, int k);

/// Test hook applied to each stage witness before stitching.
using WitnessHook = std::function<void(int stage, IbtWitness& witness)>;

/// Y = ω_{F_w}(x̄) at resolution k: IBT* stitching over free groups, IBT° over
/// free monoids. Throws NotIbtStar / NotIbtCirc, or SeamConflict when a
/// witness breaks the prefix conditions the stitching relies on.
RealizationOutput realize_ibt_as_omega_Fw(const std::vector<Configuration>& Y, const ShiftSystem& sys, int k,
                                          const WitnessHook& hook = {});

struct ShadowResult {
  Configuration point;
  int from_shell = 0;  // σ_u(point) matches 𝒪(u) at the requested depth for |u| >= from_shell
};

/// A shadowing property supplied by the acting system.
struct ShadowingOracle {
  std::string name;
  int step = 1;              // scale of the coarsest usable stage, as in an M-step SFT
  bool asymptotic = false;   // accepts orbits whose defects only shrink far out
  std::function<Dyadic(Dyadic epsilon)> modulus;
  /// Shadow of `orbit` matching it on Σ^depth.
  std::function<ShadowResult(const PseudoOrbit& orbit, int depth)> shadow;
  std::optional<ShiftSystem> system;
};

ShadowingOracle sft_oracle(const ShiftSystem& sys);
ShadowingOracle sft_asymptotic_oracle(const ShiftSystem& sys);

enum class RealizeMode { cict, ibt };

/// Builds the construction's pseudo-orbit and hands it to the oracle.
/// Throws OracleUnavailable without a shadow function.
RealizationOutput realize_with_shadowing(const std::vector<Configuration>& Y, const ShadowingOracle& oracle, int k,
                                         RealizeMode mode);

}  // namespace treeshift
