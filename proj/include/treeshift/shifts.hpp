#pragma once

// Shift spaces X_F given by finite forbidden block sets.

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "treeshift/patterns.hpp"

namespace treeshift {

/// An M-step shift of finite type. Forbidden blocks are stored normalized to
/// a common depth M; an empty list is the full shift with M = 1.
class ShiftSystem {
 public:
  /// Normalizes mixed depths (see normalize_forbidden).
  ShiftSystem(Signature sig, Alphabet alphabet, std::vector<Block> forbidden);

  static ShiftSystem full(Signature sig, Alphabet alphabet);

  const Signature& signature() const noexcept { return sig_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<Block>& forbidden() const noexcept { return forbidden_; }
  int step() const noexcept { return step_; }
  bool is_full() const noexcept { return forbidden_.empty(); }

  /// Entries of an M-block in ball order.
  bool is_forbidden(const std::vector<Symbol>& pattern) const;

 private:
  struct Lookup;

  Signature sig_;
  Alphabet alphabet_;
  std::vector<Block> forbidden_;
  int step_ = 1;
  std::shared_ptr<const Lookup> lookup_;
};

/// Expands every block of depth m < M into all M-blocks extending it.
/// Duplicates are dropped; the first occurrence keeps its place.
std::vector<Block> normalize_forbidden(Signature sig, const Alphabet& alphabet, const std::vector<Block>& blocks);

/// Some u with |u| <= R has central_block(shift(x,u), depth(B)) = B.
/// False only means "not found within R".
bool contains_block(const Configuration& x, const Block& b, int search_radius);

/// No forbidden M-block sits at any u with |u| + M <= depth(B).
bool is_admissible(const Block& b, const ShiftSystem& sys);

/// First position (ball order) carrying a forbidden block, if any.
std::optional<ReducedWord> first_violation(const Block& b, const ShiftSystem& sys);

/// Every admissible depth-D block, by backtracking over ball order with
/// symbols tried in increasing order. Throws ResourceLimit past ball_cap() results.
std::vector<Block> enumerate_points(const ShiftSystem& sys, int depth);

/// No forbidden block occurs in x at any position u with |u| < D.
bool member_to_depth(const Configuration& x, const ShiftSystem& sys, int depth);

/// Index lists of the M-windows inside Σ^D: window p lists, in ball order of
/// v ∈ Σ^M, the Σ^D index of u_p·v. Only positions with |u_p| + M <= D.
struct WindowTable {
  std::vector<std::size_t> positions;          // Σ^D index of u_p
  std::vector<std::vector<std::size_t>> cells;  // per window
};
const WindowTable& windows(Signature sig, int step, int depth);

}  // namespace treeshift
