#pragma once

// Named systems and point sets used by tests, acceptance and the CLI gallery.

#include <string>
#include <vector>

#include "treeshift/shifts.hpp"

namespace treeshift {

/// Alphabet {0,1}; forbids any 2-block whose center differs from a neighbor.
/// Its only points are the two constants.
ShiftSystem two_point_system(Signature sig);

/// Alphabet {0,1}; forbids a 1 next to a 1.
ShiftSystem golden_mean_system(Signature sig);

ShiftSystem full_shift(Signature sig, int symbols);

/// x(u) = (|u| + phase) mod 2. Shifting by any letter swaps the two phases.
Configuration parity_point(Signature sig, int phase);

/// x(u) = 1 iff (#generators - #inverses in u) + residue = 0 mod 3.
/// Shifting by a generator adds one to the residue, by an inverse subtracts one.
Configuration mod3_point(Signature sig, int residue);

/// Over group:2: `value` on words a^m b^n with n > 0, 0 elsewhere.
Configuration ab_staircase(Symbol value);

/// How x_{2+i} is obtained from x_2 in the ICT-but-not-CICT family.
///   literal    x_{2+i} = σ_{a^i}(x_2)
///   corrected  x_{2+i} = σ_{a^-i}(x_2)
/// Only the corrected reading makes d(σ_a(x_1), x_{2+i}) small for large i.
enum class Direction { literal, corrected };

Direction parse_direction(const std::string& text);
const char* direction_name(Direction d);

struct PointFamily {
  Signature sig;
  Alphabet alphabet;
  std::vector<std::string> names;
  std::vector<Configuration> points;
  /// System the family lives in.
  ShiftSystem system;
};

/// The free-group family that is ICT but not CICT at ε = 2^-3, D = 5.
/// Points: x0, x1 = σ_B(x0), p = σ_A(x1), p' = σ_AA(x1), x2, x2' = σ_B(x2), x3..x6.
PointFamily ict_not_cict_family(Direction direction);

/// Parity 2-cycle inside the golden mean shift over monoid:2.
PointFamily golden_mean_monoid_family();

/// Mod-3 3-cycle inside the full 2-symbol shift over group:2.
PointFamily full_shift_2_family();

std::vector<std::string> family_names();
PointFamily family_by_name(const std::string& name, Direction direction = Direction::literal);

}  // namespace treeshift
