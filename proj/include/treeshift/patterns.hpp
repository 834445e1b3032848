#pragma once

// Configurations x: G -> A, central blocks, the shift action and the 2^-n
// ultrametric evaluated to an explicit certainty depth.

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "treeshift/words.hpp"

namespace treeshift {

using Symbol = int;

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);
  /// {"0", "1", ..., "n-1"}.
  static Alphabet numeric(int size);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& name(Symbol s) const { return symbols_.at(static_cast<std::size_t>(s)); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  bool valid(Symbol s) const noexcept { return s >= 0 && static_cast<std::size_t>(s) < symbols_.size(); }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

/// 2^-exponent; exponent 0 is the distance 1.
struct Dyadic {
  int exponent = 0;

  /// Accepts "2^-k" and "1".
  static Dyadic parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
};

/// A distance known exactly, or only bounded above because agreement was
/// verified on all of Σ^D and nothing deeper was examined.
struct DyadicDistance {
  enum class Bound { exact, at_most };

  Bound bound = Bound::exact;
  int exponent = 0;

  static DyadicDistance exact(int n) { return {Bound::exact, n}; }
  static DyadicDistance at_most(int depth) { return {Bound::at_most, depth}; }

  bool is_exact() const noexcept { return bound == Bound::exact; }

  /// d < 2^-k. AtMost(2^-D) counts as below 2^-k iff D > k.
  bool less_than(Dyadic d) const noexcept { return exponent > d.exponent; }
  /// d <= 2^-k.
  bool at_most_value(Dyadic d) const noexcept { return exponent >= d.exponent; }

  /// Total order by (upper bound on the) value: larger key means smaller distance.
  /// AtMost sorts below every Exact distance of the same exponent.
  long key() const noexcept { return 2L * exponent + (is_exact() ? 0 : 1); }

  std::string to_string() const;

  friend bool operator==(const DyadicDistance&, const DyadicDistance&) = default;
};

/// The larger of two distances (the one with the smaller key).
DyadicDistance max_distance(const DyadicDistance& a, const DyadicDistance& b);

/// A total labelling of Σⁿ, stored in ball order.
class Block {
 public:
  Block(Signature sig, int depth, std::vector<Symbol> entries);
  /// Constant block.
  static Block filled(Signature sig, int depth, Symbol s);

  const Signature& signature() const noexcept { return sig_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<Symbol>& entries() const noexcept { return entries_; }
  const Ball& domain() const noexcept { return *ball_; }

  Symbol operator[](std::size_t i) const { return entries_[i]; }
  /// Entry at u; throws if |u| >= depth.
  Symbol at(const ReducedWord& u) const;
  Block with(const ReducedWord& u, Symbol s) const;

  /// Restriction to Σ^d, d <= depth.
  Block restrict(int d) const;

  friend bool operator==(const Block& a, const Block& b) {
    return a.sig_ == b.sig_ && a.depth_ == b.depth_ && a.entries_ == b.entries_;
  }
  friend bool operator<(const Block& a, const Block& b) {
    if (a.depth_ != b.depth_) return a.depth_ < b.depth_;
    return a.entries_ < b.entries_;
  }

 private:
  Signature sig_;
  int depth_;
  std::vector<Symbol> entries_;
  std::shared_ptr<const Ball> ball_;
};

/// Deterministic automaton reading the letters of a reduced word.
class WordAutomaton {
 public:
  /// transitions[state][letter_index] for letters in Signature::letters() order.
  WordAutomaton(Signature sig, int start, std::vector<std::vector<int>> transitions,
                std::vector<Symbol> output);

  const Signature& signature() const noexcept { return sig_; }
  int start() const noexcept { return start_; }
  const std::vector<std::vector<int>>& transitions() const noexcept { return transitions_; }
  const std::vector<Symbol>& output() const noexcept { return output_; }
  std::size_t state_count() const noexcept { return output_.size(); }

  Symbol run(const ReducedWord& u) const;

 private:
  Signature sig_;
  int start_;
  std::vector<std::vector<int>> transitions_;
  std::vector<Symbol> output_;
};

/// A point of the full shift given by a finite description.
///
/// Descriptions form a closed grammar:
///   constant   x(u) = s
///   automaton  x(u) = output of the automaton after reading u
///   override   x(u) = entries[u] when listed (|u| < depth), base otherwise
///   shift      x(u) = base(by·u)
///   splice     x(u) = sites[p](p^-1 u), p the longest prefix of u that is a site
///
/// Values are immutable and cheap to copy.
class Configuration {
 public:
  enum class Kind { constant, automaton, override_, shift, splice };

  static Configuration constant(Signature sig, Symbol s);
  static Configuration automaton(WordAutomaton a);
  static Configuration override_entries(Configuration base, int depth,
                                        std::map<std::string, Symbol, WordOrder> entries);
  /// Override every entry of a block.
  static Configuration override_block(Configuration base, const Block& block);
  static Configuration shifted(Configuration base, ReducedWord by);
  /// Sites must contain e and be closed under prefixes.
  static Configuration splice(Signature sig, std::map<std::string, Configuration, WordOrder> sites);

  const Signature& signature() const noexcept;
  Kind kind() const noexcept;

  Symbol eval(const ReducedWord& u) const;

  // Structure access (serialization).
  Symbol constant_symbol() const;
  const WordAutomaton& automaton_def() const;
  const Configuration& base() const;
  int override_depth() const;
  const std::map<std::string, Symbol, WordOrder>& override_map() const;
  const ReducedWord& shift_word() const;
  const std::map<std::string, Configuration, WordOrder>& splice_sites() const;

  struct Node;

 private:
  explicit Configuration(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Symbol eval(const Configuration& x, const ReducedWord& u);
Block central_block(const Configuration& x, int n);
Configuration shift(const Configuration& x, const ReducedWord& v);
Configuration shift(const Configuration& x, char letter);

/// d(x, y) examined on Σ^D.
DyadicDistance distance(const Configuration& x, const Configuration& y, int depth);
/// Same comparison on two blocks of equal depth.
DyadicDistance distance(const Block& a, const Block& b);

DyadicDistance hausdorff(const std::vector<Configuration>& a, const std::vector<Configuration>& b,
                         int depth);
DyadicDistance hausdorff(const std::vector<Block>& a, const std::vector<Block>& b);

}  // namespace treeshift
