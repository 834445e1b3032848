#pragma once

// Reduced words over finitely generated free groups and free monoids.
//
// Letters are single characters: generator s_i prints as 'a'+i and its
// inverse as 'A'+i. A ReducedWord stores its letters in reduced form, so two
// words are equal as group (monoid) elements iff their letter strings match.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treeshift/error.hpp"

namespace treeshift {

enum class Kind { group, monoid };

struct Signature {
  Kind kind = Kind::group;
  int rank = 1;

  static Signature group(int rank);
  static Signature monoid(int rank);

  bool is_group() const noexcept { return kind == Kind::group; }

  /// Number of generators-with-inverses, |S|.
  std::size_t letter_count() const noexcept {
    return is_group() ? 2 * static_cast<std::size_t>(rank) : static_cast<std::size_t>(rank);
  }

  /// S in canonical order: s_0..s_{n-1}, then s_0^{-1}..s_{n-1}^{-1}.
  std::vector<char> letters() const;

  bool legal(char letter) const noexcept;

  /// Position of a legal letter in letters().
  std::size_t letter_index(char letter) const;

  /// "group:2" / "monoid:3".
  std::string to_string() const;
  static Signature parse(std::string_view text);

  friend bool operator==(const Signature&, const Signature&) = default;
};

constexpr int kMaxRank = 26;

/// 'a' <-> 'A'.
char inverse_letter(char letter) noexcept;
bool is_inverse_letter(char letter) noexcept;

/// Sort key realizing the canonical letter order (generators before inverses).
int letter_order(char letter) noexcept;

class ReducedWord {
 public:
  explicit ReducedWord(Signature sig) : sig_(sig) {}

  static ReducedWord identity(Signature sig) { return ReducedWord(sig); }

  /// Letters must already be reduced and legal; throws otherwise.
  static ReducedWord from_reduced(Signature sig, std::string letters);

  const Signature& signature() const noexcept { return sig_; }
  const std::string& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }
  char operator[](std::size_t i) const { return letters_[i]; }
  char first() const { return letters_.front(); }
  char last() const { return letters_.back(); }

  /// First k letters (k clamped to the length).
  ReducedWord prefix(std::size_t k) const;
  /// Letters from position k on.
  ReducedWord suffix(std::size_t k) const;

  /// "" for the identity (JSON form).
  const std::string& str() const noexcept { return letters_; }
  /// "e" for the identity.
  std::string human() const { return letters_.empty() ? std::string("e") : letters_; }

  friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
    return a.sig_ == b.sig_ && a.letters_ == b.letters_;
  }

 private:
  ReducedWord(Signature sig, std::string letters) : sig_(sig), letters_(std::move(letters)) {}

  Signature sig_;
  std::string letters_;

  friend ReducedWord reduce(std::string_view, Signature);
  friend ReducedWord concat(const ReducedWord&, const ReducedWord&);
  friend ReducedWord invert(const ReducedWord&);
};

/// Length-then-letter-order comparison on letter strings.
bool word_less(std::string_view a, std::string_view b) noexcept;

struct WordOrder {
  bool operator()(const ReducedWord& a, const ReducedWord& b) const noexcept {
    return word_less(a.letters(), b.letters());
  }
  bool operator()(const std::string& a, const std::string& b) const noexcept {
    return word_less(a, b);
  }
};

/// Free reduction of a raw letter sequence.
ReducedWord reduce(std::string_view letters, Signature sig);
ReducedWord concat(const ReducedWord& u, const ReducedWord& v);
ReducedWord invert(const ReducedWord& u);
bool is_prefix(const ReducedWord& u, const ReducedWord& v);

/// Single-letter word.
ReducedWord letter_word(Signature sig, char letter);

/// Configurable element cap on balls; defaults to 10^6.
std::size_t ball_cap() noexcept;
void set_ball_cap(std::size_t cap) noexcept;

/// |Σⁿ|, or nullopt on overflow.
std::optional<std::size_t> ball_size(Signature sig, int n) noexcept;

/// Σⁿ: reduced words of length < n in length-then-letter order.
std::vector<ReducedWord> ball(int n, Signature sig);

/// Σⁿ with a reverse index. Shared instances come from shared_ball().
class Ball {
 public:
  Ball(Signature sig, int n);

  const Signature& signature() const noexcept { return sig_; }
  int radius() const noexcept { return n_; }
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<ReducedWord>& words() const noexcept { return words_; }
  const ReducedWord& operator[](std::size_t i) const { return words_[i]; }
  std::optional<std::size_t> index_of(const std::string& letters) const;
  /// Number of words of length < len (clamped to n).
  std::size_t count_shorter(int len) const;

 private:
  Signature sig_;
  int n_;
  std::vector<ReducedWord> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> shell_start_;
};

std::shared_ptr<const Ball> shared_ball(Signature sig, int n);

/// head·cycle·cycle·… with a nonempty cycle, reduced at every seam.
class EventuallyPeriodicWord {
 public:
  EventuallyPeriodicWord(ReducedWord head, ReducedWord cycle);

  const ReducedWord& head() const noexcept { return head_; }
  const ReducedWord& cycle() const noexcept { return cycle_; }

 private:
  ReducedWord head_;
  ReducedWord cycle_;
};

ReducedWord word_prefix(const EventuallyPeriodicWord& w, std::size_t k);

}  // namespace treeshift
