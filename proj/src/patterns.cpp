#include "treeshift/patterns.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <variant>

namespace treeshift {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw Error(ErrorCode::construction_error, "alphabet must be nonempty");
  std::set<std::string> seen(symbols_.begin(), symbols_.end());
  if (seen.size() != symbols_.size())
    throw Error(ErrorCode::construction_error, "alphabet symbols must be unique");
}

Alphabet Alphabet::numeric(int size) {
  std::vector<std::string> names;
  for (int i = 0; i < size; ++i) names.push_back(std::to_string(i));
  return Alphabet(std::move(names));
}

Dyadic Dyadic::parse(std::string_view text) {
  if (text == "1") return Dyadic{0};
  if (text.substr(0, 3) != "2^-")
    throw Error(ErrorCode::parse_error, "dyadic values are written 2^-k, got '" + std::string(text) + "'");
  auto digits = text.substr(3);
  int k = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || k < 0)
    throw Error(ErrorCode::parse_error, "bad dyadic exponent in '" + std::string(text) + "'");
  return Dyadic{k};
}

std::string Dyadic::to_string() const {
  return exponent == 0 ? std::string("1") : "2^-" + std::to_string(exponent);
}

std::string DyadicDistance::to_string() const {
  std::string v = Dyadic{exponent}.to_string();
  return is_exact() ? v : "<=" + v;
}

DyadicDistance max_distance(const DyadicDistance& a, const DyadicDistance& b) {
  return a.key() <= b.key() ? a : b;
}

// Block

Block::Block(Signature sig, int depth, std::vector<Symbol> entries)
    : sig_(sig), depth_(depth), entries_(std::move(entries)), ball_(shared_ball(sig, depth)) {
  if (depth < 0) throw Error(ErrorCode::construction_error, "block depth must be >= 0");
  if (entries_.size() != ball_->size())
    throw Error(ErrorCode::construction_error,
                "block of depth " + std::to_string(depth) + " needs " + std::to_string(ball_->size()) +
                    " entries, got " + std::to_string(entries_.size()));
}

Block Block::filled(Signature sig, int depth, Symbol s) {
  auto size = shared_ball(sig, depth)->size();
  return Block(sig, depth, std::vector<Symbol>(size, s));
}

Symbol Block::at(const ReducedWord& u) const {
  auto idx = ball_->index_of(u.letters());
  if (!idx || !(u.signature() == sig_))
    throw Error(ErrorCode::construction_error, "word '" + u.human() + "' outside block domain");
  return entries_[*idx];
}

Block Block::with(const ReducedWord& u, Symbol s) const {
  auto idx = ball_->index_of(u.letters());
  if (!idx) throw Error(ErrorCode::construction_error, "word '" + u.human() + "' outside block domain");
  auto copy = entries_;
  copy[*idx] = s;
  return Block(sig_, depth_, std::move(copy));
}

Block Block::restrict(int d) const {
  if (d > depth_) throw Error(ErrorCode::depth_too_small, "cannot restrict a block to a larger depth");
  auto n = ball_->count_shorter(d);
  return Block(sig_, d, std::vector<Symbol>(entries_.begin(), entries_.begin() + static_cast<long>(n)));
}

// WordAutomaton

WordAutomaton::WordAutomaton(Signature sig, int start, std::vector<std::vector<int>> transitions,
                             std::vector<Symbol> output)
    : sig_(sig), start_(start), transitions_(std::move(transitions)), output_(std::move(output)) {
  const int states = static_cast<int>(output_.size());
  if (states == 0 || transitions_.size() != output_.size())
    throw Error(ErrorCode::construction_error, "automaton needs one transition row and output per state");
  if (start_ < 0 || start_ >= states) throw Error(ErrorCode::construction_error, "automaton start out of range");
  for (const auto& row : transitions_) {
    if (row.size() != sig_.letter_count())
      throw Error(ErrorCode::construction_error, "automaton transition must be total on the letters");
    for (int t : row)
      if (t < 0 || t >= states) throw Error(ErrorCode::construction_error, "automaton target out of range");
  }
}

Symbol WordAutomaton::run(const ReducedWord& u) const {
  int state = start_;
  for (char c : u.letters()) state = transitions_[static_cast<std::size_t>(state)][sig_.letter_index(c)];
  return output_[static_cast<std::size_t>(state)];
}

// Configuration

namespace {
struct ConstantDesc {
  Symbol symbol;
};
struct AutomatonDesc {
  WordAutomaton automaton;
};
struct OverrideDesc {
  Configuration base;
  int depth;
  std::map<std::string, Symbol, WordOrder> entries;
};
struct ShiftDesc {
  Configuration base;
  ReducedWord by;
};
struct SpliceDesc {
  std::map<std::string, Configuration, WordOrder> sites;
  std::size_t max_site_length;
};
}  // namespace

struct Configuration::Node {
  Signature sig;
  std::variant<ConstantDesc, AutomatonDesc, OverrideDesc, ShiftDesc, SpliceDesc> desc;
};

Configuration Configuration::constant(Signature sig, Symbol s) {
  if (s < 0) throw Error(ErrorCode::construction_error, "symbol must be non-negative");
  return Configuration(std::make_shared<const Node>(Node{sig, ConstantDesc{s}}));
}

Configuration Configuration::automaton(WordAutomaton a) {
  Signature sig = a.signature();
  return Configuration(std::make_shared<const Node>(Node{sig, AutomatonDesc{std::move(a)}}));
}

Configuration Configuration::override_entries(Configuration base, int depth,
                                              std::map<std::string, Symbol, WordOrder> entries) {
  Signature sig = base.signature();
  for (const auto& [w, s] : entries) {
    auto word = ReducedWord::from_reduced(sig, w);
    if (static_cast<int>(word.length()) >= depth)
      throw Error(ErrorCode::construction_error, "override entry '" + word.human() + "' outside depth");
    if (s < 0) throw Error(ErrorCode::construction_error, "symbol must be non-negative");
  }
  return Configuration(
      std::make_shared<const Node>(Node{sig, OverrideDesc{std::move(base), depth, std::move(entries)}}));
}

Configuration Configuration::override_block(Configuration base, const Block& block) {
  std::map<std::string, Symbol, WordOrder> entries;
  for (std::size_t i = 0; i < block.size(); ++i) entries.emplace(block.domain()[i].letters(), block[i]);
  return override_entries(std::move(base), block.depth(), std::move(entries));
}

Configuration Configuration::shifted(Configuration base, ReducedWord by) {
  if (!(base.signature() == by.signature()))
    throw Error(ErrorCode::signature_mismatch, "shift word signature differs from configuration");
  if (base.kind() == Kind::shift) {
    const auto& inner = std::get<ShiftDesc>(base.node_->desc);
    return shifted(inner.base, concat(inner.by, by));
  }
  if (by.is_identity()) return base;
  Signature sig = base.signature();
  return Configuration(std::make_shared<const Node>(Node{sig, ShiftDesc{std::move(base), std::move(by)}}));
}

Configuration Configuration::splice(Signature sig, std::map<std::string, Configuration, WordOrder> sites) {
  if (!sites.count(""))
    throw Error(ErrorCode::construction_error, "splice sites must contain the identity");
  std::size_t longest = 0;
  for (const auto& [w, cfg] : sites) {
    auto word = ReducedWord::from_reduced(sig, w);
    if (!(cfg.signature() == sig)) throw Error(ErrorCode::signature_mismatch, "splice site signature");
    if (!word.is_identity() && !sites.count(w.substr(0, w.size() - 1)))
      throw Error(ErrorCode::construction_error, "splice sites must be prefix-closed (missing parent of '" + w + "')");
    longest = std::max(longest, w.size());
  }
  return Configuration(std::make_shared<const Node>(Node{sig, SpliceDesc{std::move(sites), longest}}));
}

const Signature& Configuration::signature() const noexcept { return node_->sig; }

Configuration::Kind Configuration::kind() const noexcept {
  return static_cast<Kind>(node_->desc.index());
}

Symbol Configuration::eval(const ReducedWord& u) const {
  if (!(u.signature() == node_->sig))
    throw Error(ErrorCode::signature_mismatch, "word signature differs from configuration");
  const Node* node = node_.get();
  ReducedWord word = u;
  for (;;) {
    switch (node->desc.index()) {
      case 0:
        return std::get<ConstantDesc>(node->desc).symbol;
      case 1:
        return std::get<AutomatonDesc>(node->desc).automaton.run(word);
      case 2: {
        const auto& o = std::get<OverrideDesc>(node->desc);
        if (static_cast<int>(word.length()) < o.depth) {
          auto it = o.entries.find(word.letters());
          if (it != o.entries.end()) return it->second;
        }
        node = o.base.node_.get();
        break;
      }
      case 3: {
        const auto& s = std::get<ShiftDesc>(node->desc);
        word = concat(s.by, word);
        node = s.base.node_.get();
        break;
      }
      default: {
        const auto& sp = std::get<SpliceDesc>(node->desc);
        std::size_t len = std::min(word.length(), sp.max_site_length);
        for (;; --len) {
          auto it = sp.sites.find(word.letters().substr(0, len));
          if (it != sp.sites.end()) {
            word = word.suffix(len);
            node = it->second.node_.get();
            break;
          }
        }
        break;
      }
    }
  }
}

Symbol Configuration::constant_symbol() const { return std::get<ConstantDesc>(node_->desc).symbol; }
const WordAutomaton& Configuration::automaton_def() const {
  return std::get<AutomatonDesc>(node_->desc).automaton;
}
const Configuration& Configuration::base() const {
  if (kind() == Kind::override_) return std::get<OverrideDesc>(node_->desc).base;
  return std::get<ShiftDesc>(node_->desc).base;
}
int Configuration::override_depth() const { return std::get<OverrideDesc>(node_->desc).depth; }
const std::map<std::string, Symbol, WordOrder>& Configuration::override_map() const {
  return std::get<OverrideDesc>(node_->desc).entries;
}
const ReducedWord& Configuration::shift_word() const { return std::get<ShiftDesc>(node_->desc).by; }
const std::map<std::string, Configuration, WordOrder>& Configuration::splice_sites() const {
  return std::get<SpliceDesc>(node_->desc).sites;
}

Symbol eval(const Configuration& x, const ReducedWord& u) { return x.eval(u); }

Block central_block(const Configuration& x, int n) {
  auto domain = shared_ball(x.signature(), n);
  std::vector<Symbol> entries;
  entries.reserve(domain->size());
  for (const auto& u : domain->words()) entries.push_back(x.eval(u));
  return Block(x.signature(), n, std::move(entries));
}

Configuration shift(const Configuration& x, const ReducedWord& v) { return Configuration::shifted(x, v); }

Configuration shift(const Configuration& x, char letter) {
  return Configuration::shifted(x, letter_word(x.signature(), letter));
}

DyadicDistance distance(const Configuration& x, const Configuration& y, int depth) {
  if (!(x.signature() == y.signature()))
    throw Error(ErrorCode::signature_mismatch, "distance between configurations of different signatures");
  if (depth < 1) throw Error(ErrorCode::depth_too_small, "distance needs certainty depth >= 1");
  auto domain = shared_ball(x.signature(), depth);
  for (const auto& u : domain->words())
    if (x.eval(u) != y.eval(u)) return DyadicDistance::exact(static_cast<int>(u.length()));
  return DyadicDistance::at_most(depth);
}

DyadicDistance distance(const Block& a, const Block& b) {
  if (!(a.signature() == b.signature()) || a.depth() != b.depth())
    throw Error(ErrorCode::signature_mismatch, "block distance needs equal signature and depth");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return DyadicDistance::exact(static_cast<int>(a.domain()[i].length()));
  return DyadicDistance::at_most(a.depth());
}

namespace {

template <class T, class Dist>
DyadicDistance hausdorff_impl(const std::vector<T>& a, const std::vector<T>& b, Dist dist) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::empty_set, "hausdorff distance of an empty set");
  // Pairwise table once, then both directed sup-inf passes.
  std::vector<std::vector<DyadicDistance>> table(a.size(), std::vector<DyadicDistance>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) table[i][j] = dist(a[i], b[j]);
  std::optional<DyadicDistance> worst;
  auto consider = [&](const DyadicDistance& d) { worst = worst ? max_distance(*worst, d) : d; };
  for (std::size_t i = 0; i < a.size(); ++i) {
    DyadicDistance best = table[i][0];
    for (std::size_t j = 1; j < b.size(); ++j)
      if (table[i][j].key() > best.key()) best = table[i][j];
    consider(best);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    DyadicDistance best = table[0][j];
    for (std::size_t i = 1; i < a.size(); ++i)
      if (table[i][j].key() > best.key()) best = table[i][j];
    consider(best);
  }
  return *worst;
}

}  // namespace

DyadicDistance hausdorff(const std::vector<Configuration>& a, const std::vector<Configuration>& b, int depth) {
  return hausdorff_impl(a, b, [depth](const Configuration& x, const Configuration& y) {
    return distance(x, y, depth);
  });
}

DyadicDistance hausdorff(const std::vector<Block>& a, const std::vector<Block>& b) {
  return hausdorff_impl(a, b, [](const Block& x, const Block& y) { return distance(x, y); });
}

}  // namespace treeshift
