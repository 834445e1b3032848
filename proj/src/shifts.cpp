#include "treeshift/shifts.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <tuple>

namespace treeshift {

namespace {

void check_block(const Block& b, Signature sig, const Alphabet& alphabet) {
  if (!(b.signature() == sig)) throw Error(ErrorCode::signature_mismatch, "forbidden block signature differs");
  if (b.depth() < 1) throw Error(ErrorCode::construction_error, "forbidden blocks need depth >= 1");
  for (Symbol s : b.entries())
    if (!alphabet.valid(s))
      throw Error(ErrorCode::construction_error, "forbidden block uses symbol " + std::to_string(s) +
                                                     " outside the alphabet");
}

}  // namespace

std::vector<Block> normalize_forbidden(Signature sig, const Alphabet& alphabet, const std::vector<Block>& blocks) {
  int step = 1;
  for (const auto& b : blocks) {
    check_block(b, sig, alphabet);
    step = std::max(step, b.depth());
  }
  const std::size_t full = shared_ball(sig, step)->size();
  const std::size_t q = alphabet.size();

  std::vector<Block> out;
  std::set<std::vector<Symbol>> seen;
  auto push = [&](std::vector<Symbol> entries) {
    if (seen.insert(entries).second) {
      out.emplace_back(sig, step, std::move(entries));
      if (out.size() > ball_cap())
        throw Error(ErrorCode::resource_limit, "forbidden block expansion exceeds the element cap");
    }
  };
  for (const auto& b : blocks) {
    if (b.depth() == step) {
      push(b.entries());
      continue;
    }
    // Σ^m is a prefix of Σ^M in ball order, so extensions append a tail.
    std::vector<Symbol> entries = b.entries();
    entries.resize(full, 0);
    for (;;) {
      push(entries);
      std::size_t i = full;
      for (; i > b.size(); --i) {
        if (static_cast<std::size_t>(++entries[i - 1]) < q) break;
        entries[i - 1] = 0;
      }
      if (i == b.size()) break;
    }
  }
  return out;
}

struct ShiftSystem::Lookup {
  std::set<std::vector<Symbol>> patterns;
};

ShiftSystem::ShiftSystem(Signature sig, Alphabet alphabet, std::vector<Block> forbidden)
    : sig_(sig), alphabet_(std::move(alphabet)) {
  forbidden_ = normalize_forbidden(sig_, alphabet_, forbidden);
  step_ = forbidden_.empty() ? 1 : forbidden_.front().depth();
  auto lookup = std::make_shared<Lookup>();
  for (const auto& b : forbidden_) lookup->patterns.insert(b.entries());
  lookup_ = std::move(lookup);
}

ShiftSystem ShiftSystem::full(Signature sig, Alphabet alphabet) { return ShiftSystem(sig, std::move(alphabet), {}); }

bool ShiftSystem::is_forbidden(const std::vector<Symbol>& pattern) const {
  return lookup_->patterns.count(pattern) > 0;
}

const WindowTable& windows(Signature sig, int step, int depth) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int>, std::unique_ptr<WindowTable>> cache;
  auto key = std::make_tuple(static_cast<int>(sig.kind), sig.rank, step, depth);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto table = std::make_unique<WindowTable>();
  auto outer = shared_ball(sig, depth);
  auto inner = shared_ball(sig, step);
  for (std::size_t p = 0; p < outer->size(); ++p) {
    const auto& u = (*outer)[p];
    if (static_cast<int>(u.length()) + step > depth) break;
    std::vector<std::size_t> cells;
    cells.reserve(inner->size());
    for (const auto& v : inner->words()) cells.push_back(*outer->index_of(concat(u, v).letters()));
    table->positions.push_back(p);
    table->cells.push_back(std::move(cells));
  }
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(table));
  return *it->second;
}

std::optional<ReducedWord> first_violation(const Block& b, const ShiftSystem& sys) {
  if (!(b.signature() == sys.signature()))
    throw Error(ErrorCode::signature_mismatch, "block signature differs from the system");
  if (b.depth() < sys.step())
    throw Error(ErrorCode::depth_too_small, "block depth " + std::to_string(b.depth()) + " below step " +
                                                std::to_string(sys.step()));
  if (sys.is_full()) return std::nullopt;
  const auto& table = windows(sys.signature(), sys.step(), b.depth());
  std::vector<Symbol> pattern;
  for (std::size_t w = 0; w < table.cells.size(); ++w) {
    pattern.clear();
    for (std::size_t c : table.cells[w]) pattern.push_back(b[c]);
    if (sys.is_forbidden(pattern)) return b.domain()[table.positions[w]];
  }
  return std::nullopt;
}

bool is_admissible(const Block& b, const ShiftSystem& sys) { return !first_violation(b, sys).has_value(); }

bool contains_block(const Configuration& x, const Block& b, int search_radius) {
  if (search_radius < 0) throw Error(ErrorCode::construction_error, "search radius must be >= 0");
  if (!(x.signature() == b.signature())) throw Error(ErrorCode::signature_mismatch, "block signature differs");
  for (const auto& u : shared_ball(x.signature(), search_radius + 1)->words())
    if (central_block(shift(x, u), b.depth()) == b) return true;
  return false;
}

std::vector<Block> enumerate_points(const ShiftSystem& sys, int depth) {
  if (depth < sys.step())
    throw Error(ErrorCode::depth_too_small, "enumeration depth below the step of the system");
  const auto ball = shared_ball(sys.signature(), depth);
  const std::size_t n = ball->size();
  const Symbol q = static_cast<Symbol>(sys.alphabet().size());

  // Windows keyed by the last cell they need, so each is checked exactly once.
  std::vector<std::vector<std::size_t>> due(n);
  const WindowTable* table = nullptr;
  if (!sys.is_full()) {
    table = &windows(sys.signature(), sys.step(), depth);
    for (std::size_t w = 0; w < table->cells.size(); ++w) {
      auto last = *std::max_element(table->cells[w].begin(), table->cells[w].end());
      due[last].push_back(w);
    }
  }

  std::vector<Block> out;
  std::vector<Symbol> entries(n, -1);
  std::vector<Symbol> pattern;
  auto ok_at = [&](std::size_t idx) {
    for (std::size_t w : due[idx]) {
      pattern.clear();
      for (std::size_t c : table->cells[w]) pattern.push_back(entries[c]);
      if (sys.is_forbidden(pattern)) return false;
    }
    return true;
  };
  if (n == 0) {
    out.emplace_back(sys.signature(), depth, entries);
    return out;
  }
  // Iterative backtracking keeps deep balls off the call stack.
  std::size_t idx = 0;
  entries[0] = -1;
  for (;;) {
    ++entries[idx];
    if (entries[idx] >= q) {
      entries[idx] = -1;
      if (idx == 0) break;
      --idx;
      continue;
    }
    if (!ok_at(idx)) continue;
    if (idx + 1 == n) {
      out.emplace_back(sys.signature(), depth, entries);
      if (out.size() > ball_cap())
        throw Error(ErrorCode::resource_limit, "point enumeration exceeds the element cap");
      continue;
    }
    ++idx;
  }
  return out;
}

bool member_to_depth(const Configuration& x, const ShiftSystem& sys, int depth) {
  if (!(x.signature() == sys.signature()))
    throw Error(ErrorCode::signature_mismatch, "configuration signature differs from the system");
  if (depth < sys.step()) throw Error(ErrorCode::depth_too_small, "membership depth below the step of the system");
  // Positions |u| < D need x on Σ^(D+M-1).
  return is_admissible(central_block(x, depth + sys.step() - 1), sys);
}

}  // namespace treeshift
