#include "treeshift/words.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace treeshift {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_letter: return "InvalidLetter";
    case ErrorCode::signature_mismatch: return "SignatureMismatch";
    case ErrorCode::monoid_has_no_inverses: return "MonoidHasNoInverses";
    case ErrorCode::resource_limit: return "ResourceLimit";
    case ErrorCode::construction_error: return "ConstructionError";
    case ErrorCode::depth_too_small: return "DepthTooSmall";
    case ErrorCode::empty_set: return "EmptySet";
    case ErrorCode::resolution_too_coarse: return "ResolutionTooCoarse";
    case ErrorCode::defect_too_large: return "DefectTooLarge";
    case ErrorCode::search_budget_exhausted: return "SearchBudgetExhausted";
    case ErrorCode::resolution_depth_mismatch: return "ResolutionDepthMismatch";
    case ErrorCode::duplicate_points: return "DuplicatePoints";
    case ErrorCode::radius_too_small: return "RadiusTooSmall";
    case ErrorCode::not_cict: return "NotCict";
    case ErrorCode::not_ibt_star: return "NotIbtStar";
    case ErrorCode::not_ibt_circ: return "NotIbtCirc";
    case ErrorCode::seam_conflict: return "SeamConflict";
    case ErrorCode::oracle_unavailable: return "OracleUnavailable";
    case ErrorCode::render_cap_exceeded: return "RenderCapExceeded";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::usage: return "Usage";
  }
  return "Unknown";
}

Signature Signature::group(int rank) {
  if (rank < 1 || rank > kMaxRank)
    throw Error(ErrorCode::construction_error, "rank must be in [1, 26]");
  return Signature{Kind::group, rank};
}

Signature Signature::monoid(int rank) {
  if (rank < 1 || rank > kMaxRank)
    throw Error(ErrorCode::construction_error, "rank must be in [1, 26]");
  return Signature{Kind::monoid, rank};
}

std::vector<char> Signature::letters() const {
  std::vector<char> out;
  out.reserve(letter_count());
  for (int i = 0; i < rank; ++i) out.push_back(static_cast<char>('a' + i));
  if (is_group())
    for (int i = 0; i < rank; ++i) out.push_back(static_cast<char>('A' + i));
  return out;
}

bool Signature::legal(char letter) const noexcept {
  if (letter >= 'a' && letter < 'a' + rank) return true;
  return is_group() && letter >= 'A' && letter < 'A' + rank;
}

std::size_t Signature::letter_index(char letter) const {
  if (!legal(letter))
    throw Error(ErrorCode::invalid_letter, std::string("letter '") + letter + "' not in " + to_string());
  if (letter >= 'a') return static_cast<std::size_t>(letter - 'a');
  return static_cast<std::size_t>(rank + (letter - 'A'));
}

std::string Signature::to_string() const {
  return (is_group() ? "group:" : "monoid:") + std::to_string(rank);
}

Signature Signature::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorCode::parse_error, "signature must look like group:N or monoid:N");
  auto kind = text.substr(0, colon);
  auto num = text.substr(colon + 1);
  int rank = 0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), rank);
  if (ec != std::errc() || ptr != num.data() + num.size())
    throw Error(ErrorCode::parse_error, "bad rank in signature '" + std::string(text) + "'");
  if (kind == "group") return group(rank);
  if (kind == "monoid") return monoid(rank);
  throw Error(ErrorCode::parse_error, "unknown signature kind '" + std::string(kind) + "'");
}

char inverse_letter(char letter) noexcept {
  if (letter >= 'a' && letter <= 'z') return static_cast<char>(letter - 'a' + 'A');
  return static_cast<char>(letter - 'A' + 'a');
}

bool is_inverse_letter(char letter) noexcept { return letter >= 'A' && letter <= 'Z'; }

int letter_order(char letter) noexcept {
  return letter >= 'a' ? letter - 'a' : kMaxRank + (letter - 'A');
}

bool word_less(std::string_view a, std::string_view b) noexcept {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return letter_order(a[i]) < letter_order(b[i]);
  }
  return false;
}

namespace {

void check_letter(char c, Signature sig) {
  if (!sig.legal(c)) {
    if (!sig.is_group() && c >= 'A' && c <= 'Z')
      throw Error(ErrorCode::invalid_letter,
                  std::string("inverse letter '") + c + "' under monoid signature");
    throw Error(ErrorCode::invalid_letter, std::string("letter '") + c + "' not in " + sig.to_string());
  }
}

void require_same(const Signature& a, const Signature& b) {
  if (!(a == b))
    throw Error(ErrorCode::signature_mismatch, a.to_string() + " vs " + b.to_string());
}

}  // namespace

ReducedWord ReducedWord::from_reduced(Signature sig, std::string letters) {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    check_letter(letters[i], sig);
    if (i > 0 && sig.is_group() && letters[i] == inverse_letter(letters[i - 1]))
      throw Error(ErrorCode::construction_error, "word '" + letters + "' is not reduced");
  }
  return ReducedWord(sig, std::move(letters));
}

ReducedWord ReducedWord::prefix(std::size_t k) const {
  return ReducedWord(sig_, letters_.substr(0, std::min(k, letters_.size())));
}

ReducedWord ReducedWord::suffix(std::size_t k) const {
  return ReducedWord(sig_, k >= letters_.size() ? std::string() : letters_.substr(k));
}

ReducedWord reduce(std::string_view letters, Signature sig) {
  std::string out;
  out.reserve(letters.size());
  for (char c : letters) {
    check_letter(c, sig);
    if (sig.is_group() && !out.empty() && out.back() == inverse_letter(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return ReducedWord(sig, std::move(out));
}

ReducedWord concat(const ReducedWord& u, const ReducedWord& v) {
  require_same(u.sig_, v.sig_);
  const std::string& a = u.letters_;
  const std::string& b = v.letters_;
  std::size_t cancel = 0;
  if (u.sig_.is_group()) {
    while (cancel < a.size() && cancel < b.size() &&
           a[a.size() - 1 - cancel] == inverse_letter(b[cancel]))
      ++cancel;
  }
  std::string out;
  out.reserve(a.size() + b.size() - 2 * cancel);
  out.append(a, 0, a.size() - cancel);
  out.append(b, cancel, std::string::npos);
  return ReducedWord(u.sig_, std::move(out));
}

ReducedWord invert(const ReducedWord& u) {
  if (!u.sig_.is_group())
    throw Error(ErrorCode::monoid_has_no_inverses, "cannot invert under " + u.sig_.to_string());
  std::string out(u.letters_.rbegin(), u.letters_.rend());
  for (char& c : out) c = inverse_letter(c);
  return ReducedWord(u.sig_, std::move(out));
}

bool is_prefix(const ReducedWord& u, const ReducedWord& v) {
  require_same(u.signature(), v.signature());
  return u.length() <= v.length() &&
         std::equal(u.letters().begin(), u.letters().end(), v.letters().begin());
}

ReducedWord letter_word(Signature sig, char letter) {
  return ReducedWord::from_reduced(sig, std::string(1, letter));
}

namespace {
std::atomic<std::size_t> g_ball_cap{1'000'000};
}

std::size_t ball_cap() noexcept { return g_ball_cap.load(); }
void set_ball_cap(std::size_t cap) noexcept { g_ball_cap.store(cap); }

std::optional<std::size_t> ball_size(Signature sig, int n) noexcept {
  if (n <= 0) return 0;
  constexpr std::size_t limit = std::size_t(1) << 62;
  std::size_t total = 1;
  std::size_t shell = 1;
  const std::size_t s = sig.letter_count();
  for (int k = 1; k < n; ++k) {
    std::size_t branch = (sig.is_group() && k > 1) ? s - 1 : s;
    if (shell > limit / std::max<std::size_t>(branch, 1)) return std::nullopt;
    shell *= branch;
    total += shell;
    if (total > limit) return std::nullopt;
  }
  return total;
}

std::vector<ReducedWord> ball(int n, Signature sig) {
  auto size = ball_size(sig, n);
  if (!size || *size > ball_cap()) {
    std::ostringstream msg;
    msg << "ball of radius " << n << " over " << sig.to_string() << " exceeds cap " << ball_cap();
    throw Error(ErrorCode::resource_limit, msg.str());
  }
  std::vector<ReducedWord> out;
  if (n <= 0) return out;
  out.reserve(*size);
  out.push_back(ReducedWord::identity(sig));
  const auto letters = sig.letters();
  std::size_t shell_begin = 0;
  for (int len = 1; len < n; ++len) {
    std::size_t shell_end = out.size();
    for (std::size_t i = shell_begin; i < shell_end; ++i) {
      for (char c : letters) {
        const std::string& w = out[i].letters();
        if (sig.is_group() && !w.empty() && w.back() == inverse_letter(c)) continue;
        out.push_back(ReducedWord::from_reduced(sig, w + c));
      }
    }
    shell_begin = shell_end;
  }
  return out;
}

Ball::Ball(Signature sig, int n) : sig_(sig), n_(n), words_(ball(n, sig)) {
  index_.reserve(words_.size());
  shell_start_.assign(static_cast<std::size_t>(std::max(n, 0)) + 1, words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    index_.emplace(words_[i].letters(), i);
    auto len = words_[i].length();
    if (shell_start_[len] == words_.size() || shell_start_[len] > i) shell_start_[len] = i;
  }
}

std::optional<std::size_t> Ball::index_of(const std::string& letters) const {
  auto it = index_.find(letters);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Ball::count_shorter(int len) const {
  if (len <= 0) return 0;
  if (len >= n_) return words_.size();
  return shell_start_[static_cast<std::size_t>(len)];
}

std::shared_ptr<const Ball> shared_ball(Signature sig, int n) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const Ball>> cache;
  auto key = std::make_tuple(static_cast<int>(sig.kind), sig.rank, n);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const Ball>(sig, n);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(built)).first->second;
}

EventuallyPeriodicWord::EventuallyPeriodicWord(ReducedWord head, ReducedWord cycle)
    : head_(std::move(head)), cycle_(std::move(cycle)) {
  require_same(head_.signature(), cycle_.signature());
  if (cycle_.is_identity())
    throw Error(ErrorCode::construction_error, "cycle of an eventually periodic word must be nonempty");
  if (head_.signature().is_group()) {
    if (!head_.is_identity() && head_.last() == inverse_letter(cycle_.first()))
      throw Error(ErrorCode::construction_error, "head/cycle seam is not reduced");
    if (cycle_.last() == inverse_letter(cycle_.first()))
      throw Error(ErrorCode::construction_error, "cycle/cycle seam is not reduced");
  }
}

ReducedWord word_prefix(const EventuallyPeriodicWord& w, std::size_t k) {
  std::string out = w.head().letters().substr(0, std::min(k, w.head().length()));
  const std::string& cyc = w.cycle().letters();
  while (out.size() < k) out.push_back(cyc[(out.size() - w.head().length()) % cyc.size()]);
  return ReducedWord::from_reduced(w.head().signature(), std::move(out));
}

}  // namespace treeshift
