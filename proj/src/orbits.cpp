#include "treeshift/orbits.hpp"

#include <algorithm>
#include <set>

#include "treeshift/fixtures.hpp"

namespace treeshift {

PseudoOrbit::PseudoOrbit(Signature sig, SiteMap sites, Tail tail) : sig_(sig), sites_(std::move(sites)), tail_(tail) {
  if (!sites_.count("")) throw Error(ErrorCode::construction_error, "pseudo-orbit must assign the identity");
  for (const auto& [w, cfg] : sites_) {
    ReducedWord::from_reduced(sig_, w);
    if (!(cfg.signature() == sig_)) throw Error(ErrorCode::signature_mismatch, "site configuration signature");
    if (!w.empty() && !sites_.count(w.substr(0, w.size() - 1)))
      throw Error(ErrorCode::construction_error, "pseudo-orbit sites must be prefix-closed (missing parent of '" + w + "')");
    radius_ = std::max(radius_, static_cast<int>(w.size()));
  }
}

PseudoOrbit PseudoOrbit::on_ball(Signature sig, int radius,
                                 const std::function<Configuration(const ReducedWord&)>& rule, Tail tail) {
  SiteMap sites;
  for (const auto& u : shared_ball(sig, radius + 1)->words()) sites.emplace(u.str(), rule(u));
  return PseudoOrbit(sig, std::move(sites), tail);
}

bool PseudoOrbit::is_total() const {
  auto b = ball_size(sig_, radius_ + 1);
  return b && *b == sites_.size();
}

Configuration PseudoOrbit::at(const ReducedWord& u) const {
  const auto& s = u.str();
  for (std::size_t len = std::min<std::size_t>(s.size(), static_cast<std::size_t>(radius_));; --len) {
    auto it = sites_.find(s.substr(0, len));
    if (it != sites_.end()) {
      if (len == s.size()) return it->second;
      if (tail_ == Tail::none)
        throw Error(ErrorCode::construction_error, "pseudo-orbit has no value at '" + u.human() + "'");
      return shift(it->second, u.suffix(len));
    }
  }
}

namespace {

template <class Visit>
void for_each_step(const PseudoOrbit& orbit, Visit visit) {
  const auto letters = orbit.signature().letters();
  for (const auto& [w, cfg] : orbit.sites()) {
    auto u = ReducedWord::from_reduced(orbit.signature(), w);
    for (char i : letters) {
      auto ui = concat(u, letter_word(orbit.signature(), i));
      auto it = orbit.sites().find(ui.str());
      if (it == orbit.sites().end()) continue;
      visit(u, i, cfg, it->second, std::min(u.length(), ui.length()));
    }
  }
}

}  // namespace

DefectReport validate_pseudo_orbit(const PseudoOrbit& orbit, Dyadic delta, int depth) {
  if (delta.exponent >= depth)
    throw Error(ErrorCode::depth_too_small, "validation at 2^-" + std::to_string(delta.exponent) +
                                                " needs depth > " + std::to_string(delta.exponent));
  DefectReport report{DyadicDistance::at_most(depth), std::nullopt, 0, delta, depth, false};
  for_each_step(orbit, [&](const ReducedWord& u, char i, const Configuration& from, const Configuration& to,
                           std::size_t) {
    auto d = distance(shift(from, i), to, depth);
    ++report.sites_checked;
    if (d.key() < report.max_defect.key()) {
      report.max_defect = d;
      report.worst = Step{u, i, d};
    }
  });
  report.passed = report.max_defect.less_than(delta);
  return report;
}

std::vector<ShellDefect> asymptotic_defect(const PseudoOrbit& orbit, int depth) {
  std::vector<ShellDefect> shells;
  for (int r = 0; r < orbit.radius(); ++r) shells.push_back({r, DyadicDistance::at_most(depth), std::nullopt});
  for_each_step(orbit, [&](const ReducedWord& u, char i, const Configuration& from, const Configuration& to,
                           std::size_t shell) {
    auto d = distance(shift(from, i), to, depth);
    auto& s = shells[shell];
    if (d.key() < s.max_defect.key()) {
      s.max_defect = d;
      s.worst = Step{u, i, d};
    }
  });
  return shells;
}

Dyadic shadowing_modulus(const ShiftSystem& sys, Dyadic epsilon) {
  if (epsilon.exponent <= sys.step())
    throw Error(ErrorCode::resolution_too_coarse, "need eps = 2^-k with k > M = " + std::to_string(sys.step()));
  return Dyadic{epsilon.exponent + 1};
}

Configuration trace_point(const PseudoOrbit& orbit) {
  return Configuration::splice(orbit.signature(), orbit.sites());
}

Configuration shadow_sft(const PseudoOrbit& orbit, const ShiftSystem& sys, int k) {
  if (!(orbit.signature() == sys.signature()))
    throw Error(ErrorCode::signature_mismatch, "pseudo-orbit signature differs from the system");
  if (k <= sys.step()) throw Error(ErrorCode::depth_too_small, "shadowing resolution must exceed the step");
  auto report = validate_pseudo_orbit(orbit, Dyadic{k + 1}, k + 2);
  if (!report.passed)
    throw Error(ErrorCode::defect_too_large,
                "defect " + report.max_defect.to_string() + " at " + report.worst->from.human() + " -" +
                    report.worst->letter + "-> is not below 2^-" + std::to_string(k + 1));
  return trace_point(orbit);
}

AsymptoticShadow shadow_sft_asymptotic(const PseudoOrbit& orbit, const ShiftSystem& sys, int depth,
                                       std::optional<int> scan_radius) {
  if (!(orbit.signature() == sys.signature()))
    throw Error(ErrorCode::signature_mismatch, "pseudo-orbit signature differs from the system");
  const int m = sys.step();
  if (depth <= m + 1) throw Error(ErrorCode::depth_too_small, "asymptotic shadowing needs depth > M + 1");
  auto profile = asymptotic_defect(orbit, depth);
  if (!profile.empty() && !profile.back().max_defect.less_than(Dyadic{m + 1}))
    throw Error(ErrorCode::defect_too_large, "outermost shell defect " + profile.back().max_defect.to_string() +
                                                 " is not below 2^-" + std::to_string(m + 1));
  AsymptoticShadow out{trace_point(orbit), false, false, std::nullopt, profile, {}};
  out.weak_delta_ok = validate_pseudo_orbit(orbit, Dyadic{m + 1}, depth).passed;
  const int r = std::max(scan_radius.value_or(orbit.radius()), m);
  out.violation = first_violation(central_block(out.point, r + m - 1), sys);
  out.admissible = !out.violation.has_value();
  for (int k = 1; k + 2 <= depth; ++k) {
    int last_bad = -1;
    for (const auto& s : profile)
      if (!s.max_defect.less_than(Dyadic{k + 1})) last_bad = s.shell;
    out.guarantees.push_back({k, last_bad + k + 1});
  }
  return out;
}

Counterexample counterexample_asymptotic(Signature sig, char j, int radius) {
  if (!sig.is_group() || sig.rank < 2)
    throw Error(ErrorCode::construction_error, "the counterexample needs a free group of rank >= 2");
  if (!sig.legal(j)) throw Error(ErrorCode::invalid_letter, std::string("branch letter '") + j + "' not legal");
  auto sys = two_point_system(sig);
  const auto zero = Configuration::constant(sig, 0), one = Configuration::constant(sig, 1);
  auto orbit = PseudoOrbit::on_ball(sig, radius, [&](const ReducedWord& u) {
    return !u.is_identity() && u.first() == j ? zero : one;
  });

  NoShadowCertificate cert;
  cert.points = enumerate_points(sys, 3);
  cert.holds = cert.points.size() == 2;
  const auto ball = shared_ball(sig, radius + 1);
  for (const auto& b : cert.points) {
    auto y = Configuration::override_block(Configuration::constant(sig, b[0]), b);
    std::vector<ShellMismatch> row;
    for (int r = 1; r <= radius; ++r) {
      std::optional<ShellMismatch> hit;
      for (const auto& u : ball->words()) {
        if (static_cast<int>(u.length()) != r) continue;
        auto d = distance(shift(y, u), orbit.at(u), 2);
        if (!d.less_than(Dyadic{1})) {
          hit = ShellMismatch{r, u, d};
          break;
        }
      }
      if (hit)
        row.push_back(*hit);
      else
        cert.holds = false;
    }
    cert.mismatches.push_back(std::move(row));
  }
  return Counterexample{std::move(sys), std::move(orbit), j, std::move(cert)};
}

std::optional<Obstruction> non_sft_obstruction(const BlockFamily& family, Signature sig, int n, int span,
                                               std::size_t budget) {
  if (n < 0 || span < 1) throw Error(ErrorCode::construction_error, "obstruction search needs n >= 0, span >= 1");
  std::map<int, std::set<std::vector<Symbol>>> forbidden;
  auto forbidden_at = [&](int l) -> const std::set<std::vector<Symbol>>& {
    auto it = forbidden.find(l);
    if (it != forbidden.end()) return it->second;
    std::set<std::vector<Symbol>> s;
    for (const auto& b : family(l)) s.insert(b.entries());
    return forbidden.emplace(l, std::move(s)).first->second;
  };
  std::size_t examined = 0;
  for (int m = n + 1; m <= n + span; ++m) {
    for (const auto& block : family(m)) {
      if (!(block.signature() == sig) || block.depth() != m)
        throw Error(ErrorCode::construction_error, "family returned a block of the wrong shape");
      if (++examined > budget)
        throw Error(ErrorCode::search_budget_exhausted, "obstruction search examined " + std::to_string(budget) + " blocks");
      std::vector<SubBlockCheck> checks;
      bool clean = true;
      for (int l = 1; l < m; ++l) {
        const auto& table = windows(sig, l, m);
        const auto& banned = forbidden_at(l);
        for (std::size_t w = 0; w < table.cells.size(); ++w) {
          std::vector<Symbol> sub;
          for (std::size_t c : table.cells[w]) sub.push_back(block[c]);
          bool ok = !banned.count(sub);
          checks.push_back({l, block.domain()[table.positions[w]], ok});
          clean = clean && ok;
        }
      }
      if (clean) return Obstruction{block, std::move(checks)};
    }
  }
  return std::nullopt;
}

BlockFamily sft_family(const ShiftSystem& sys) {
  return [sys](int m) { return m == sys.step() ? sys.forbidden() : std::vector<Block>{}; };
}

BlockFamily sphere_family(Signature sig) {
  if (!sig.is_group()) throw Error(ErrorCode::construction_error, "the sphere family is defined for free groups");
  return [sig](int m) {
    std::vector<Block> out;
    if (m < 2) return out;
    auto ball = shared_ball(sig, m);
    std::vector<Symbol> entries;
    for (const auto& u : ball->words()) entries.push_back(static_cast<int>(u.length()) == m - 1 ? 1 : 0);
    out.emplace_back(sig, m, std::move(entries));
    return out;
  };
}

}  // namespace treeshift
