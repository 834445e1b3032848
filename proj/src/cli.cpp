#include "treeshift/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "treeshift/fixtures.hpp"
#include "treeshift/json_io.hpp"
#include "treeshift/render.hpp"

namespace treeshift::cli {

namespace {

struct Result {
  std::string status = "ok";
  Json payload = Json::object();
  std::vector<std::string> log;
  std::optional<std::string> raw;  // printed verbatim instead of the wrapper
};

struct Options {
  std::string sig = "group:2";
  bool json = false;
  bool human = false;
  std::uint64_t seed = 0;
  std::size_t cap = 1000000;
  std::string direction = "literal";
  bool strict = false;

  // Shared by several subcommands.
  std::string config, block, system, points, other, orbit, epsilon, delta, resolution, format = "ascii";
  int depth = -1, n = -1, radius = -1, render_cap = -1;
  bool count = false, dot = false, verify = false, asymptotic = false, scan = false;

  std::vector<std::string> words;
  std::string op = "reduce";
  int random = 0, length = 4;

  std::string kind, word, head, cycle;
  int inner = -1, outer = -1, invariance = -1;

  std::string mode, oracle = "sft", target = "cict";
  std::string example;
  int limit = -1;
};

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::usage, what); }

void need(bool ok, const std::string& what) {
  if (!ok) usage(what);
}

Signature signature_of(const Options& o) { return Signature::parse(o.sig); }

Direction direction_of(const Options& o) { return parse_direction(o.direction); }

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

int int_after(const std::string& s, std::size_t at) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s.substr(at), &used);
    if (used != s.size() - at) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, "expected an integer in '" + s + "'");
  }
}

// Inline JSON, or the contents of a file.
Json load_json(const std::string& arg) {
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return parse_json(arg);
  std::ifstream in(arg);
  if (!in) throw Error(ErrorCode::parse_error, "cannot read '" + arg + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

PointFamily family_of(const Options& o, const std::string& name) { return family_by_name(name, direction_of(o)); }

// constant:S, parity:P, mod3:R, staircase:V, example:NAME#i, or JSON.
Configuration config_arg(const Options& o, const std::string& arg) {
  const auto sig = signature_of(o);
  if (starts_with(arg, "constant:")) return Configuration::constant(sig, int_after(arg, 9));
  if (starts_with(arg, "parity:")) return parity_point(sig, int_after(arg, 7));
  if (starts_with(arg, "mod3:")) return mod3_point(sig, int_after(arg, 5));
  if (starts_with(arg, "staircase:")) return ab_staircase(int_after(arg, 10));
  if (starts_with(arg, "example:")) {
    auto hash = arg.find('#');
    need(hash != std::string::npos, "point references look like example:NAME#index");
    auto fam = family_of(o, arg.substr(8, hash - 8));
    auto key = arg.substr(hash + 1);
    for (std::size_t i = 0; i < fam.names.size(); ++i)
      if (fam.names[i] == key) return fam.points[i];
    auto i = int_after(arg, hash + 1);
    need(i >= 0 && static_cast<std::size_t>(i) < fam.points.size(), "point index out of range in '" + arg + "'");
    return fam.points[i];
  }
  return configuration_from_json(load_json(arg));
}

// two-point, golden-mean, full:N, example:NAME, or JSON.
ShiftSystem system_arg(const Options& o, const std::string& arg) {
  const auto sig = signature_of(o);
  if (arg == "two-point") return two_point_system(sig);
  if (arg == "golden-mean") return golden_mean_system(sig);
  if (starts_with(arg, "full:")) return full_shift(sig, int_after(arg, 5));
  if (starts_with(arg, "example:")) {
    auto name = arg.substr(8);
    if (name == "two-point-no-shadow") return two_point_system(sig);
    return family_of(o, name).system;
  }
  return system_from_json(load_json(arg));
}

std::optional<ShiftSystem> family_system(const Options& o, const std::string& points) {
  if (starts_with(points, "example:")) return family_of(o, points.substr(8)).system;
  return std::nullopt;
}

// example:NAME, a comma list of point specs, or JSON.
PointSet points_arg(const Options& o, const std::string& arg) {
  if (starts_with(arg, "example:") && arg.find('#') == std::string::npos) {
    auto fam = family_of(o, arg.substr(8));
    return {fam.sig, fam.alphabet, fam.names, fam.points};
  }
  bool json_like = !arg.empty() && (arg[0] == '{' || arg[0] == '[');
  if (!json_like && !std::filesystem::exists(arg) && arg.find(':') != std::string::npos) {
    PointSet p{signature_of(o), Alphabet::numeric(2), {}, {}};
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      p.names.push_back(item);
      p.points.push_back(config_arg(o, item));
    }
    need(!p.points.empty(), "empty point list");
    for (const auto& x : p.points)
      if (!(x.signature() == p.sig)) throw Error(ErrorCode::signature_mismatch, "point signature differs from --sig");
    return p;
  }
  return points_from_json(load_json(arg));
}

PseudoOrbit orbit_arg(const Options& o, const std::string& arg) {
  if (arg == "example:two-point-no-shadow")
    return counterexample_asymptotic(signature_of(o), 'a', o.radius > 0 ? o.radius : 5).orbit;
  return orbit_from_json(load_json(arg));
}

Dyadic dyadic_arg(const std::string& text, const char* flag) {
  need(!text.empty(), std::string(flag) + " is required (written 2^-k)");
  return Dyadic::parse(text);
}

std::string letters(const std::vector<char>& v) { return std::string(v.begin(), v.end()); }

// Points agreeing on Σ^depth are merged into their first occurrence.
PointSet dedupe(const PointSet& p, int depth, bool strict, std::vector<std::string>& log) {
  if (strict) return p;
  PointSet out{p.sig, p.alphabet, {}, {}};
  std::map<std::vector<Symbol>, std::size_t> seen;
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    auto key = central_block(p.points[i], depth).entries();
    auto [it, fresh] = seen.emplace(key, out.points.size());
    if (fresh) {
      out.names.push_back(p.names[i]);
      out.points.push_back(p.points[i]);
    } else {
      log.push_back("merged " + p.names[i] + " into " + out.names[it->second] + " (they agree on the ball of depth " +
                    std::to_string(depth) + ")");
    }
  }
  return out;
}

Json name_list(const PointSet& p) { return p.names; }

EdgeGraph graph_of(const Options& o, PointSet& p, Result& r) {
  auto eps = dyadic_arg(o.epsilon, "--epsilon");
  need(o.depth >= 0, "--depth is required");
  p = dedupe(p, o.depth, o.strict, r.log);
  return edge_graph(p.points, eps, o.depth);
}

// --------------------------------------------------------------- commands

Result cmd_words(const Options& o) {
  const auto sig = signature_of(o);
  Result r;
  r.payload["signature"] = to_json(sig);
  if (o.random > 0) {
    // Reduced words drawn letter by letter; avoids std distributions so the
    // output is identical across standard libraries.
    std::mt19937_64 rng(o.seed);
    const auto ls = sig.letters();
    Json a = Json::array();
    for (int k = 0; k < o.random; ++k) {
      std::string w;
      while (static_cast<int>(w.size()) < o.length) {
        char c = ls[rng() % ls.size()];
        if (!w.empty() && sig.is_group() && c == inverse_letter(w.back())) continue;
        w += c;
      }
      a.push_back(w);
    }
    r.payload["seed"] = o.seed;
    r.payload["words"] = a;
    return r;
  }
  need(!o.words.empty(), "words needs at least one word (or --random K)");
  r.payload["op"] = o.op;
  Json a = Json::array();
  if (o.op == "reduce") {
    for (const auto& w : o.words) a.push_back(reduce(w, sig).str());
    r.payload["words"] = a;
  } else if (o.op == "invert") {
    for (const auto& w : o.words) a.push_back(invert(reduce(w, sig)).str());
    r.payload["words"] = a;
  } else if (o.op == "length") {
    for (const auto& w : o.words) a.push_back(reduce(w, sig).length());
    r.payload["lengths"] = a;
  } else if (o.op == "concat") {
    auto acc = ReducedWord::identity(sig);
    for (const auto& w : o.words) acc = concat(acc, reduce(w, sig));
    r.payload["result"] = acc.str();
  } else if (o.op == "prefix") {
    need(o.words.size() == 2, "--op prefix takes two words");
    r.payload["result"] = is_prefix(reduce(o.words[0], sig), reduce(o.words[1], sig));
  } else {
    usage("unknown --op '" + o.op + "' (reduce, invert, length, concat, prefix)");
  }
  return r;
}

Result cmd_ball(const Options& o) {
  const auto sig = signature_of(o);
  need(o.n >= 0, "--n is required");
  auto size = ball_size(sig, o.n);
  if (!size) throw Error(ErrorCode::resource_limit, "ball size overflows");
  Result r;
  if (o.count) {
    r.raw = Json{{"count", *size}}.dump() + "\n";
    return r;
  }
  r.payload = Json{{"signature", to_json(sig)}, {"n", o.n}, {"count", *size}};
  Json a = Json::array();
  for (const auto& w : ball(o.n, sig)) a.push_back(w.str());
  r.payload["words"] = a;
  return r;
}

Block block_input(const Options& o) {
  if (!o.block.empty()) return block_from_json(load_json(o.block));
  need(!o.config.empty(), "give --config with --depth, or --block");
  need(o.depth >= 0, "--depth is required");
  return central_block(config_arg(o, o.config), o.depth);
}

Result cmd_block(const Options& o) {
  Result r;
  auto b = block_input(o);
  r.payload["block"] = to_json(b);
  if (o.human) r.raw = render_block(b, nullptr, RenderFormat::ascii);
  return r;
}

Result cmd_check_sft(const Options& o) {
  need(!o.system.empty(), "--system is required");
  auto sys = system_arg(o, o.system);
  Result r;
  r.payload["system"] = to_json(sys);
  if (o.block.empty() && o.config.empty()) return r;
  if (!o.config.empty() && o.block.empty()) {
    need(o.depth >= 0, "--depth is required");
    auto x = config_arg(o, o.config);
    bool ok = member_to_depth(x, sys, o.depth);
    r.payload["member_to_depth"] = ok;
    r.payload["depth"] = o.depth;
    r.payload["violation"] = Json();
    if (!ok) {
      auto v = first_violation(central_block(x, o.depth + sys.step() - 1), sys);
      if (v) r.payload["violation"] = v->str();
      r.status = "refuted";
    }
    return r;
  }
  auto b = block_input(o);
  auto v = first_violation(b, sys);
  r.payload["admissible"] = !v;
  r.payload["violation"] = v ? Json(v->str()) : Json();
  if (v) r.status = "refuted";
  return r;
}

Result cmd_enumerate(const Options& o) {
  need(!o.system.empty(), "--system is required");
  need(o.depth >= 1, "--depth is required");
  auto sys = system_arg(o, o.system);
  auto pts = enumerate_points(sys, o.depth);
  Result r;
  r.payload["depth"] = o.depth;
  r.payload["count"] = pts.size();
  Json a = Json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (o.limit >= 0 && static_cast<int>(i) >= o.limit) break;
    a.push_back(pts[i].entries());
  }
  r.payload["blocks"] = a;
  return r;
}

Result cmd_validate_orbit(const Options& o) {
  need(!o.orbit.empty(), "--orbit is required");
  need(o.depth >= 1, "--depth is required");
  auto orbit = orbit_arg(o, o.orbit);
  Result r;
  if (o.asymptotic) {
    auto prof = asymptotic_defect(orbit, o.depth);
    r.payload["profile"] = to_json(prof);
    if (!o.delta.empty()) {
      auto d = Dyadic::parse(o.delta);
      bool ok = prof.empty() || prof.back().max_defect.less_than(d);
      r.payload["outer_shell_below_delta"] = ok;
      if (!ok) r.status = "refuted";
    }
    return r;
  }
  auto rep = validate_pseudo_orbit(orbit, dyadic_arg(o.delta, "--delta"), o.depth);
  r.payload["report"] = to_json(rep);
  if (!rep.passed) r.status = "refuted";
  return r;
}

Result cmd_shadow(const Options& o) {
  need(!o.orbit.empty() && !o.system.empty(), "--orbit and --system are required");
  auto orbit = orbit_arg(o, o.orbit);
  auto sys = system_arg(o, o.system);
  auto eps = dyadic_arg(o.epsilon, "--epsilon");
  auto delta = shadowing_modulus(sys, eps);
  auto rep = validate_pseudo_orbit(orbit, delta, std::max(eps.exponent + 1, sys.step() + 1));
  Result r;
  r.payload["epsilon"] = to_json(eps);
  r.payload["delta"] = to_json(delta);
  r.payload["orbit_report"] = to_json(rep);
  auto x = shadow_sft(orbit, sys, eps.exponent);
  // Independent check of the guarantee on every site.
  DyadicDistance worst = DyadicDistance::at_most(eps.exponent);
  for (const auto& [site, c] : orbit.sites())
    worst = max_distance(worst, distance(shift(x, ReducedWord::from_reduced(orbit.signature(), site)), c, eps.exponent));
  r.payload["tracking"] = to_json(worst);
  r.payload["shadowed"] = worst.at_most_value(eps);
  r.payload["point"] = to_json(x);
  if (!worst.at_most_value(eps)) r.status = "refuted";
  return r;
}

Result cmd_shadow_asymptotic(const Options& o) {
  need(!o.orbit.empty() && !o.system.empty(), "--orbit and --system are required");
  need(o.depth >= 1, "--depth is required");
  auto orbit = orbit_arg(o, o.orbit);
  auto sys = system_arg(o, o.system);
  Result r;
  r.payload = to_json(shadow_sft_asymptotic(orbit, sys, o.depth));
  if (!r.payload["admissible"].get<bool>()) r.status = "refuted";
  return r;
}

Result cmd_edges(const Options& o) {
  need(!o.points.empty(), "--points is required");
  auto p = points_arg(o, o.points);
  Result r;
  auto g = graph_of(o, p, r);
  if (o.dot) {
    r.raw = render_edge_graph(g, p.names, RenderFormat::dot);
    return r;
  }
  r.payload = to_json(g);
  r.payload["names"] = name_list(p);
  return r;
}

Result cmd_ict(const Options& o, bool constrained) {
  need(!o.points.empty(), "--points is required");
  auto p = points_arg(o, o.points);
  Result r;
  auto g = graph_of(o, p, r);
  if (!constrained) {
    auto res = is_ict(g);
    r.payload["holds"] = res.holds;
    Json missing = Json::array();
    for (std::size_t x = 0; x < res.chains.size(); ++x)
      for (std::size_t y = 0; y < res.chains[x].size(); ++y)
        if (!res.chains[x][y]) missing.push_back(Json{{"from", x}, {"to", y}});
    r.payload["missing"] = missing;
    Json chains = Json::array();
    for (std::size_t x = 0; x < res.chains.size(); ++x)
      for (std::size_t y = 0; y < res.chains[x].size(); ++y)
        if (res.chains[x][y]) {
          auto c = to_json(*res.chains[x][y]);
          c["from"] = x;
          c["to"] = y;
          chains.push_back(c);
        }
    r.payload["chains"] = chains;
    if (!res.holds) r.status = "refuted";
  } else {
    auto res = is_cict(g);
    r.payload = to_json(res);
    if (res.refutation && res.refutation->point) {
      const int x = *res.refutation->point;
      r.payload["refutation"]["point_name"] = p.names[x];
      r.log.push_back("refuted at " + p.names[x] + ": in-edges " + letters(res.refutation->in_letters) +
                      ", out-edges " + letters(res.refutation->out_letters));
    }
    if (!res.holds) r.status = "refuted";
  }
  r.payload["names"] = name_list(p);
  return r;
}

Result cmd_ibt(const Options& o, int variant) {
  need(!o.points.empty(), "--points is required");
  need(o.radius >= 0, "--radius is required");
  auto p = points_arg(o, o.points);
  Result r;
  auto g = graph_of(o, p, r);
  auto res = variant == 0 ? is_ibt(g, o.radius) : variant == 1 ? is_ibt_star(g, o.radius) : is_ibt_circ(g, o.radius);
  r.payload = to_json(res);
  r.payload["radius"] = o.radius;
  r.payload["names"] = name_list(p);
  r.payload["core"] = to_json(core(g));
  r.log.push_back(std::string(res.witnessed ? "witnessed" : "refuted") + " at radius " + std::to_string(o.radius));
  if (!res.witnessed) r.status = "refuted";
  return r;
}

std::optional<ReducedWord> word_input(const Options& o, int length) {
  const auto sig = signature_of(o);
  if (!o.cycle.empty())
    return word_prefix(EventuallyPeriodicWord(reduce(o.head, sig), reduce(o.cycle, sig)),
                       static_cast<std::size_t>(std::max(length, 0)));
  if (!o.word.empty()) return reduce(o.word, sig);
  return std::nullopt;
}

Result cmd_limit(const Options& o) {
  need(!o.kind.empty() && !o.config.empty(), "--kind and --config are required");
  need(o.depth >= 1, "--depth is required");
  need(o.outer >= 1, "--outer is required");
  auto kind = parse_limit_kind(o.kind);
  auto x = config_arg(o, o.config);
  auto w = word_input(o, o.outer);
  Result r;
  if (o.scan) {
    r.payload = to_json(stabilization_scan(kind, x, w, o.depth, o.outer));
    return r;
  }
  need(o.inner >= 0, "--inner is required");
  auto a = limit_approx(kind, x, w, o.inner, o.outer, o.depth);
  r.payload["approximation"] = to_json(a);
  if (o.invariance >= 1) {
    std::optional<ShiftSystem> sys;
    if (!o.system.empty()) sys = system_arg(o, o.system);
    auto rep = invariance_check(a, sys ? &*sys : nullptr, o.invariance);
    r.payload["invariance"] = to_json(rep);
    if (!rep.passed) r.status = "refuted";
  }
  return r;
}

Result cmd_hausdorff(const Options& o) {
  need(!o.points.empty() && !o.other.empty(), "--points and --other are required");
  need(o.depth >= 1, "--depth is required");
  auto a = points_arg(o, o.points);
  auto b = points_arg(o, o.other);
  Result r;
  r.payload["distance"] = to_json(hausdorff(a.points, b.points, o.depth));
  r.payload["depth"] = o.depth;
  return r;
}

Result cmd_realize(const Options& o) {
  need(!o.points.empty(), "--points is required");
  need(!o.mode.empty(), "--mode is required (cict, ibt-star, ibt-circ, shadowed)");
  auto res = dyadic_arg(o.resolution, "--resolution");
  auto p = points_arg(o, o.points);
  std::optional<ShiftSystem> sys;
  if (!o.system.empty())
    sys = system_arg(o, o.system);
  else
    sys = family_system(o, o.points);
  need(sys.has_value(), "--system is required");
  const int k = res.exponent;
  std::optional<RealizationOutput> out;
  if (o.mode == "cict") {
    out = realize_cict_as_omega_w(p.points, *sys, k);
  } else if (o.mode == "ibt-star" || o.mode == "ibt-circ") {
    bool group = p.sig.is_group();
    if (group != (o.mode == "ibt-star"))
      throw Error(ErrorCode::signature_mismatch, o.mode + (group ? " needs a monoid signature" : " needs a group signature"));
    out = realize_ibt_as_omega_Fw(p.points, *sys, k);
  } else if (o.mode == "shadowed") {
    ShadowingOracle oracle;
    if (o.oracle == "sft")
      oracle = sft_oracle(*sys);
    else if (o.oracle == "sft-asymptotic")
      oracle = sft_asymptotic_oracle(*sys);
    else
      usage("unknown --oracle '" + o.oracle + "' (sft, sft-asymptotic)");
    RealizeMode m = o.target == "ibt" ? RealizeMode::ibt : RealizeMode::cict;
    need(o.target == "ibt" || o.target == "cict", "--target is cict or ibt");
    out = realize_with_shadowing(p.points, oracle, k, m);
  } else {
    usage("unknown --mode '" + o.mode + "'");
  }
  Result r;
  r.payload = to_json(*out);
  r.payload["names"] = name_list(p);
  r.log = out->log;
  if (!out->within_bound) r.status = "refuted";
  return r;
}

Result cmd_example(const Options& o) {
  Result r;
  if (o.example.empty()) {
    Json names = Json::array({"two-point-no-shadow"});
    for (const auto& n : family_names()) names.push_back(n);
    r.payload["examples"] = names;
    return r;
  }
  if (o.example == "two-point-no-shadow") {
    auto c = counterexample_asymptotic(signature_of(o), 'a', o.radius > 0 ? o.radius : 5);
    r.payload["name"] = o.example;
    r.payload["branch"] = std::string(1, c.branch);
    r.payload["system"] = to_json(c.system);
    r.payload["orbit"] = to_json(c.orbit);
    if (o.verify) {
      const int m = c.system.step();
      auto prof = asymptotic_defect(c.orbit, m + 2);
      bool asym = !prof.empty() && prof.back().max_defect.less_than(Dyadic{m + 1});
      r.payload["asymptotic_profile"] = to_json(prof);
      r.payload["asymptotic_pseudo_orbit"] = asym;
      r.payload["certificate"] = to_json(c.certificate);
      r.log.push_back(std::string("certificate ") + (c.certificate.holds ? "holds" : "fails") + " on shells 1.." +
                      std::to_string(c.orbit.radius()));
      if (!c.certificate.holds || !asym) r.status = "refuted";
    }
    return r;
  }
  auto fam = family_of(o, o.example);
  PointSet p{fam.sig, fam.alphabet, fam.names, fam.points};
  r.payload = to_json(p);
  r.payload["name"] = o.example;
  if (o.example == "ict-not-cict") r.payload["direction"] = o.direction;
  r.payload["system"] = to_json(fam.system);
  if (o.verify) {
    // The claim each fixture is shipped for.
    const Dyadic eps{3};
    const int depth = 5;
    auto q = dedupe(p, depth, o.strict, r.log);
    auto g = edge_graph(q.points, eps, depth);
    auto ict = is_ict(g);
    auto cict = is_cict(g);
    r.payload["verify"] = Json{{"epsilon", to_json(eps)}, {"depth", depth}, {"ict", ict.holds}, {"cict", to_json(cict)}};
    bool claim = o.example == "ict-not-cict" ? (ict.holds && !cict.holds) : (ict.holds && cict.holds);
    r.log.push_back(std::string("ICT ") + (ict.holds ? "holds" : "fails") + ", CICT " + (cict.holds ? "holds" : "fails"));
    if (!claim) r.status = "refuted";
  }
  return r;
}

Result cmd_render(const Options& o) {
  if (o.render_cap >= 0) set_render_cap(o.render_cap);
  auto format = parse_render_format(o.format);
  Result r;
  if (!o.points.empty()) {
    auto p = points_arg(o, o.points);
    auto g = graph_of(o, p, r);
    r.raw = render_edge_graph(g, p.names, format);
    return r;
  }
  std::optional<Alphabet> alphabet;
  if (!o.system.empty()) alphabet = system_arg(o, o.system).alphabet();
  r.raw = render_block(block_input(o), alphabet ? &*alphabet : nullptr, format);
  return r;
}

std::string human(const Result& r) {
  std::ostringstream out;
  out << "status: " << r.status << '\n' << r.payload.dump(2) << '\n';
  for (const auto& l : r.log) out << "# " << l << '\n';
  return out.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Symbolic dynamics over free groups and free monoids", "treeshift"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--sig", o.sig, "group:N or monoid:N")->default_val("group:2");
  app.add_flag("--json", o.json, "JSON output (default)");
  app.add_flag("--human", o.human, "Readable output");
  app.add_option("--seed", o.seed, "Seed for randomized output");
  app.add_option("--cap", o.cap, "Ball size cap");
  app.add_option("--direction", o.direction, "ict-not-cict reading: literal or corrected");
  app.add_flag("--strict", o.strict, "Do not merge points that agree at the examined depth");

  auto add_points = [&](CLI::App* s) {
    s->add_option("--points", o.points, "example:NAME, comma list (parity:0,parity:1) or JSON");
    s->add_option("--epsilon", o.epsilon, "2^-k");
    s->add_option("--depth", o.depth, "Examined depth D");
  };

  auto* words = app.add_subcommand("words", "Reduce and combine words");
  words->add_option("word", o.words);
  words->add_option("--op", o.op, "reduce, invert, length, concat, prefix");
  words->add_option("--random", o.random, "Emit K random reduced words (uses --seed)");
  words->add_option("--length", o.length, "Length of random words");

  auto* ballc = app.add_subcommand("ball", "The ball of words of length < n");
  ballc->add_option("--n", o.n);
  ballc->add_flag("--count", o.count);

  auto* block = app.add_subcommand("block", "Central block of a configuration");
  block->add_option("--config", o.config);
  block->add_option("--block", o.block);
  block->add_option("--depth", o.depth);

  auto* check = app.add_subcommand("check-sft", "Admissibility in a shift of finite type");
  check->add_option("--system", o.system);
  check->add_option("--config", o.config);
  check->add_option("--block", o.block);
  check->add_option("--depth", o.depth);

  auto* enumerate = app.add_subcommand("enumerate", "Admissible blocks of a depth");
  enumerate->add_option("--system", o.system);
  enumerate->add_option("--depth", o.depth);
  enumerate->add_option("--limit", o.limit, "List at most this many blocks");

  auto* validate = app.add_subcommand("validate-orbit", "Check step defects of a pseudo-orbit");
  validate->add_option("--orbit", o.orbit);
  validate->add_option("--delta", o.delta);
  validate->add_option("--depth", o.depth);
  validate->add_option("--radius", o.radius, "Radius of example orbits");
  validate->add_flag("--asymptotic", o.asymptotic, "Per-shell defect profile");

  auto* shadow = app.add_subcommand("shadow", "Shadow a pseudo-orbit in an SFT");
  shadow->add_option("--orbit", o.orbit);
  shadow->add_option("--system", o.system);
  shadow->add_option("--epsilon", o.epsilon);
  shadow->add_option("--radius", o.radius);

  auto* shadow_asym = app.add_subcommand("shadow-asymptotic", "Asymptotic shadowing in an SFT");
  shadow_asym->add_option("--orbit", o.orbit);
  shadow_asym->add_option("--system", o.system);
  shadow_asym->add_option("--depth", o.depth);
  shadow_asym->add_option("--radius", o.radius);

  auto* edges = app.add_subcommand("edges", "Labeled epsilon-edge graph of a point set");
  add_points(edges);
  edges->add_flag("--dot", o.dot);

  auto* ict = app.add_subcommand("ict", "Internal chain transitivity");
  add_points(ict);
  auto* cict = app.add_subcommand("cict", "Constrained internal chain transitivity");
  add_points(cict);
  std::vector<CLI::App*> ibts;
  const std::pair<const char*, const char*> ibt_kinds[] = {
      {"ibt", "Internal block transitivity at a radius"},
      {"ibt-star", "IBT with a final point at two sites (groups)"},
      {"ibt-circ", "IBT with the final point at the root (monoids)"}};
  for (const auto& [name, about] : ibt_kinds) {
    auto* s = app.add_subcommand(name, about);
    add_points(s);
    s->add_option("--radius", o.radius);
    ibts.push_back(s);
  }

  auto* limit = app.add_subcommand("limit", "Finite-range limit set approximations");
  limit->add_option("--kind", o.kind, "omega, omega-w, omega-fw");
  limit->add_option("--config", o.config);
  limit->add_option("--word", o.word);
  limit->add_option("--head", o.head, "Head of an eventually periodic word");
  limit->add_option("--cycle", o.cycle, "Cycle of an eventually periodic word");
  limit->add_option("--inner", o.inner);
  limit->add_option("--outer", o.outer);
  limit->add_option("--depth", o.depth);
  limit->add_flag("--scan", o.scan, "Stabilization scan up to --outer");
  limit->add_option("--invariance", o.invariance, "Run the invariance check at this depth");
  limit->add_option("--system", o.system);

  auto* haus = app.add_subcommand("hausdorff", "Hausdorff distance of two point sets");
  haus->add_option("--points", o.points);
  haus->add_option("--other", o.other);
  haus->add_option("--depth", o.depth);

  auto* realize = app.add_subcommand("realize", "Realize a finite set as a limit set");
  realize->add_option("--mode", o.mode, "cict, ibt-star, ibt-circ, shadowed");
  realize->add_option("--points", o.points);
  realize->add_option("--system", o.system);
  realize->add_option("--resolution", o.resolution, "2^-k");
  realize->add_option("--oracle", o.oracle, "sft or sft-asymptotic (mode shadowed)");
  realize->add_option("--target", o.target, "cict or ibt (mode shadowed)");

  auto* example = app.add_subcommand("example", "Fixture gallery");
  example->add_option("name", o.example);
  example->add_flag("--verify", o.verify);
  example->add_option("--radius", o.radius);

  auto* render = app.add_subcommand("render", "ASCII or DOT rendering");
  render->add_option("--config", o.config);
  render->add_option("--block", o.block);
  render->add_option("--system", o.system, "Alphabet source for symbol names");
  render->add_option("--format", o.format, "ascii or dot");
  render->add_option("--render-cap", o.render_cap, "Largest depth to render (0: no cap)");
  add_points(render);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::size_t old_cap = ball_cap();
  const int old_render = render_cap();
  set_ball_cap(o.cap);
  Result r;
  int code = 0;
  try {
    auto* sub = app.get_subcommands().front();
    const auto name = sub->get_name();
    if (sub == words) r = cmd_words(o);
    else if (sub == ballc) r = cmd_ball(o);
    else if (sub == block) r = cmd_block(o);
    else if (sub == check) r = cmd_check_sft(o);
    else if (sub == enumerate) r = cmd_enumerate(o);
    else if (sub == validate) r = cmd_validate_orbit(o);
    else if (sub == shadow) r = cmd_shadow(o);
    else if (sub == shadow_asym) r = cmd_shadow_asymptotic(o);
    else if (sub == edges) r = cmd_edges(o);
    else if (sub == ict) r = cmd_ict(o, false);
    else if (sub == cict) r = cmd_ict(o, true);
    else if (sub == ibts[0]) r = cmd_ibt(o, 0);
    else if (sub == ibts[1]) r = cmd_ibt(o, 1);
    else if (sub == ibts[2]) r = cmd_ibt(o, 2);
    else if (sub == limit) r = cmd_limit(o);
    else if (sub == haus) r = cmd_hausdorff(o);
    else if (sub == realize) r = cmd_realize(o);
    else if (sub == example) r = cmd_example(o);
    else if (sub == render) r = cmd_render(o);
    else usage("unknown subcommand " + name);
  } catch (const Error& e) {
    r = Result{};
    r.status = "error";
    r.payload = Json{{"error", error_code_name(e.code())}, {"message", e.what()}};
    err << "treeshift: " << error_code_name(e.code()) << ": " << e.what() << '\n';
    code = e.code() == ErrorCode::usage ? 2 : 1;
  }
  set_ball_cap(old_cap);
  set_render_cap(old_render);

  if (r.raw)
    out << *r.raw;
  else if (o.human)
    out << human(r);
  else
    out << Json{{"status", r.status}, {"payload", r.payload}, {"log", r.log}}.dump() << '\n';
  return code;
}

}  // namespace treeshift::cli
