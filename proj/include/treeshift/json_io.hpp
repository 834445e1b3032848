#pragma once

// JSON forms of every value the CLI reads or writes. Symbols are integer
// indices, words are letter strings ("" is e), distances are "2^-k" strings.

#include <string>
#include <vector>

#include <json.hpp>

#include "treeshift/limits.hpp"

namespace treeshift {

using Json = nlohmann::ordered_json;

Json to_json(const Signature& sig);
Json to_json(const Alphabet& a);
Json to_json(const Dyadic& d);
Json to_json(const DyadicDistance& d);
Json to_json(const Block& b);
Json to_json(const Configuration& x);
Json to_json(const ShiftSystem& sys);
Json to_json(const PseudoOrbit& orbit);
Json to_json(const Step& s);
Json to_json(const DefectReport& r);
Json to_json(const std::vector<ShellDefect>& profile);
Json to_json(const AsymptoticShadow& a);
Json to_json(const NoShadowCertificate& c);
Json to_json(const EdgeGraph& g);
Json to_json(const ChainWitness& c);
Json to_json(const CictResult& r);
Json to_json(const Core& c);
Json to_json(const IbtResult& r);
Json to_json(const LimitSetApproximation& a);
Json to_json(const StabilizationScan& s);
Json to_json(const InvarianceReport& r);
Json to_json(const RealizationOutput& r);

/// Points with names, as read from and written to points files.
struct PointSet {
  Signature sig;
  Alphabet alphabet;
  std::vector<std::string> names;
  std::vector<Configuration> points;
};

Json to_json(const PointSet& p);

// Readers. Each accepts its own JSON form, and also a CLI output document
// that carries the value (under "payload", then the usual field name).
Signature signature_from_json(const Json& j);
Dyadic dyadic_from_json(const Json& j);
Block block_from_json(const Json& j);
Configuration configuration_from_json(const Json& j);
ShiftSystem system_from_json(const Json& j);
PseudoOrbit orbit_from_json(const Json& j);
PointSet points_from_json(const Json& j);

/// Parses text as JSON; throws ParseError with the parser's message.
Json parse_json(const std::string& text);

}  // namespace treeshift
