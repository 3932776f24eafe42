#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "divisor.hpp"

namespace berkdisc {

// Malformed scene text: bad JSON, missing fields, unparsable numbers or unknown references.
class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scene {
  TopologySpec topology;
  TreePtr tree;
  std::vector<std::pair<std::string, QshFunction>> functions;
  std::vector<std::pair<std::string, FormalPoly>> polys;
  std::vector<std::string> queries;  // point strings, kept verbatim

  const QshFunction& function(const std::string& name) const;
  const FormalPoly& poly(const std::string& name) const;
};

// Throws SceneError for malformed input and TreeError for an invalid tree.
Scene parse_scene(const std::string& text);
Scene load_scene(const std::string& path);
std::string serialize_scene(const Scene& scene, int indent = 2);

// Builds the scene objects from a topology; used by generators.
Scene make_scene(TopologySpec topology);

// "node:<id>" or "edge:<edge id>:<A-offset>"; throws SceneError.
TreePoint parse_point(const DiscTree& t, const std::string& text);
std::string format_point(const DiscTree& t, const TreePoint& p);

std::string rational_str(const Rational& q);
Rational rational_from_json_text(const std::string& text);

struct ProfileRow {
  ExtRat alpha;
  ExtRat A;
  ExtRat value;
};

using ProfileTable = std::vector<ProfileRow>;

// Expressions: "phi:<fn>", "logf:<poly>", "A", "alpha", "F:<poly>:<fn>:<eps>".
// Rows at every node on the path from the root to the endpoint, then the endpoint itself.
ProfileTable emit_profile(const Scene& scene, const std::string& expression, const TreePoint& endpoint);

}  // namespace berkdisc
