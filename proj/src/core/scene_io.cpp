#include "scene_io.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "norms.hpp"

namespace berkdisc {

using nlohmann::json;

namespace {

std::string where(const std::string& ctx, const std::string& msg) { return ctx + ": " + msg; }

const json& field(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key)) throw SceneError(where(ctx, std::string("missing field '") + key + "'"));
  return obj.at(key);
}

std::string string_field(const json& obj, const char* key, const std::string& ctx) {
  const json& v = field(obj, key, ctx);
  if (!v.is_string()) throw SceneError(where(ctx, std::string("field '") + key + "' must be a string"));
  return v.get<std::string>();
}

Rational rational_value(const json& v, const std::string& ctx) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const std::exception& e) {
    throw SceneError(where(ctx, e.what()));
  }
  throw SceneError(where(ctx, "expected a rational as \"p/q\" or an integer"));
}

ExtRat ext_value(const json& v, const std::string& ctx) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "-inf") return ExtRat::parse(s);
  }
  return ExtRat(rational_value(v, ctx));
}

long integer_value(const json& v, const std::string& ctx) {
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_string()) {
    Rational q = rational_value(v, ctx);
    if (is_integer(q)) return floor_to_long(q);
  }
  throw SceneError(where(ctx, "expected an integer"));
}

std::string ext_str(const ExtRat& x) { return x.finite() ? rational_str(x.value()) : x.str(); }

const DiscTree& tree_of(const Scene& s) {
  if (!s.tree) throw SceneError("scene has no tree");
  return *s.tree;
}

QshFunction parse_function(const DiscTree& t, const TreePtr& tp, const json& j, const std::string& ctx) {
  Rational root_value = j.contains("root_value") ? rational_value(j.at("root_value"), ctx + ".root_value") : Rational(0);
  std::vector<Rational> slopes(t.size(), Rational(0));
  if (j.contains("slopes")) {
    const json& s = j.at("slopes");
    if (!s.is_object()) throw SceneError(where(ctx, "'slopes' must map edge ids to rationals"));
    for (const auto& [edge, v] : s.items()) {
      auto child = t.find_edge(edge);
      if (!child) throw SceneError(where(ctx, "unknown edge '" + edge + "'"));
      slopes[static_cast<std::size_t>(*child)] = rational_value(v, ctx + ".slopes." + edge);
    }
  }
  return QshFunction(tp, root_value, std::move(slopes));
}

FormalPoly parse_poly(const DiscTree& t, const TreePtr& tp, const json& j, const std::string& ctx) {
  Rational c = j.contains("const_log") ? rational_value(j.at("const_log"), ctx + ".const_log") : Rational(0);
  std::map<int, long> roots;
  if (j.contains("roots")) {
    const json& r = j.at("roots");
    if (!r.is_object()) throw SceneError(where(ctx, "'roots' must map node ids to exponents"));
    for (const auto& [id, v] : r.items()) {
      auto n = t.find_node(id);
      if (!n) throw SceneError(where(ctx, "unknown node '" + id + "'"));
      roots[*n] = integer_value(v, ctx + ".roots." + id);
    }
  }
  try {
    return FormalPoly(tp, c, std::move(roots));
  } catch (const std::invalid_argument& e) {
    throw SceneError(where(ctx, e.what()));
  }
}

}  // namespace

std::string rational_str(const Rational& q) { return to_string(q); }

Rational rational_from_json_text(const std::string& text) { return rational_value(json::parse(text), "value"); }

const QshFunction& Scene::function(const std::string& name) const {
  for (const auto& [n, f] : functions)
    if (n == name) return f;
  throw SceneError("unknown function '" + name + "'");
}

const FormalPoly& Scene::poly(const std::string& name) const {
  for (const auto& [n, f] : polys)
    if (n == name) return f;
  throw SceneError("unknown polynomial '" + name + "'");
}

Scene make_scene(TopologySpec topology) {
  Scene s;
  s.tree = DiscTree::build(topology);
  s.topology = std::move(topology);
  return s;
}

Scene parse_scene(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SceneError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw SceneError("scene must be a JSON object");
  TopologySpec top;
  top.root = string_field(j, "root", "scene");
  const json& nodes = field(j, "nodes", "scene");
  const json& edges = field(j, "edges", "scene");
  if (!nodes.is_array() || !edges.is_array()) throw SceneError("'nodes' and 'edges' must be arrays");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string ctx = "nodes[" + std::to_string(i) + "]";
    const json& n = nodes[i];
    NodeSpec ns;
    ns.id = string_field(n, "id", ctx);
    if (n.contains("type")) {
      const json& ty = n.at("type");
      try {
        ns.type = parse_point_type(ty.is_number_integer() ? std::to_string(ty.get<long>()) : ty.get<std::string>());
      } catch (const std::exception& e) {
        throw SceneError(where(ctx, e.what()));
      }
    }
    if (n.contains("mult")) ns.mult = integer_value(n.at("mult"), ctx + ".mult");
    top.nodes.push_back(std::move(ns));
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string ctx = "edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    EdgeSpec es;
    es.parent = string_field(e, "parent", ctx);
    es.child = string_field(e, "child", ctx);
    es.id = e.contains("id") ? string_field(e, "id", ctx) : "e_" + es.child;
    es.a_length = ext_value(field(e, "a_length", ctx), ctx + ".a_length");
    if (e.contains("mult")) es.mult = integer_value(e.at("mult"), ctx + ".mult");
    top.edges.push_back(std::move(es));
  }
  Scene s = make_scene(std::move(top));
  const DiscTree& t = *s.tree;
  std::set<std::string> names;
  auto fresh = [&](const std::string& name, const std::string& ctx) {
    if (!names.insert(name).second) throw SceneError(where(ctx, "duplicate name '" + name + "'"));
  };
  if (j.contains("functions")) {
    const json& fs = j.at("functions");
    if (!fs.is_array()) throw SceneError("'functions' must be an array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      std::string ctx = "functions[" + std::to_string(i) + "]";
      std::string name = string_field(fs[i], "name", ctx);
      fresh(name, ctx);
      s.functions.emplace_back(name, parse_function(t, s.tree, fs[i], ctx));
    }
  }
  if (j.contains("polys")) {
    const json& ps = j.at("polys");
    if (!ps.is_array()) throw SceneError("'polys' must be an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      std::string ctx = "polys[" + std::to_string(i) + "]";
      std::string name = string_field(ps[i], "name", ctx);
      fresh(name, ctx);
      s.polys.emplace_back(name, parse_poly(t, s.tree, ps[i], ctx));
    }
  }
  if (j.contains("queries")) {
    const json& qs = j.at("queries");
    if (!qs.is_array()) throw SceneError("'queries' must be an array");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      if (!qs[i].is_string()) throw SceneError("queries[" + std::to_string(i) + "] must be a point string");
      std::string q = qs[i].get<std::string>();
      parse_point(t, q);
      s.queries.push_back(q);
    }
  }
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("cannot read scene file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

std::string serialize_scene(const Scene& s, int indent) {
  const DiscTree& t = tree_of(s);
  json j;
  j["root"] = s.topology.root;
  j["nodes"] = json::array();
  for (const NodeSpec& n : s.topology.nodes)
    j["nodes"].push_back({{"id", n.id}, {"type", to_string(n.type)}, {"mult", n.mult}});
  j["edges"] = json::array();
  for (const EdgeSpec& e : s.topology.edges)
    j["edges"].push_back({{"id", e.id},
                          {"parent", e.parent},
                          {"child", e.child},
                          {"a_length", ext_str(e.a_length)},
                          {"mult", e.mult}});
  j["functions"] = json::array();
  for (const auto& [name, f] : s.functions) {
    json slopes = json::object();
    for (const EdgeSpec& e : s.topology.edges) {
      int c = *t.find_edge(e.id);
      slopes[e.id] = rational_str(f.slope(c));
    }
    j["functions"].push_back({{"name", name}, {"root_value", rational_str(f.root_value())}, {"slopes", slopes}});
  }
  j["polys"] = json::array();
  for (const auto& [name, p] : s.polys) {
    json roots = json::object();
    for (const auto& [x, e] : p.roots()) roots[t.node(x).id] = e;
    j["polys"].push_back({{"name", name}, {"const_log", rational_str(p.const_log())}, {"roots", roots}});
  }
  j["queries"] = s.queries;
  return j.dump(indent);
}

TreePoint parse_point(const DiscTree& t, const std::string& text) {
  if (text.rfind("node:", 0) == 0) {
    auto n = t.find_node(text.substr(5));
    if (!n) throw SceneError("unknown node in point '" + text + "'");
    return TreePoint::at(*n);
  }
  if (text.rfind("edge:", 0) == 0) {
    std::string rest = text.substr(5);
    auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw SceneError("edge point needs an offset: '" + text + "'");
    auto child = t.find_edge(rest.substr(0, colon));
    if (!child) throw SceneError("unknown edge in point '" + text + "'");
    Rational off;
    try {
      off = parse_rational(rest.substr(colon + 1));
    } catch (const std::exception& e) {
      throw SceneError("bad offset in point '" + text + "': " + e.what());
    }
    if (off == 0) return TreePoint::at(t.node(*child).parent);
    if (ExtRat(off) == t.node(*child).a_length) return TreePoint::at(*child);
    TreePoint p = TreePoint::on_edge(*child, off);
    try {
      t.check_point(p);
    } catch (const std::out_of_range& e) {
      throw SceneError("point '" + text + "': " + e.what());
    }
    return p;
  }
  throw SceneError("points are written node:<id> or edge:<edge id>:<offset>, got '" + text + "'");
}

std::string format_point(const DiscTree& t, const TreePoint& p) {
  if (p.is_node()) return "node:" + t.node(p.node).id;
  return "edge:" + t.node(p.node).edge_id + ":" + rational_str(*p.offset);
}

ProfileTable emit_profile(const Scene& s, const std::string& expr, const TreePoint& endpoint) {
  const DiscTree& t = tree_of(s);
  t.check_point(endpoint);
  std::vector<std::string> parts;
  {
    std::stringstream ss(expr);
    std::string piece;
    while (std::getline(ss, piece, ':')) parts.push_back(piece);
  }
  if (parts.empty()) throw SceneError("empty profile expression");
  std::function<ExtRat(const TreePoint&)> eval;
  const std::string& head = parts[0];
  if (head == "phi" && parts.size() == 2) {
    const QshFunction& f = s.function(parts[1]);
    eval = [&f](const TreePoint& p) { return f.eval(p); };
  } else if (head == "logf" && parts.size() == 2) {
    const FormalPoly& f = s.poly(parts[1]);
    eval = [&f](const TreePoint& p) { return f.log_norm(p); };
  } else if (head == "A" && parts.size() == 1) {
    eval = [&t](const TreePoint& p) { return t.coords(p).A; };
  } else if (head == "alpha" && parts.size() == 1) {
    eval = [&t](const TreePoint& p) { return t.coords(p).alpha; };
  } else if (head == "F" && parts.size() == 4) {
    const FormalPoly& f = s.poly(parts[1]);
    const QshFunction& phi = s.function(parts[2]);
    Rational eps;
    try {
      eps = parse_rational(parts[3]);
    } catch (const std::exception& e) {
      throw SceneError(std::string("bad eps in profile expression: ") + e.what());
    }
    eval = [&f, &phi, eps](const TreePoint& p) { return twisted_value(f, phi, eps, p); };
  } else {
    throw SceneError("unknown profile expression '" + expr + "'");
  }

  std::vector<TreePoint> pts;
  for (int n : t.path_from_root(endpoint.node))
    if (n != endpoint.node) pts.push_back(TreePoint::at(n));
  pts.push_back(endpoint);
  ProfileTable rows;
  for (const TreePoint& p : pts) {
    Coords c = t.coords(p);
    ExtRat v = eval(p);
    if (!c.alpha.finite() && !v.finite())
      throw std::invalid_argument("expression is not finite at an endpoint with infinite alpha");
    rows.push_back({c.alpha, c.A, v});
  }
  return rows;
}

}  // namespace berkdisc
