#include "berkdisc/berkdisc.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>

#include "demailly.hpp"
#include "json.hpp"
#include "random_scene.hpp"
#include "scene_io.hpp"

using namespace berkdisc;
using nlohmann::json;

struct bd_scene {
  Scene scene;
};

namespace {

thread_local std::string last_error;

struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadArg : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bd_status fail(bd_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

bd_status guarded(const std::function<void()>& body) {
  try {
    body();
    return BD_OK;
  } catch (const NotFound& e) {
    return fail(BD_ERR_NOT_FOUND, e.what());
  } catch (const BadArg& e) {
    return fail(BD_ERR_ARG, e.what());
  } catch (const SceneError& e) {
    return fail(BD_ERR_PARSE, e.what());
  } catch (const TreeError& e) {
    return fail(BD_ERR_INVALID, e.what());
  } catch (const ExtensionDefect& e) {
    return fail(BD_ERR_DEFECT, e.what());
  } catch (const ArithmeticError& e) {
    return fail(BD_ERR_INVALID, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BD_ERR_INVALID, e.what());
  } catch (const std::out_of_range& e) {
    return fail(BD_ERR_ARG, e.what());
  } catch (const std::exception& e) {
    return fail(BD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BD_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class T>
void need(const T* p, const char* what) {
  if (!p) throw BadArg(std::string("null ") + what);
}

const Scene& scene_of(const bd_scene* s) {
  need(s, "scene");
  return s->scene;
}

const QshFunction& fn_of(const Scene& s, const char* name) {
  need(name, "function name");
  for (const auto& [n, f] : s.functions)
    if (n == name) return f;
  throw NotFound(std::string("unknown function '") + name + "'");
}

FormalPoly poly_of(const Scene& s, const char* name) {
  need(name, "polynomial name");
  for (const auto& [n, f] : s.polys)
    if (n == name) return f;
  if (std::string(name) == "1") return FormalPoly::one(s.tree);
  throw NotFound(std::string("unknown polynomial '") + name + "'");
}

TreePoint point_of(const Scene& s, const char* text) {
  need(text, "point");
  return parse_point(*s.tree, text);
}

int node_of(const DiscTree& t, const char* id) {
  need(id, "node id");
  auto n = t.find_node(id);
  if (!n) throw NotFound(std::string("unknown node '") + id + "'");
  return *n;
}

Rational rational_of(const char* text, const char* what) {
  need(text, what);
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw SceneError(std::string("bad ") + what + " '" + text + "': " + e.what());
  }
}

std::string ext(const ExtRat& x) { return x.finite() ? to_string(x.value()) : x.str(); }

json tree_json(const DiscTree& t) {
  json nodes = json::array(), edges = json::array();
  for (const Node& n : t.nodes()) {
    nodes.push_back({{"id", n.id}, {"type", to_string(n.type)}, {"mult", n.mult}});
    if (n.parent < 0) continue;
    edges.push_back({{"id", n.edge_id},
                     {"parent", t.node(n.parent).id},
                     {"child", n.id},
                     {"a_length", ext(n.a_length)},
                     {"mult", n.mult}});
  }
  return {{"root", t.node(t.root()).id}, {"nodes", nodes}, {"edges", edges}};
}

json function_json(const QshFunction& f) {
  const DiscTree& t = f.tree();
  json slopes = json::object();
  for (const Node& n : t.nodes())
    if (n.parent >= 0) slopes[n.edge_id] = to_string(f.slope(*t.find_node(n.id)));
  return {{"root_value", to_string(f.root_value())}, {"slopes", slopes}};
}

json poly_json(const FormalPoly& f) {
  json roots = json::object();
  for (const auto& [x, e] : f.roots()) roots[f.tree().node(x).id] = e;
  return {{"f", f.str()}, {"const_log", to_string(f.const_log())}, {"roots", roots}};
}

json subtree_json(const DiscTree& t, const Subtree& s) {
  json nodes = json::array(), reach = json::object();
  if (!s.empty)
    for (const Node& n : t.nodes()) {
      int i = *t.find_node(n.id);
      if (s.contains_node(t, i)) nodes.push_back(n.id);
      if (n.parent >= 0 && s.reach[static_cast<std::size_t>(i)] > ExtRat(0)) reach[n.edge_id] = ext(s.reach[static_cast<std::size_t>(i)]);
    }
  return {{"empty", s.empty}, {"nodes", nodes}, {"reach", reach}};
}

void put(char** out, const std::string& s) {
  need(out, "output pointer");
  *out = dup(s);
}

void put(char** out, const json& j) { put(out, j.dump()); }

}  // namespace

extern "C" {

const char* bd_last_error(void) { return last_error.c_str(); }

const char* bd_status_name(bd_status s) {
  switch (s) {
    case BD_OK: return "ok";
    case BD_ERR_PARSE: return "parse error";
    case BD_ERR_INVALID: return "invalid";
    case BD_ERR_ARG: return "bad argument";
    case BD_ERR_NOT_FOUND: return "not found";
    case BD_ERR_DEFECT: return "defect";
    case BD_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* bd_version(void) { return "1.0.0"; }

void bd_string_free(char* s) { std::free(s); }

bd_status bd_scene_from_json(const char* text, bd_scene** out) {
  return guarded([&] {
    need(text, "scene text");
    need(out, "output pointer");
    *out = new bd_scene{parse_scene(text)};
  });
}

bd_status bd_scene_from_file(const char* path, bd_scene** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "output pointer");
    *out = new bd_scene{load_scene(path)};
  });
}

bd_status bd_scene_random(uint64_t seed, int max_nodes, bd_scene** out) {
  return guarded([&] {
    need(out, "output pointer");
    if (max_nodes < 2) throw BadArg("max_nodes must be at least 2");
    *out = new bd_scene{random_scene(seed, max_nodes)};
  });
}

bd_status bd_scene_to_json(const bd_scene* scene, char** out) {
  return guarded([&] { put(out, serialize_scene(scene_of(scene))); });
}

void bd_scene_free(bd_scene* scene) { delete scene; }

bd_status bd_validate(const bd_scene* scene, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    json fns = json::array();
    bool all = true;
    for (const auto& [name, f] : s.functions) {
      QshValidation v = f.validate();
      all = all && v.ok;
      fns.push_back({{"name", name}, {"valid", v.ok}, {"mass", to_string(v.mass)}, {"violations", v.violations}});
    }
    json polys = json::array();
    for (const auto& [name, p] : s.polys) polys.push_back({{"name", name}, {"f", p.str()}, {"degree", p.degree()}});
    put(out_json, json{{"valid", all}, {"nodes", s.tree->size()}, {"functions", fns}, {"polys", polys}});
  });
}

bd_status bd_eval_function(const bd_scene* scene, const char* fn, const char* point, char** out) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    put(out, ext(fn_of(s, fn).eval(point_of(s, point))));
  });
}

bd_status bd_eval_poly(const bd_scene* scene, const char* poly, const char* point, char** out) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    put(out, ext(poly_of(s, poly).log_norm(point_of(s, point))));
  });
}

bd_status bd_coords(const bd_scene* scene, const char* point, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    Coords c = s.tree->coords(point_of(s, point));
    put(out_json, json{{"A", ext(c.A)}, {"alpha", ext(c.alpha)}, {"m", c.m}});
  });
}

bd_status bd_laplacian(const bd_scene* scene, const char* fn, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    const QshFunction& f = fn_of(s, fn);
    json atoms = json::object();
    AtomicMeasure mu = f.laplacian();
    for (const auto& [n, w] : mu) atoms[s.tree->node(n).id] = to_string(w);
    put(out_json, json{{"atoms", atoms}, {"total", to_string(total_mass(mu))}, {"mass", to_string(f.validate().mass)}});
  });
}

bd_status bd_gamma(const bd_scene* scene, const char* fn, long n, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    const QshFunction& f = fn_of(s, fn);
    std::optional<long> level;
    if (n > 0) level = n;
    put(out_json, subtree_json(*s.tree, gamma_tree(f, level)));
  });
}

bd_status bd_sup_norm(const bd_scene* scene, const char* poly, const char* fn, const char* eps, char** out) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    put(out, ext(sup_norm(poly_of(s, poly), fn_of(s, fn), rational_of(eps, "eps"))));
  });
}

bd_status bd_plus_norm(const bd_scene* scene, const char* poly, const char* fn, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    PlusNorm pn = plus_norm(poly_of(s, poly), fn_of(s, fn));
    put(out_json, json{{"value", ext(pn.value)}, {"shift", to_string(pn.shift)}, {"raw", ext(pn.raw())}});
  });
}

bd_status bd_h_generator(const bd_scene* scene, const char* fn, char** out_json) {
  return guarded([&] { put(out_json, poly_json(h_generator(fn_of(scene_of(scene), fn)))); });
}

bd_status bd_multiplier(const bd_scene* scene, const char* fn, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    json rows = json::array();
    for (const auto& [n, e] : multiplier_exponents(fn_of(s, fn)))
      rows.push_back({{"node", s.tree->node(n).id}, {"lelong", to_string(e.lelong)}, {"exponent", e.exponent}});
    put(out_json, json{{"rows", rows}});
  });
}

bd_status bd_extend(const bd_scene* scene, const char* fn, const char* point, const char* step, const char* node,
                    char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    const QshFunction& phi = fn_of(s, fn);
    TreePoint z = point_of(s, point);
    std::string kind = step ? step : "auto";
    Certificate c;
    if (kind == "auto") c = extend(phi, z);
    else if (kind == "base") c = step_base(phi, z);
    else if (kind == "segment") c = step_segment(phi, z);
    else if (kind == "type1") c = step_type1(phi, z, node_of(*s.tree, node));
    else if (kind == "type23") c = step_type23(phi, z, node_of(*s.tree, node));
    else if (kind == "type4") c = step_type4(phi, z, node_of(*s.tree, node));
    else throw BadArg("unknown step '" + kind + "'");
    QshFunction normalized = phi.shifted(-phi.root_value());
    bool ok = verify_certificate(normalized, z, c.f, c.eps0) &&
              verify_certificate(normalized, z, c.f, Rational(c.eps0 / 2));
    json trace = json::array();
    for (const TraceStep& st : c.trace)
      trace.push_back({{"kind", st.kind},
                       {"node", st.node},
                       {"mass", to_string(st.mass)},
                       {"n", st.n},
                       {"eps0", to_string(st.eps0)},
                       {"detail", st.detail}});
    json j = poly_json(c.f);
    j["eps0"] = to_string(c.eps0);
    j["verified"] = ok;
    j["trace"] = trace;
    j["tree"] = tree_json(*c.tree());
    put(out_json, j);
  });
}

bd_status bd_verify(const bd_scene* scene, const char* fn, const char* point, const char* poly, const char* eps,
                    int* ok) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    need(ok, "result pointer");
    Rational e = rational_of(eps, "eps");
    if (e < 0) throw BadArg("eps must be nonnegative");
    const QshFunction& phi = fn_of(s, fn);
    *ok = verify_certificate(phi.shifted(-phi.root_value()), point_of(s, point), poly_of(s, poly), e) ? 1 : 0;
  });
}

bd_status bd_demailly_bounds(const bd_scene* scene, const char* fn, long level, const char* point, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    if (level < 1) throw BadArg("level must be a positive integer");
    std::vector<FormalPoly> extra;
    for (const auto& [name, p] : s.polys) extra.push_back(p);
    DemaillyBound b = demailly_bounds(fn_of(s, fn), level, point_of(s, point), extra);
    put(out_json, json{{"lower", ext(b.lower)},
                       {"upper", ext(b.upper)},
                       {"value", ext(b.value)},
                       {"shift", to_string(b.shift)},
                       {"witness", b.witness.str()},
                       {"source", b.witness_source}});
  });
}

bd_status bd_demailly_exact(const bd_scene* scene, const char* fn, long level, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    if (level < 1) throw BadArg("level must be a positive integer");
    QshFunction r = demailly_exact_single_pole(fn_of(s, fn), level);
    json lelong = json::object();
    for (const auto& [n, e] : multiplier_exponents(r)) lelong[s.tree->node(n).id] = to_string(e.lelong);
    put(out_json, json{{"function", function_json(r)}, {"lelong", lelong}});
  });
}

bd_status bd_demailly_bruteforce(const bd_scene* scene, const char* fn, long level, const char* point,
                                 long degree_bound, char** out) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    if (level < 1 || degree_bound < 0) throw BadArg("level must be positive and the degree bound nonnegative");
    put(out, ext(demailly_bruteforce(fn_of(s, fn), level, point_of(s, point), degree_bound)));
  });
}

bd_status bd_subadditivity(const bd_scene* scene, const char* fn, const char* other, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    SubadditivityReport r = subadditivity_check(fn_of(s, fn), fn_of(s, other));
    json rows = json::array();
    for (const SubadditivityRow& row : r.rows)
      rows.push_back({{"node", s.tree->node(row.node).id},
                      {"sum", row.sum},
                      {"first", row.first},
                      {"second", row.second},
                      {"ok", row.ok}});
    put(out_json, json{{"ok", r.ok}, {"rows", rows}});
  });
}

bd_status bd_regularize(const bd_scene* scene, const char* fn, long n, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    if (n < 0) throw BadArg("regularization index must be nonnegative");
    QshFunction r = regularize_seq(fn_of(s, fn), n);
    json j = function_json(r);
    j["subtree"] = subtree_json(*s.tree, regularization_subtree(fn_of(s, fn), n));
    j["tree"] = tree_json(r.tree());
    put(out_json, j);
  });
}

bd_status bd_profile(const bd_scene* scene, const char* expression, const char* point, char** out_json) {
  return guarded([&] {
    const Scene& s = scene_of(scene);
    need(expression, "expression");
    json rows = json::array();
    for (const ProfileRow& r : emit_profile(s, expression, point_of(s, point)))
      rows.push_back({{"alpha", ext(r.alpha)}, {"A", ext(r.A)}, {"value", ext(r.value)}});
    put(out_json, json{{"rows", rows}});
  });
}

}  // extern "C"
