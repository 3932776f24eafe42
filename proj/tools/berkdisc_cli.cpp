// Command-line front end. Talks to the library only through the C interface.

#include <cstdint>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "berkdisc/berkdisc.h"
#include "json.hpp"

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUsage = 2;

struct Args {
  std::string scene_path;
  std::optional<std::uint64_t> seed;
  int max_nodes = 10;
  bool as_json = false;
  std::string phi, psi, poly, point, eps = "0", step = "auto", node, expr;
  long n = 0;
  long level = 1;
  long degree = 0;
  bool trace = false;
};

// Failure of a library call, carrying the exit code to use.
struct Failure {
  int code;
  std::string message;
};

int exit_code_for(bd_status s) {
  switch (s) {
    case BD_ERR_ARG:
    case BD_ERR_NOT_FOUND:
    case BD_ERR_PARSE:
      return kUsage;
    default:
      return kInvalid;
  }
}

void check(bd_status s) {
  if (s != BD_OK) throw Failure{exit_code_for(s), std::string(bd_status_name(s)) + ": " + bd_last_error()};
}

struct SceneHandle {
  bd_scene* p = nullptr;
  ~SceneHandle() { bd_scene_free(p); }
};

std::string take(char* s) {
  std::string out(s ? s : "");
  bd_string_free(s);
  return out;
}

template <class Fn>
std::string call_str(Fn&& fn) {
  char* out = nullptr;
  check(fn(&out));
  return take(out);
}

template <class Fn>
json call_json(Fn&& fn) {
  return json::parse(call_str(std::forward<Fn>(fn)));
}

std::string s(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string first_name(const json& listing, const char* key) {
  const json& arr = listing.at(key);
  return arr.empty() ? std::string() : arr.at(0).at("name").get<std::string>();
}

void emit(const Args& a, const json& j, const std::string& text) {
  if (a.as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

int run(const std::string& cmd, Args& a) {
  if (cmd == "generate") {
    if (!a.seed) throw Failure{kUsage, "generate needs --seed"};
    SceneHandle h;
    check(bd_scene_random(*a.seed, a.max_nodes, &h.p));
    std::cout << call_str([&](char** o) { return bd_scene_to_json(h.p, o); }) << "\n";
    return kOk;
  }

  SceneHandle h;
  bd_status st;
  if (!a.scene_path.empty())
    st = bd_scene_from_file(a.scene_path.c_str(), &h.p);
  else if (a.seed)
    st = bd_scene_random(*a.seed, a.max_nodes, &h.p);
  else
    throw Failure{kUsage, "a scene file or --seed is required"};
  if (st != BD_OK) {
    // malformed or invalid scenes are validation failures, whatever the command
    std::string msg = bd_last_error();
    if (cmd == "validate" && !a.as_json) {
      std::cout << "invalid scene\n";
      std::stringstream ss(msg);
      std::string line;
      while (std::getline(ss, line, ';')) std::cout << "  " << line.substr(line.find_first_not_of(' ')) << "\n";
    } else if (cmd == "validate") {
      std::cout << json{{"valid", false}, {"error", msg}}.dump(2) << "\n";
    }
    throw Failure{kInvalid, std::string(bd_status_name(st)) + ": " + msg};
  }
  bd_scene* sc = h.p;

  json listing = call_json([&](char** o) { return bd_validate(sc, o); });
  const bool poly_only = !a.poly.empty() && a.phi.empty();
  if (a.phi.empty()) a.phi = first_name(listing, "functions");
  if (a.poly.empty()) a.poly = first_name(listing, "polys");
  const char* phi = a.phi.c_str();
  const char* poly = a.poly.c_str();
  const char* pt = a.point.c_str();

  std::ostringstream out;
  if (cmd == "validate") {
    out << "nodes = " << listing["nodes"].get<long>() << "\n";
    for (const json& f : listing["functions"]) {
      out << "function " << s(f["name"]) << ": " << (f["valid"].get<bool>() ? "valid" : "invalid")
          << ", mass = " << s(f["mass"]) << "\n";
      for (const json& v : f["violations"]) out << "  " << s(v) << "\n";
    }
    for (const json& p : listing["polys"]) out << "poly " << s(p["name"]) << " = " << s(p["f"]) << "\n";
    out << "valid = " << (listing["valid"].get<bool>() ? "true" : "false") << "\n";
    emit(a, listing, out.str());
    return listing["valid"].get<bool>() ? kOk : kInvalid;
  }
  if (cmd == "eval") {
    std::string v = poly_only ? call_str([&](char** o) { return bd_eval_poly(sc, poly, pt, o); })
                              : call_str([&](char** o) { return bd_eval_function(sc, phi, pt, o); });
    json c = call_json([&](char** o) { return bd_coords(sc, pt, o); });
    out << "value = " << v << ", A = " << s(c["A"]) << ", alpha = " << s(c["alpha"]) << ", m = " << c["m"] << "\n";
    c["value"] = v;
    emit(a, c, out.str());
    return kOk;
  }
  if (cmd == "laplacian") {
    json j = call_json([&](char** o) { return bd_laplacian(sc, phi, o); });
    for (const auto& [id, w] : j["atoms"].items()) out << "atom " << id << " = " << s(w) << "\n";
    out << "total = " << s(j["total"]) << "\nmass = " << s(j["mass"]) << "\n";
    emit(a, j, out.str());
    return kOk;
  }
  if (cmd == "gamma") {
    json j = call_json([&](char** o) { return bd_gamma(sc, phi, a.n, o); });
    if (j["empty"].get<bool>()) {
      out << "gamma = empty\n";
    } else {
      out << "gamma = {";
      bool first = true;
      for (const json& id : j["nodes"]) {
        out << (first ? "" : ", ") << s(id);
        first = false;
      }
      out << "}\n";
    }
    emit(a, j, out.str());
    return kOk;
  }
  if (cmd == "norm") {
    std::string v = call_str([&](char** o) { return bd_sup_norm(sc, poly, phi, a.eps.c_str(), o); });
    emit(a, json{{"log_norm", v}}, "log_norm = " + v + "\n");
    return kOk;
  }
  if (cmd == "plus-norm") {
    json j = call_json([&](char** o) { return bd_plus_norm(sc, poly, phi, o); });
    emit(a, j, "plus_norm = " + s(j["value"]) + ", shift = " + s(j["shift"]) + "\n");
    return kOk;
  }
  if (cmd == "hgen") {
    json j = call_json([&](char** o) { return bd_h_generator(sc, phi, o); });
    emit(a, j, "h = " + s(j["f"]) + "\n");
    return kOk;
  }
  if (cmd == "multiplier") {
    json j = call_json([&](char** o) { return bd_multiplier(sc, phi, o); });
    if (j["rows"].empty()) out << "trivial\n";
    for (const json& r : j["rows"])
      out << s(r["node"]) << ": c = " << s(r["lelong"]) << ", exponent = " << r["exponent"] << "\n";
    emit(a, j, out.str());
    return kOk;
  }
  if (cmd == "extend") {
    const char* node = a.node.empty() ? nullptr : a.node.c_str();
    json j = call_json([&](char** o) { return bd_extend(sc, phi, pt, a.step.c_str(), node, o); });
    out << "f = " << s(j["f"]) << ", eps0 = " << s(j["eps0"]) << ", verified = " << (j["verified"].get<bool>() ? "true" : "false")
        << "\n";
    if (a.trace)
      for (const json& t : j["trace"])
        out << "  " << s(t["kind"]) << (s(t["node"]).empty() ? "" : " " + s(t["node"])) << ": mass = " << s(t["mass"])
            << ", n = " << t["n"] << ", eps0 = " << s(t["eps0"]) << " (" << s(t["detail"]) << ")\n";
    emit(a, j, out.str());
    return kOk;
  }
  if (cmd == "verify") {
    int ok = 0;
    check(bd_verify(sc, phi, pt, poly, a.eps.c_str(), &ok));
    emit(a, json{{"verified", ok != 0}}, std::string("verified = ") + (ok ? "true" : "false") + "\n");
    return kOk;
  }
  if (cmd == "demailly-bounds") {
    json j = call_json([&](char** o) { return bd_demailly_bounds(sc, phi, a.level, pt, o); });
    out << "value = " << s(j["value"]) << ", lower = " << s(j["lower"]) << ", upper = " << s(j["upper"])
        << ", witness = " << s(j["witness"]) << " (" << s(j["source"]) << ")\n";
    emit(a, j, out.str());
    return kOk;
  }
  if (cmd == "demailly-exact") {
    json j = call_json([&](char** o) { return bd_demailly_exact(sc, phi, a.level, o); });
    for (const auto& [id, c] : j["lelong"].items()) out << "c_" << id << " = " << s(c) << "\n";
    for (const auto& [e, v] : j["function"]["slopes"].items()) out << "slope " << e << " = " << s(v) << "\n";
    emit(a, j, out.str());
    return kOk;
  }
  if (cmd == "demailly-brute") {
    std::string v = call_str([&](char** o) { return bd_demailly_bruteforce(sc, phi, a.level, pt, a.degree, o); });
    emit(a, json{{"value", v}}, "value = " + v + "\n");
    return kOk;
  }
  if (cmd == "subadd") {
    json j = call_json([&](char** o) { return bd_subadditivity(sc, phi, a.psi.c_str(), o); });
    out << "subadditive = " << (j["ok"].get<bool>() ? "true" : "false") << "\n";
    for (const json& r : j["rows"])
      out << "  " << s(r["node"]) << ": " << r["sum"] << " >= " << r["first"] << " + " << r["second"] << "\n";
    emit(a, j, out.str());
    return kOk;
  }
  if (cmd == "regularize") {
    json j = call_json([&](char** o) { return bd_regularize(sc, phi, a.n, o); });
    out << "root_value = " << s(j["root_value"]) << "\n";
    for (const auto& [e, v] : j["slopes"].items()) out << "slope " << e << " = " << s(v) << "\n";
    emit(a, j, out.str());
    return kOk;
  }
  if (cmd == "profile") {
    if (a.expr.empty()) a.expr = "phi:" + a.phi;
    json j = call_json([&](char** o) { return bd_profile(sc, a.expr.c_str(), pt, o); });
    out << "alpha A value\n";
    for (const json& r : j["rows"]) out << s(r["alpha"]) << " " << s(r["A"]) << " " << s(r["value"]) << "\n";
    emit(a, j, out.str());
    return kOk;
  }
  throw Failure{kUsage, "unknown command '" + cmd + "'"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"berkdisc: exact potential theory on finite models of the Berkovich unit disc"};
  app.require_subcommand(1, 1);
  Args a;
  auto common = [&](CLI::App* sub) {
    sub->add_option("scene", a.scene_path, "scene JSON file");
    sub->add_option("--seed", a.seed, "use the built-in random scene with this seed");
    sub->add_option("--max-nodes", a.max_nodes, "node budget of the random scene")->check(CLI::Range(2, 64));
    sub->add_flag("--json", a.as_json, "machine-readable output");
    return sub;
  };
  auto phi = [&](CLI::App* sub) { sub->add_option("--phi", a.phi, "function name (default: first in scene)"); };
  auto poly = [&](CLI::App* sub) { sub->add_option("--f", a.poly, "polynomial name, or 1 (default: first in scene)"); };
  auto point = [&](CLI::App* sub, const char* flag, bool required) {
    auto* o = sub->add_option(flag, a.point, "point: node:<id> or edge:<edge id>:<A-offset>");
    if (required) o->required();
  };

  struct Spec {
    const char* name;
    const char* help;
  };
  const std::vector<Spec> commands = {
      {"validate", "check tree invariants and the functions of a scene"},
      {"eval", "value of a function (or log|f| with --f) at a point"},
      {"laplacian", "atoms of the Laplacian and the mass"},
      {"gamma", "Gamma tree of a function (--n for the truncated one)"},
      {"norm", "twisted sup-norm of f against (1+eps) phi"},
      {"plus-norm", "limit norm as eps tends to 0"},
      {"hgen", "generator of the ideal of a function"},
      {"extend", "extension certificate at a point"},
      {"verify", "check f as an extension at a point"},
      {"demailly-bounds", "certified bounds for the level-m approximation"},
      {"demailly-exact", "closed form for a single pole"},
      {"demailly-brute", "brute-force lower bound for the level-m approximation"},
      {"multiplier", "Lelong numbers and multiplier exponents"},
      {"subadd", "subadditivity of multiplier exponents for --phi and --psi"},
      {"regularize", "n-th term of the regularizing sequence"},
      {"profile", "breakpoint table along the path to a point"},
      {"generate", "print the random scene for --seed"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const Spec& c : commands) subs[c.name] = common(app.add_subcommand(c.name, c.help));

  phi(subs["eval"]);
  poly(subs["eval"]);
  point(subs["eval"], "--at", true);
  phi(subs["laplacian"]);
  phi(subs["gamma"]);
  subs["gamma"]->add_option("--n", a.n, "truncation index (omit for the limit)");
  for (const char* c : {"norm", "plus-norm"}) {
    phi(subs[c]);
    poly(subs[c]);
  }
  subs["norm"]->add_option("--eps", a.eps, "rational eps >= 0");
  phi(subs["hgen"]);
  phi(subs["multiplier"]);
  phi(subs["extend"]);
  point(subs["extend"], "--z", true);
  subs["extend"]->add_option("--step", a.step, "auto | base | type1 | type23 | type4 | segment");
  subs["extend"]->add_option("--node", a.node, "end handled by a single step");
  subs["extend"]->add_flag("--trace", a.trace, "print the reduction steps");
  phi(subs["verify"]);
  poly(subs["verify"]);
  point(subs["verify"], "--z", true);
  subs["verify"]->add_option("--eps", a.eps, "rational eps >= 0")->required();
  for (const char* c : {"demailly-bounds", "demailly-exact", "demailly-brute"}) {
    phi(subs[c]);
    subs[c]->add_option("-m,--level", a.level, "approximation level")->check(CLI::PositiveNumber);
  }
  point(subs["demailly-bounds"], "--y", true);
  point(subs["demailly-brute"], "--y", true);
  subs["demailly-brute"]->add_option("--degree", a.degree, "total degree bound")->required();
  phi(subs["subadd"]);
  subs["subadd"]->add_option("--psi", a.psi, "second function")->required();
  phi(subs["regularize"]);
  subs["regularize"]->add_option("--n", a.n, "sequence index")->required();
  phi(subs["profile"]);
  point(subs["profile"], "--to", true);
  subs["profile"]->add_option("--expr", a.expr, "phi:<fn> | logf:<poly> | A | alpha | F:<poly>:<fn>:<eps>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run(cmd, a);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}
