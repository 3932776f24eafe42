#pragma once

#include <map>
#include <string>
#include <vector>

#include "extension.hpp"

namespace berkdisc {

struct MultiplierEntry {
  Rational lelong{0};
  long exponent = 0;  // floor of lelong
};

// Rigid nodes with a positive Lelong number; all other points carry the trivial ideal.
using MultiplierData = std::map<int, MultiplierEntry>;

MultiplierData multiplier_exponents(const QshFunction& phi);

// phi must be c * log|g_a| for a single rigid leaf a with root value 0. Returns (floor(level c)/level) log|g_a|.
QshFunction demailly_exact_single_pole(const QshFunction& phi, long level);

struct DemaillyBound {
  TreePoint query;
  long level = 1;
  Rational shift{0};  // phi was replaced by phi - shift so that sup phi <= 0
  ExtRat value;       // normalized phi at the query
  ExtRat lower;
  ExtRat upper;
  FormalPoly witness;
  std::string witness_source;  // generator | extension | user
};

// Certified sandwich for the level-th approximation at y. Extra candidates must live on a tree comparable with phi's.
DemaillyBound demailly_bounds(const QshFunction& phi, long level, const TreePoint& y,
                              const std::vector<FormalPoly>& extra = {});

// Candidate value (1/level)(log|f(y)| - plus_norm(f, level phi)), -inf when f is outside the ideal.
ExtRat demailly_candidate(const FormalPoly& f, const QshFunction& scaled_phi, long level, const TreePoint& y);

// Best candidate over all products of g_x (x a rigid node of the tree) of total degree <= degree_bound.
ExtRat demailly_bruteforce(const QshFunction& phi, long level, const TreePoint& y, long degree_bound);

struct SubadditivityRow {
  int node = -1;
  long sum = 0;  // floor of the Lelong number of phi + psi
  long first = 0;
  long second = 0;
  bool ok = true;
};

struct SubadditivityReport {
  bool ok = true;
  std::vector<SubadditivityRow> rows;
};

SubadditivityReport subadditivity_check(const QshFunction& phi, const QshFunction& psi);

}  // namespace berkdisc
