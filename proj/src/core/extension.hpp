#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "norms.hpp"

namespace berkdisc {

// Raised when a produced certificate fails its own verification or the reduction does not terminate.
class ExtensionDefect : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct TraceStep {
  std::string kind;  // base | type1 | type23 | type4 | segment
  std::string node;  // end of the Gamma tree handled at this level, if any
  Rational mass{0};
  long n = 0;  // truncation index of the level, 0 when the mass is below 1
  Rational eps0{0};
  std::string detail;
};

struct Certificate {
  FormalPoly f;
  Rational eps0{0};
  std::vector<TraceStep> trace;  // outermost reduction first
  const TreePtr& tree() const { return f.tree_ptr(); }
};

// f is accepted when sup_norm(f, phi, eps) <= log|f(z)| - phi(z); if phi(z) = -inf only finiteness is required.
bool verify_certificate(const QshFunction& phi, const TreePoint& z, const FormalPoly& f, const Rational& eps);
bool verify_certificate(const QshFunction& phi, const TreePoint& z, const Certificate& cert);

// Normalizes phi to vanish at the root and runs the inductive reduction. The certificate is valid for
// the normalized function and has been checked at eps0 and eps0/2.
Certificate extend(const QshFunction& phi, const TreePoint& z);

// Single reduction steps. Each normalizes, truncates phi to the hull of its Gamma tree and z,
// checks its precondition (std::invalid_argument otherwise) and recurses through extend.
Certificate step_base(const QshFunction& phi, const TreePoint& z);
Certificate step_type1(const QshFunction& phi, const TreePoint& z, int x);
Certificate step_type23(const QshFunction& phi, const TreePoint& z, int x);
Certificate step_type4(const QshFunction& phi, const TreePoint& z, int x);
Certificate step_segment(const QshFunction& phi, const TreePoint& z);

// Smallest n >= 1 for which Gamma_{phi,n} coincides with Gamma_phi.
long choose_truncation(const QshFunction& phi);

}  // namespace berkdisc
