#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfh/braid.hpp"
#include "bfh/homalg.hpp"
#include "bfh/intlinalg.hpp"

namespace bfh::floer {

using exact::Int;
using exact::Rat;
using linalg::IntMat;

/// Raised when a knot data package breaks one of its structural constraints.
/// `law` carries the canonical label used in reports and exit diagnostics.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(std::string law_, const std::string& detail)
      : std::runtime_error(law_ + ": " + detail), law(std::move(law_)) {}
  std::string law;
};

struct FloerGenerator {
  std::string id;
  Rat action;   // in [0, 2*alpha*N)
  long maslov;  // integer lift of the grading
};

/// Per-knot algebraic package. The boundary and the two special maps are
/// trajectory counts supplied as data; only their algebraic constraints are
/// enforced here.
struct KnotFloerData {
  std::string name;
  std::optional<braid::BraidWord> braid;
  long chern_n = 1;  // N(K)
  Rat alpha;         // monotonicity constant
  std::vector<FloerGenerator> generators;
  IntMat boundary;                     // degree -1 in the lift, within one window
  std::vector<Int> special_d;          // row vector on maslov == 1 generators
  std::vector<Int> special_delta;      // column vector into maslov == -1 generators
  IntMat cross_boundary;               // optional deeper-window trajectory counts

  Eigen::Index size() const { return static_cast<Eigen::Index>(generators.size()); }
};

/// Full invariant check; throws InvariantViolation naming the violated law.
void validate(const KnotFloerData& k);

Rat action_period(const KnotFloerData& k);  // 2 * alpha * N

/// Re-lift every generator into the action window (r, r + 2*alpha*N) and
/// return the Z-graded complex. r must avoid the action spectrum mod the
/// period and must not separate it (the boundary data is tied to one window).
homalg::GradedComplex lift_window(const KnotFloerData& k, const Rat& r);

/// Spectral sequence of the deck-translation filtration: the Z-graded
/// homology of the braid on page 1, the Z_{2N}-graded homology of the knot
/// in the limit.
struct SpectralRun {
  homalg::FilteredComplex filtered;
  std::vector<homalg::Page> pages;
  homalg::Page e_infinity;
  long converged_at = 0;
};
SpectralRun deck_spectral(const KnotFloerData& k, const Rat& r);

enum class Origin { left_star_s, s_star_right, circle_bottom, circle_top };

struct CompositeGenerator {
  std::string id;
  Origin origin;
  long maslov;            // total degree
  Eigen::Index left_idx = -1, right_idx = -1;
};

/// Chain data of a connected sum: one generator per isolated stratum, two
/// per U(1) stratum, graded additively.
struct CompositeFloerData {
  KnotFloerData left, right;
  long chern_n = 1;  // gcd of the factors
  Rat alpha;
  std::vector<CompositeGenerator> generators;

  Eigen::Index size() const { return static_cast<Eigen::Index>(generators.size()); }
  std::optional<braid::BraidWord> braid() const;  // connected sum when both factors carry one
};

CompositeFloerData compose(const KnotFloerData& k1, const KnotFloerData& k2);

/// First differential of the stratum spectral sequence, assembled from the
/// six constituent maps with the Koszul sign (-1)^{maslov(left factor)} on
/// every right-factor map. Verifies degree -1 and d1 o d1 = 0.
IntMat composite_d1(const CompositeFloerData& c);

/// Spectral sequence of the Maslov filtration of the composite complex.
/// d2 entries, when supplied, must map bidegree (p,q) to (p-2, q+1).
SpectralRun stratum_spectral(const CompositeFloerData& c,
                             const IntMat* d2_plugin = nullptr);

/// Finitely supported integer Laurent polynomial.
struct LaurentPoly {
  std::map<long, long long> coefficients;

  long long eval_at_minus_one() const;
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;
};

LaurentPoly laurent(const homalg::Page& p);
long long euler(const LaurentPoly& p);

struct IdentityCheck {
  std::string label;
  bool pass = false;
  std::string detail;
};

/// Exact verification of the page identities: the Poincare-Laurent recursion,
/// Euler characteristic constancy, additivity under composition, and the
/// half-signature identity whenever a braid is attached.
std::vector<IdentityCheck> check_identities(const KnotFloerData& k, const SpectralRun& run);
std::vector<IdentityCheck> check_identities(const CompositeFloerData& c, const SpectralRun& run);

/// Packages shipped with the artifact: "unknot", "trefoil", "figure8".
/// N and alpha are illustrative placeholders; gradings and counts are pinned
/// by the representation enumeration and the signature identity.
KnotFloerData builtin_knot_data(const std::string& name);

}  // namespace bfh::floer
