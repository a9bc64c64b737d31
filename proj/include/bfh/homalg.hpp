#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bfh/intlinalg.hpp"

namespace bfh::homalg {

using exact::Int;
using linalg::IntMat;

/// Finitely generated graded complex of free abelian groups.
/// Column j of `boundary` expresses the boundary of generator j; every
/// nonzero entry must connect degree d to degree d-1.
struct GradedComplex {
  std::vector<std::string> ids;
  std::vector<long> degrees;
  IntMat boundary;

  Eigen::Index size() const { return static_cast<Eigen::Index>(ids.size()); }
};

enum class Direction { increasing, decreasing };

/// Filtered complex. Levels of an increasing filtration satisfy
/// level(dx) <= level(x); a decreasing filtration follows the convention
/// that the boundary maps F_n into F_{n-1} while levels of one grading
/// class sit on a step-spaced progression.
///
/// `cross` holds the filtration-jumping part of the total differential of a
/// decreasing-filtration instance (entries dropping the degree by 1 modulo
/// step while raising the level); it feeds the higher differentials and is
/// zero for increasing instances.
struct FilteredComplex {
  GradedComplex complex;
  std::vector<long> levels;
  Direction direction = Direction::increasing;
  long step = 1;
  IntMat cross;  // empty means zero

  IntMat total_differential() const;
};

struct Violation {
  std::string kind;  // "degree" | "filtration" | "boundary_squares" | "shape"
  std::string detail;
};

std::optional<Violation> validate(const GradedComplex& c);
std::optional<Violation> validate(const FilteredComplex& fc);

struct Group {
  long free_rank = 0;
  std::vector<Int> torsion;  // elementary divisors > 1, in divisibility order

  friend bool operator==(const Group&, const Group&) = default;
};

/// Homology via Smith normal form, degree by degree.
std::map<long, Group> homology(const GradedComplex& c);

using Bidegree = std::pair<long, long>;

struct PageDifferential {
  Bidegree source, target;
  IntMat matrix;  // induced map between the free parts, in smith coordinates
  bool is_zero = true;
};

/// One page of the spectral sequence of a bounded filtered complex.
/// Bidegrees are (p, q) = (level, degree - level) for increasing filtrations
/// and (n, n mod step) for decreasing ones.
struct Page {
  long r = 0;
  Direction direction = Direction::increasing;
  long step = 1;
  std::map<Bidegree, Group> table;
  std::vector<PageDifferential> differentials;
};

Page page(const FilteredComplex& fc, long r);

struct Limit {
  std::vector<Page> pages;  // pages 0 .. stable
  Page e_infinity;
  long converged_at = 0;  // smallest r with d_{r'} = 0 for all r' >= r
};

/// Run pages until stabilization. Also asserts that E_infinity free ranks
/// agree with the associated graded of the total homology.
Limit limit(const FilteredComplex& fc);

/// Signed rank sum of a page: (-1)^{degree} free_rank, where the degree of a
/// cell is p+q for increasing instances and the level for decreasing ones.
long long euler_characteristic(const Page& p);

}  // namespace bfh::homalg
