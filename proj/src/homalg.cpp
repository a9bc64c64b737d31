#include "bfh/homalg.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace bfh::homalg {

using linalg::kernel_basis;
using linalg::lattice_basis;
using linalg::smith;
using linalg::SmithResult;
using linalg::solve_exact;

IntMat FilteredComplex::total_differential() const {
  if (cross.size() == 0) return complex.boundary;
  return complex.boundary + cross;
}

std::optional<Violation> validate(const GradedComplex& c) {
  const Eigen::Index g = c.size();
  if (c.degrees.size() != c.ids.size())
    return Violation{"shape", "degree list does not match generator list"};
  if (c.boundary.rows() != g || c.boundary.cols() != g)
    return Violation{"shape", "boundary matrix is not square of generator count"};
  for (Eigen::Index j = 0; j < g; ++j)
    for (Eigen::Index i = 0; i < g; ++i) {
      if (c.boundary(i, j).is_zero()) continue;
      if (c.degrees[i] != c.degrees[j] - 1)
        return Violation{"degree", "boundary entry " + c.ids[i] + " <- " + c.ids[j] +
                                       " does not lower the degree by 1"};
    }
  IntMat sq = c.boundary * c.boundary;
  if (!linalg::is_zero(sq))
    return Violation{"boundary_squares", "boundary composed with itself is nonzero"};
  return std::nullopt;
}

std::optional<Violation> validate(const FilteredComplex& fc) {
  if (auto v = validate(fc.complex)) return v;
  const Eigen::Index g = fc.complex.size();
  if (static_cast<Eigen::Index>(fc.levels.size()) != g)
    return Violation{"shape", "level list does not match generator list"};
  if (fc.step < 1) return Violation{"shape", "step must be positive"};
  const auto& ids = fc.complex.ids;
  if (fc.direction == Direction::increasing) {
    if (fc.cross.size() != 0 && !linalg::is_zero(fc.cross))
      return Violation{"shape", "increasing filtration takes no cross differential"};
    for (Eigen::Index j = 0; j < g; ++j)
      for (Eigen::Index i = 0; i < g; ++i) {
        if (fc.complex.boundary(i, j).is_zero()) continue;
        if (fc.levels[i] > fc.levels[j])
          return Violation{"filtration", "boundary entry " + ids[i] + " <- " + ids[j] +
                                             " raises the filtration level"};
      }
    return std::nullopt;
  }
  // decreasing
  for (Eigen::Index i = 0; i < g; ++i)
    if (fc.levels[i] != fc.complex.degrees[i])
      return Violation{"shape", "decreasing filtration requires level == degree per generator"};
  if (fc.cross.size() != 0 && (fc.cross.rows() != g || fc.cross.cols() != g))
    return Violation{"shape", "cross differential has wrong dimensions"};
  IntMat d = fc.total_differential();
  IntMat sq = d * d;
  if (!linalg::is_zero(sq))
    return Violation{"boundary_squares", "total differential composed with itself is nonzero"};
  for (Eigen::Index j = 0; j < g; ++j)
    for (Eigen::Index i = 0; i < g; ++i) {
      if (d(i, j).is_zero()) continue;
      long drop = fc.levels[j] - fc.levels[i];
      if (drop > fc.step - 1)
        return Violation{"filtration", "differential entry " + ids[i] + " <- " + ids[j] +
                                           " drops below the filtration window"};
      long residue = ((drop - 1) % fc.step + fc.step) % fc.step;
      if (residue != 0)
        return Violation{"filtration", "differential entry " + ids[i] + " <- " + ids[j] +
                                           " leaves the level progression"};
    }
  return std::nullopt;
}

namespace {

std::vector<Int> torsion_of(const std::vector<Int>& diag) {
  std::vector<Int> out;
  for (const Int& d : diag)
    if (exact::abs(d) > Int(1)) out.push_back(exact::abs(d));
  return out;
}

}  // namespace

std::map<long, Group> homology(const GradedComplex& c) {
  if (auto v = validate(c))
    throw std::invalid_argument("homology: invalid complex (" + v->kind + "): " + v->detail);
  std::map<long, std::vector<Eigen::Index>> by_degree;
  for (Eigen::Index i = 0; i < c.size(); ++i) by_degree[c.degrees[i]].push_back(i);
  auto block = [&](long dfrom) {
    // boundary restricted to columns of degree dfrom, rows of degree dfrom-1
    auto itc = by_degree.find(dfrom);
    auto itr = by_degree.find(dfrom - 1);
    Eigen::Index nc = itc == by_degree.end() ? 0 : static_cast<Eigen::Index>(itc->second.size());
    Eigen::Index nr = itr == by_degree.end() ? 0 : static_cast<Eigen::Index>(itr->second.size());
    IntMat m = IntMat::Zero(nr, nc);
    for (Eigen::Index j = 0; j < nc; ++j)
      for (Eigen::Index i = 0; i < nr; ++i)
        m(i, j) = c.boundary(itr->second[static_cast<size_t>(i)],
                             itc->second[static_cast<size_t>(j)]);
    return m;
  };
  std::map<long, Group> h;
  for (const auto& [d, gens] : by_degree) {
    SmithResult<Int> out = smith<Int>(block(d));        // boundary leaving degree d
    SmithResult<Int> in = smith<Int>(block(d + 1));     // boundary arriving from d+1
    Group grp;
    grp.free_rank = static_cast<long>(gens.size()) - out.rank - in.rank;
    grp.torsion = torsion_of(in.diag);
    if (grp.free_rank != 0 || !grp.torsion.empty()) h[d] = grp;
  }
  return h;
}

namespace {

// Everything below works with sublattices of Z^g written as column bases.
struct Slice {
  long level;
  long degree;  // meaningful for increasing instances only
};

bool operator<(const Slice& a, const Slice& b) {
  return a.level != b.level ? a.level < b.level : a.degree < b.degree;
}

struct Engine {
  const FilteredComplex& fc;
  IntMat d;
  Eigen::Index g;
  bool inc;
  long step;
  long minlev = 0, maxlev = 0;
  std::vector<Slice> slices;

  explicit Engine(const FilteredComplex& f) : fc(f), d(f.total_differential()), g(f.complex.size()) {
    inc = fc.direction == Direction::increasing;
    step = fc.step;
    std::set<std::pair<long, long>> seen;
    for (Eigen::Index i = 0; i < g; ++i) {
      minlev = i == 0 ? fc.levels[0] : std::min(minlev, fc.levels[i]);
      maxlev = i == 0 ? fc.levels[0] : std::max(maxlev, fc.levels[i]);
      seen.insert({fc.levels[i], inc ? fc.complex.degrees[i] : 0});
    }
    for (auto& [lev, deg] : seen) slices.push_back({lev, deg});
  }

  // members of the filtration: increasing keeps level <= bound, decreasing level >= bound
  bool in_filtration(Eigen::Index i, long bound) const {
    return inc ? fc.levels[i] <= bound : fc.levels[i] >= bound;
  }

  // lattice {x : supp(x) in support, (Dx) vanishes outside target filtration}
  IntMat constrained_kernel(const std::vector<Eigen::Index>& support, long target_bound) const {
    std::vector<Eigen::Index> forbidden;
    for (Eigen::Index i = 0; i < g; ++i)
      if (!in_filtration(i, target_bound)) forbidden.push_back(i);
    IntMat m(static_cast<Eigen::Index>(forbidden.size()), static_cast<Eigen::Index>(support.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        m(r, c) = d(forbidden[static_cast<size_t>(r)], support[static_cast<size_t>(c)]);
    IntMat k = kernel_basis<Int>(m);
    IntMat out = IntMat::Zero(g, k.cols());
    for (Eigen::Index c = 0; c < k.cols(); ++c)
      for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(support.size()); ++i)
        out(support[static_cast<size_t>(i)], c) = k(i, c);
    return out;
  }

  std::vector<Eigen::Index> support_of(long level_bound, std::optional<long> degree) const {
    std::vector<Eigen::Index> s;
    for (Eigen::Index i = 0; i < g; ++i) {
      if (!in_filtration(i, level_bound)) continue;
      if (degree && fc.complex.degrees[i] != *degree) continue;
      s.push_back(i);
    }
    return s;
  }

  // Z^r at a slice: x in F_level (same degree for increasing) with Dx deep enough.
  long cycle_target(long level, long r) const {
    return inc ? level - r : level - 1 + step * r;
  }

  IntMat cycles(const Slice& s, long r) const {
    auto supp = support_of(s.level, inc ? std::optional<long>(s.degree) : std::nullopt);
    return constrained_kernel(supp, cycle_target(s.level, r));
  }

  // generators of the page-r boundary subgroup at a slice
  IntMat boundaries(const Slice& s, long r) const {
    std::vector<IntMat> parts;
    if (r >= 1) {
      // sources whose differentials may land here on pages < r
      long src_bound = inc ? s.level + r - 1 : s.level - step * (r - 1) + 1;
      auto wsupp = support_of(src_bound, inc ? std::optional<long>(s.degree + 1) : std::nullopt);
      IntMat w = constrained_kernel(wsupp, s.level);
      if (w.cols() > 0) parts.push_back(d * w);
    }
    // the deeper part of the filtration at this slice
    long deeper = inc ? s.level - 1 : s.level + 1;
    std::vector<Eigen::Index> dsupp;
    for (Eigen::Index i = 0; i < g; ++i) {
      if (!in_filtration(i, deeper)) continue;
      if (inc && fc.complex.degrees[i] != s.degree) continue;
      dsupp.push_back(i);
    }
    IntMat deep = constrained_kernel(dsupp, cycle_target(s.level, r));
    if (deep.cols() > 0) parts.push_back(deep);
    Eigen::Index total = 0;
    for (auto& p : parts) total += p.cols();
    IntMat out(g, total);
    Eigen::Index at = 0;
    for (auto& p : parts) {
      out.middleCols(at, p.cols()) = p;
      at += p.cols();
    }
    return out;
  }

  struct Subquotient {
    IntMat zbasis;  // g x a
    SmithResult<Int> pres;
    IntMat uinv;
    std::vector<Eigen::Index> free_idx, tor_idx;
    Group group;
  };

  Subquotient subquotient(const Slice& s, long r) const {
    Subquotient sq;
    sq.zbasis = lattice_basis<Int>(cycles(s, r));
    const Eigen::Index a = sq.zbasis.cols();
    if (a == 0) return sq;
    IntMat bg = boundaries(s, r);
    IntMat x(a, bg.cols());
    if (bg.cols() > 0) {
      auto solved = solve_exact<Int>(sq.zbasis, bg);
      if (!solved)
        throw std::logic_error("spectral sequence internal error: boundaries escape cycles");
      x = *solved;
    } else {
      x = IntMat::Zero(a, 0);
    }
    sq.pres = smith<Int>(x);
    auto uinv = solve_exact<Int>(sq.pres.U, IntMat::Identity(a, a));
    assert(uinv);
    sq.uinv = *uinv;
    for (Eigen::Index i = 0; i < sq.pres.rank; ++i)
      if (exact::abs(sq.pres.diag[static_cast<size_t>(i)]) > Int(1)) sq.tor_idx.push_back(i);
    for (Eigen::Index i = sq.pres.rank; i < a; ++i) sq.free_idx.push_back(i);
    sq.group.free_rank = static_cast<long>(sq.free_idx.size());
    sq.group.torsion = torsion_of(sq.pres.diag);
    return sq;
  }

  // coordinates of [v] in a subquotient; nullopt when v is not in the lattice
  std::optional<Eigen::VectorX<Int>> coords(const Subquotient& sq, const IntMat& v) const {
    if (sq.zbasis.cols() == 0) return std::nullopt;
    auto c = solve_exact<Int>(sq.zbasis, v);
    if (!c) return std::nullopt;
    return (sq.pres.U * *c).col(0);
  }

  bool class_is_zero(const Subquotient& sq, const Eigen::VectorX<Int>& u) const {
    for (Eigen::Index i : sq.free_idx)
      if (!u(i).is_zero()) return false;
    for (Eigen::Index i : sq.tor_idx) {
      Int q, rem;
      Int::div_mod(u(i), sq.pres.diag[static_cast<size_t>(i)], q, rem);
      if (!rem.is_zero()) return false;
    }
    // coordinates with diag == 1 are killed entirely
    return true;
  }

  Slice target_slice(const Slice& s, long r) const {
    if (inc) return {s.level - r, s.degree - 1};
    return {s.level + step * r - 1, 0};
  }
};

}  // namespace

Page page(const FilteredComplex& fc, long r) {
  if (auto v = validate(fc))
    throw std::invalid_argument("page: invalid filtered complex (" + v->kind + "): " + v->detail);
  if (r < 0) throw std::invalid_argument("page: negative page index");
  Engine e(fc);
  Page out;
  out.r = r;
  out.direction = fc.direction;
  out.step = fc.step;
  std::map<Bidegree, Engine::Subquotient> groups;
  auto bideg = [&](const Slice& s) -> Bidegree {
    if (e.inc) return {s.level, s.degree - s.level};
    long cls = ((s.level % e.step) + e.step) % e.step;
    return {s.level, cls};
  };
  for (const Slice& s : e.slices) {
    auto sq = e.subquotient(s, r);
    Bidegree b = bideg(s);
    if (sq.group.free_rank != 0 || !sq.group.torsion.empty()) out.table[b] = sq.group;
    groups.emplace(b, std::move(sq));
  }
  for (const Slice& s : e.slices) {
    Bidegree b = bideg(s);
    const auto& src = groups.at(b);
    if (src.group.free_rank == 0 && src.group.torsion.empty()) continue;
    Slice t = e.target_slice(s, r);
    Bidegree tb = bideg(t);
    auto it = groups.find(tb);
    PageDifferential pd;
    pd.source = b;
    pd.target = tb;
    bool target_trivial =
        it == groups.end() || (it->second.group.free_rank == 0 && it->second.group.torsion.empty());
    std::vector<Eigen::Index> src_gens;
    for (Eigen::Index i : src.tor_idx) src_gens.push_back(i);
    for (Eigen::Index i : src.free_idx) src_gens.push_back(i);
    pd.matrix = IntMat::Zero(
        target_trivial ? 0 : static_cast<Eigen::Index>(it->second.free_idx.size()),
        static_cast<Eigen::Index>(src.free_idx.size()));
    pd.is_zero = true;
    if (!target_trivial) {
      const auto& tgt = it->second;
      Eigen::Index fcol = 0;
      for (Eigen::Index gi : src_gens) {
        IntMat rep = src.zbasis * src.uinv.col(gi);
        IntMat img = e.d * rep;
        bool img_zero = linalg::is_zero(img);
        if (!img_zero) {
          auto u = e.coords(tgt, img);
          if (!u)
            throw std::logic_error("spectral sequence internal error: image escapes target cycles");
          if (!e.class_is_zero(tgt, *u)) pd.is_zero = false;
          bool is_free_gen =
              std::find(src.free_idx.begin(), src.free_idx.end(), gi) != src.free_idx.end();
          if (is_free_gen) {
            Eigen::Index frow = 0;
            for (Eigen::Index ti : tgt.free_idx) pd.matrix(frow++, fcol) = (*u)(ti);
          }
        }
        if (std::find(src.free_idx.begin(), src.free_idx.end(), gi) != src.free_idx.end()) ++fcol;
      }
    }
    out.differentials.push_back(std::move(pd));
  }
  return out;
}

namespace {

long page_bound(const FilteredComplex& fc) {
  long minlev = 0, maxlev = 0;
  for (size_t i = 0; i < fc.levels.size(); ++i) {
    minlev = i == 0 ? fc.levels[0] : std::min(minlev, fc.levels[i]);
    maxlev = i == 0 ? fc.levels[0] : std::max(maxlev, fc.levels[i]);
  }
  long span = maxlev - minlev;
  if (fc.direction == Direction::increasing) return span + 2;
  return (span + 1) / fc.step + 2;
}

}  // namespace

Limit limit(const FilteredComplex& fc) {
  if (auto v = validate(fc))
    throw std::invalid_argument("limit: invalid filtered complex (" + v->kind + "): " + v->detail);
  Limit out;
  const long bound = page_bound(fc);
  long last_nonzero = -1;
  for (long r = 0; r <= bound; ++r) {
    out.pages.push_back(page(fc, r));
    for (const auto& pd : out.pages.back().differentials)
      if (!pd.is_zero) last_nonzero = r;
  }
  out.e_infinity = out.pages.back();
  out.converged_at = last_nonzero + 1;

  // E_infinity must be the associated graded of the total homology (free ranks).
  if (fc.direction == Direction::increasing) {
    std::map<long, long> einf_rank;
    for (const auto& [b, grp] : out.e_infinity.table) einf_rank[b.first + b.second] += grp.free_rank;
    std::map<long, long> h_rank;
    for (const auto& [deg, grp] : homology(fc.complex)) h_rank[deg] = grp.free_rank;
    for (auto& [deg, rk] : h_rank)
      if (einf_rank[deg] != rk)
        throw std::logic_error("spectral sequence did not converge to total homology");
    for (auto& [deg, rk] : einf_rank)
      if (rk != h_rank[deg])
        throw std::logic_error("spectral sequence did not converge to total homology");
  } else {
    // classes mod step; the total differential maps class j to class j-1
    const long m = fc.step;
    IntMat d = fc.total_differential();
    const Eigen::Index g = fc.complex.size();
    std::map<long, std::vector<Eigen::Index>> by_class;
    for (Eigen::Index i = 0; i < g; ++i)
      by_class[((fc.levels[i] % m) + m) % m].push_back(i);
    auto block = [&](long cfrom) {
      long cto = ((cfrom - 1) % m + m) % m;
      auto itc = by_class.find(cfrom);
      auto itr = by_class.find(cto);
      Eigen::Index nc = itc == by_class.end() ? 0 : static_cast<Eigen::Index>(itc->second.size());
      Eigen::Index nr = itr == by_class.end() ? 0 : static_cast<Eigen::Index>(itr->second.size());
      IntMat mm = IntMat::Zero(nr, nc);
      for (Eigen::Index j = 0; j < nc; ++j)
        for (Eigen::Index i = 0; i < nr; ++i)
          mm(i, j) = d(itr->second[static_cast<size_t>(i)], itc->second[static_cast<size_t>(j)]);
      return mm;
    };
    for (long cls = 0; cls < m; ++cls) {
      auto it = by_class.find(cls);
      long dim = it == by_class.end() ? 0 : static_cast<long>(it->second.size());
      long rk_out = smith<Int>(block(cls)).rank;
      long rk_in = smith<Int>(block((cls + 1) % m)).rank;
      long h = dim - rk_out - rk_in;
      long einf = 0;
      for (const auto& [b, grp] : out.e_infinity.table)
        if (((b.first % m) + m) % m == cls) einf += grp.free_rank;
      if (h != einf)
        throw std::logic_error("spectral sequence did not converge to total homology");
    }
  }
  return out;
}

long long euler_characteristic(const Page& p) {
  long long chi = 0;
  for (const auto& [b, grp] : p.table) {
    long deg = p.direction == Direction::increasing ? b.first + b.second : b.first;
    chi += (deg % 2 == 0 ? 1 : -1) * grp.free_rank;
  }
  return chi;
}

}  // namespace bfh::homalg
