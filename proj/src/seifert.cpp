#include "bfh/seifert.hpp"

#include <cstdlib>
#include <vector>

namespace bfh::seifert {

using exact::Int;
using exact::Rat;
using linalg::RatMat;

namespace {

struct Brick {
  int pos;   // index in the word, top to bottom
  int sign;  // crossing sign
};

// One H1 generator: the cycle through two consecutive bricks of one column.
struct Cycle {
  int column;
  Brick a, b;  // a.pos < b.pos
};

}  // namespace

IntMat seifert_matrix(const braid::BraidWord& b) {
  if (!braid::closure_is_knot(b))
    throw std::invalid_argument("seifert_matrix: closure is not a knot");
  const int cols = b.strands - 1;
  std::vector<std::vector<Brick>> column(static_cast<size_t>(cols));
  for (size_t p = 0; p < b.letters.size(); ++p) {
    int e = b.letters[p];
    column[static_cast<size_t>(std::abs(e) - 1)].push_back(
        {static_cast<int>(p), e > 0 ? 1 : -1});
  }
  for (int c = 0; c < cols; ++c) {
    if (column[static_cast<size_t>(c)].empty())
      throw std::invalid_argument("seifert_matrix: band diagram disconnected at strand pair " +
                                  std::to_string(c + 1));
  }
  std::vector<Cycle> gens;
  for (int c = 0; c < cols; ++c) {
    const auto& bricks = column[static_cast<size_t>(c)];
    for (size_t j = 0; j + 1 < bricks.size(); ++j)
      gens.push_back({c, bricks[j], bricks[j + 1]});
  }
  const auto g = static_cast<Eigen::Index>(gens.size());
  IntMat v = IntMat::Zero(g, g);
  for (Eigen::Index h = 0; h < g; ++h) {
    const Cycle& x = gens[static_cast<size_t>(h)];
    v(h, h) = Int(-(x.a.sign + x.b.sign) / 2);
    for (Eigen::Index k = h + 1; k < g; ++k) {
      const Cycle& y = gens[static_cast<size_t>(k)];
      if (y.column == x.column) {
        // consecutive cycles of one column share a brick
        if (y.a.pos == x.b.pos) {
          v(h, k) = Int((x.b.sign + 1) / 2);
          v(k, h) = Int((x.b.sign - 1) / 2);
        }
        continue;
      }
      if (std::abs(y.column - x.column) != 1) continue;
      // adjacent columns link once iff the brick pairs interleave
      const Cycle& left = x.column < y.column ? x : y;
      const Cycle& right = x.column < y.column ? y : x;
      int entry_lr = 0, entry_rl = 0;  // V[left][right], V[right][left]
      if (left.a.pos < right.a.pos && right.a.pos < left.b.pos && left.b.pos < right.b.pos) {
        entry_rl = -1;
      } else if (right.a.pos < left.a.pos && left.a.pos < right.b.pos &&
                 right.b.pos < left.b.pos) {
        entry_lr = 1;
      }
      if (entry_lr == 0 && entry_rl == 0) continue;
      if (x.column < y.column) {
        v(h, k) = Int(entry_lr);
        v(k, h) = Int(entry_rl);
      } else {
        v(h, k) = Int(entry_rl);
        v(k, h) = Int(entry_lr);
      }
    }
  }
  return v;
}

int symmetric_signature(const IntMat& s) {
  const Eigen::Index n = s.rows();
  RatMat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Rat(s(i, j));
  std::vector<bool> active(static_cast<size_t>(n), true);
  int sig = 0;
  for (Eigen::Index done = 0; done < n;) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (active[static_cast<size_t>(i)] && !m(i, i).is_zero()) {
        pivot = i;
        break;
      }
    if (pivot >= 0) {
      sig += m(pivot, pivot).sign();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == pivot || !active[static_cast<size_t>(j)]) continue;
        if (m(j, pivot).is_zero()) continue;
        Rat f = m(j, pivot) / m(pivot, pivot);
        for (Eigen::Index k = 0; k < n; ++k) {
          if (!active[static_cast<size_t>(k)] || k == pivot) continue;
          m(j, k) -= f * m(pivot, k);
        }
        m(j, pivot) = Rat(0);
      }
      for (Eigen::Index k = 0; k < n; ++k) m(pivot, k) = Rat(0);
      active[static_cast<size_t>(pivot)] = false;
      ++done;
      continue;
    }
    // all active diagonal entries vanish; a nonzero off-diagonal pair is
    // hyperbolic, so fold one row in to create a usable pivot
    Eigen::Index oi = -1, oj = -1;
    for (Eigen::Index i = 0; i < n && oi < 0; ++i) {
      if (!active[static_cast<size_t>(i)]) continue;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (!active[static_cast<size_t>(j)]) continue;
        if (!m(i, j).is_zero()) {
          oi = i;
          oj = j;
          break;
        }
      }
    }
    if (oi < 0) break;  // zero form on the rest
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!active[static_cast<size_t>(k)]) continue;
      m(oi, k) += m(oj, k);
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!active[static_cast<size_t>(k)]) continue;
      m(k, oi) += m(k, oj);
    }
  }
  return sig;
}

int signature(const braid::BraidWord& b) {
  IntMat v = seifert_matrix(b);
  IntMat s = v + IntMat(v.transpose());
  return symmetric_signature(s);
}

Int determinant(const braid::BraidWord& b) {
  IntMat v = seifert_matrix(b);
  IntMat s = v + IntMat(v.transpose());
  Int d = linalg::det_bareiss<Int>(s);
  return exact::abs(d);
}

}  // namespace bfh::seifert
