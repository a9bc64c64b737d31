#pragma once

// Shared generators and independent oracles for the test suites.

#include <cstdint>
#include <vector>

#include "bfh/braid.hpp"
#include "bfh/floer.hpp"
#include "bfh/homalg.hpp"
#include "bfh/intlinalg.hpp"

namespace testsupport {

using bfh::exact::Int;
using bfh::exact::Rat;
using bfh::linalg::IntMat;

// splitmix64, self-contained so test data never depends on libstdc++ details
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  long pick(long n) { return static_cast<long>(next() % static_cast<uint64_t>(n)); }
  long range(long lo, long hi) { return lo + pick(hi - lo + 1); }  // inclusive
};

inline bfh::braid::BraidWord random_word(Rng& rng, int strands, int letters) {
  bfh::braid::BraidWord b;
  b.strands = strands;
  for (int i = 0; i < letters; ++i) {
    int idx = static_cast<int>(rng.range(1, strands - 1));
    b.letters.push_back(rng.pick(2) ? idx : -idx);
  }
  return b;
}

/// Random braid whose closure is a knot and whose diagram uses every strand
/// pair (so the Seifert surface is connected).
inline bfh::braid::BraidWord random_knot_braid(Rng& rng, int max_strands, int max_letters) {
  for (;;) {
    int n = static_cast<int>(rng.range(2, max_strands));
    int len = static_cast<int>(rng.range(n - 1, max_letters));
    bfh::braid::BraidWord b = random_word(rng, n, len);
    std::vector<int> cnt(static_cast<size_t>(n - 1), 0);
    for (int e : b.letters) cnt[static_cast<size_t>(std::abs(e) - 1)]++;
    bool covered = true;
    for (int c : cnt)
      if (c == 0) covered = false;
    if (covered && bfh::braid::closure_is_knot(b)) return b;
  }
}

/// Free ranks of homology by rational ranks (fraction-free elimination), an
/// algorithm independent of the Smith-form route used by the library.
inline std::map<long, long> homology_rank_oracle(const bfh::homalg::GradedComplex& c) {
  std::map<long, std::vector<Eigen::Index>> by_degree;
  for (Eigen::Index i = 0; i < c.size(); ++i) by_degree[c.degrees[i]].push_back(i);
  auto rank_block = [&](long dfrom) -> long {
    auto itc = by_degree.find(dfrom);
    auto itr = by_degree.find(dfrom - 1);
    if (itc == by_degree.end() || itr == by_degree.end()) return 0;
    IntMat m(static_cast<Eigen::Index>(itr->second.size()),
             static_cast<Eigen::Index>(itc->second.size()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        m(i, j) = c.boundary(itr->second[static_cast<size_t>(i)],
                             itc->second[static_cast<size_t>(j)]);
    return bfh::linalg::rank_rational<Int>(m);
  };
  std::map<long, long> out;
  for (const auto& [d, gens] : by_degree)
    out[d] = static_cast<long>(gens.size()) - rank_block(d) - rank_block(d + 1);
  return out;
}

/// Random bounded filtered complex: a matching of killing pairs plus
/// filtration-respecting unimodular changes of basis to hide the structure.
inline bfh::homalg::FilteredComplex random_filtered_complex(Rng& rng, int max_gens,
                                                            bfh::homalg::Direction dir,
                                                            long step) {
  using bfh::homalg::Direction;
  bfh::homalg::FilteredComplex fc;
  fc.direction = dir;
  fc.step = step;
  const int n = static_cast<int>(rng.range(2, max_gens));
  for (int i = 0; i < n; ++i) {
    fc.complex.ids.push_back("x" + std::to_string(i));
    long deg = rng.range(-3, 4);
    fc.complex.degrees.push_back(deg);
    if (dir == Direction::increasing)
      fc.levels.push_back(deg - rng.range(0, 2));  // level <= degree keeps q >= 0
    else
      fc.levels.push_back(deg);
  }
  fc.complex.boundary = IntMat::Zero(n, n);
  IntMat cross = IntMat::Zero(n, n);
  bool used_cross = false;
  std::vector<bool> used(static_cast<size_t>(n), false);
  int pairs = static_cast<int>(rng.range(0, n / 2));
  for (int p = 0; p < pairs; ++p) {
    int x = static_cast<int>(rng.pick(n)), y = static_cast<int>(rng.pick(n));
    if (x == y || used[static_cast<size_t>(x)] || used[static_cast<size_t>(y)]) continue;
    Int coeff(rng.range(1, 3) * (rng.pick(2) ? 1 : -1));
    if (dir == Direction::increasing) {
      if (fc.complex.degrees[static_cast<size_t>(y)] !=
              fc.complex.degrees[static_cast<size_t>(x)] - 1 ||
          fc.levels[static_cast<size_t>(y)] > fc.levels[static_cast<size_t>(x)])
        continue;
      fc.complex.boundary(y, x) = coeff;
    } else {
      long k = rng.range(0, 2);  // how many windows the trajectory descends
      long want = fc.complex.degrees[static_cast<size_t>(x)] - 1 + step * k;
      if (fc.complex.degrees[static_cast<size_t>(y)] != want) continue;
      if (k == 0) {
        fc.complex.boundary(y, x) = coeff;
      } else {
        cross(y, x) = coeff;
        used_cross = true;
      }
    }
    used[static_cast<size_t>(x)] = used[static_cast<size_t>(y)] = true;
  }
  if (used_cross) fc.cross = cross;
  // hide the matching behind unimodular changes of basis
  for (int op = 0; op < 2 * n; ++op) {
    int i = static_cast<int>(rng.pick(n)), j = static_cast<int>(rng.pick(n));
    if (i == j) continue;
    if (fc.complex.degrees[static_cast<size_t>(i)] != fc.complex.degrees[static_cast<size_t>(j)])
      continue;
    Int c(rng.range(1, 2) * (rng.pick(2) ? 1 : -1));
    bfh::homalg::FilteredComplex trial = fc;
    // basis change b_i := e_i + c e_j: conjugate every differential
    auto conj = [&](IntMat& m) {
      if (m.size() == 0) return;
      m.col(j) += m.col(i) * c;  // D P
      m.row(i) -= m.row(j) * c;  // P^{-1} D P
    };
    conj(trial.complex.boundary);
    if (trial.cross.size() != 0) conj(trial.cross);
    if (!bfh::homalg::validate(trial)) fc = std::move(trial);
  }
  return fc;
}

/// Random knot data package. Special maps are drawn from the kernels that
/// Lemma 4.2 demands; `polarity` 0 ships none, 1 allows d_beta, 2 allows
/// delta_beta.
inline bfh::floer::KnotFloerData random_knot_package(Rng& rng, int polarity,
                                                     int max_gens = 4) {
  using bfh::floer::KnotFloerData;
  KnotFloerData k;
  k.name = "synthetic";
  k.chern_n = rng.range(1, 3);
  k.alpha = Rat(rng.range(1, 3), rng.range(2, 5));
  const int n = static_cast<int>(rng.range(0, max_gens));
  Rat period = Rat(2) * k.alpha * Rat(k.chern_n);
  for (int i = 0; i < n; ++i)
    k.generators.push_back({"g" + std::to_string(i),
                            period * Rat(i + 1, n + 2),
                            rng.range(-2, 3)});
  k.boundary = IntMat::Zero(n, n);
  std::vector<bool> used(static_cast<size_t>(n), false);
  for (int p = 0; p < n / 2; ++p) {
    int x = static_cast<int>(rng.pick(n)), y = static_cast<int>(rng.pick(n));
    if (x == y || used[static_cast<size_t>(x)] || used[static_cast<size_t>(y)]) continue;
    if (k.generators[static_cast<size_t>(y)].maslov !=
        k.generators[static_cast<size_t>(x)].maslov - 1)
      continue;
    k.boundary(y, x) = Int(rng.range(1, 2) * (rng.pick(2) ? 1 : -1));
    used[static_cast<size_t>(x)] = used[static_cast<size_t>(y)] = true;
  }
  k.special_d.assign(static_cast<size_t>(n), Int(0));
  k.special_delta.assign(static_cast<size_t>(n), Int(0));
  auto maslov_block = [&](long from) {
    std::vector<Eigen::Index> cols, rows;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (k.generators[static_cast<size_t>(i)].maslov == from) cols.push_back(i);
      if (k.generators[static_cast<size_t>(i)].maslov == from - 1) rows.push_back(i);
    }
    IntMat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        m(i, j) = k.boundary(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
    return std::pair{m, cols};
  };
  if (polarity == 1) {
    // d_beta on maslov 1 with d_beta o boundary = 0: left kernel of the 2->1 block
    auto [blk, cols2] = maslov_block(2);
    std::vector<Eigen::Index> ones;
    for (Eigen::Index i = 0; i < n; ++i)
      if (k.generators[static_cast<size_t>(i)].maslov == 1) ones.push_back(i);
    IntMat kerT = bfh::linalg::kernel_basis<Int>(IntMat(blk.transpose()));
    if (kerT.cols() > 0 && !ones.empty()) {
      Eigen::Index pickcol = rng.pick(kerT.cols());
      for (size_t i = 0; i < ones.size(); ++i)
        k.special_d[static_cast<size_t>(ones[i])] =
            kerT(static_cast<Eigen::Index>(i), pickcol) * Int(rng.range(1, 2));
    }
  } else if (polarity == 2) {
    auto [blk, colsm1] = maslov_block(-1);
    IntMat ker = bfh::linalg::kernel_basis<Int>(blk);
    if (ker.cols() > 0 && !colsm1.empty()) {
      Eigen::Index pickcol = rng.pick(ker.cols());
      for (size_t i = 0; i < colsm1.size(); ++i)
        k.special_delta[static_cast<size_t>(colsm1[i])] =
            ker(static_cast<Eigen::Index>(i), pickcol) * Int(rng.range(1, 2));
    }
  }
  bfh::floer::validate(k);
  return k;
}

}  // namespace testsupport
