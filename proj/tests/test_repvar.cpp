#include <doctest.h>

#include <cmath>

#include "bfh/repvar.hpp"
#include "support.hpp"

using namespace bfh;
using namespace bfh::repvar;
using braid::parse;
using testsupport::Rng;

namespace {

Vector3d rand_unit(Rng& rng) {
  for (;;) {
    Vector3d v(2.0 * (rng.next() >> 11) * 0x1.0p-53 - 1, 2.0 * (rng.next() >> 11) * 0x1.0p-53 - 1,
               2.0 * (rng.next() >> 11) * 0x1.0p-53 - 1);
    double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

// quaternion product of pure quaternions, the conserved quantity of the action
struct Quat {
  double w, x, y, z;
};
Quat mul(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
Quat product_of(const std::vector<Vector3d>& v) {
  Quat p{1, 0, 0, 0};
  for (const auto& u : v) p = mul(p, Quat{0, u.x(), u.y(), u.z()});
  return p;
}

}  // namespace

TEST_CASE("braid action basics") {
  std::vector<Vector3d> v{Vector3d::UnitZ(), Vector3d::UnitX()};
  CHECK(braid_action(parse("@2"), v) == v);

  std::vector<Vector3d> same{Vector3d::UnitZ(), Vector3d::UnitZ()};
  auto fixed = braid_action(parse("s1"), same);
  CHECK((fixed[0] - Vector3d::UnitZ()).norm() < 1e-15);
  CHECK((fixed[1] - Vector3d::UnitZ()).norm() < 1e-15);
}

TEST_CASE("braid action conserves the total quaternion product") {
  Rng rng(404);
  for (int t = 0; t < 100; ++t) {
    auto b = testsupport::random_word(rng, 4, 9);
    std::vector<Vector3d> v;
    for (int i = 0; i < 4; ++i) v.push_back(rand_unit(rng));
    auto w = braid_action(b, v);
    for (const auto& u : w) CHECK(std::abs(u.norm() - 1.0) < 1e-12);
    Quat pv = product_of(v), pw = product_of(w);
    CHECK(std::abs(pv.w - pw.w) < 1e-12);
    CHECK(std::abs(pv.x - pw.x) < 1e-12);
    CHECK(std::abs(pv.y - pw.y) < 1e-12);
    CHECK(std::abs(pv.z - pw.z) < 1e-12);
  }
}

TEST_CASE("braid action composition law") {
  Rng rng(405);
  for (int t = 0; t < 50; ++t) {
    auto b1 = testsupport::random_word(rng, 3, 6);
    auto b2 = testsupport::random_word(rng, 3, 6);
    std::vector<Vector3d> v{rand_unit(rng), rand_unit(rng), rand_unit(rng)};
    braid::BraidWord cat = b1;
    cat.letters.insert(cat.letters.end(), b2.letters.begin(), b2.letters.end());
    auto lhs = braid_action(cat, v);
    auto rhs = braid_action(b2, braid_action(b1, v));
    for (size_t i = 0; i < v.size(); ++i) CHECK((lhs[i] - rhs[i]).norm() < 1e-12);
  }
}

TEST_CASE("sigma_1^2 formula") {
  Rng rng(406);
  for (int t = 0; t < 20; ++t) {
    Vector3d a = rand_unit(rng), b = rand_unit(rng);
    auto out = braid_action(parse("s1^2"), {a, b});
    Vector3d rab = 2.0 * a.dot(b) * a - b;  // R_a(b)
    Vector3d expect0 = 2.0 * rab.dot(a) * rab - a;
    CHECK((out[0] - expect0).norm() < 1e-13);
    CHECK((out[1] - rab).norm() < 1e-13);
  }
}

TEST_CASE("fingerprint is conjugation invariant") {
  Rng rng(407);
  for (int t = 0; t < 30; ++t) {
    std::vector<Vector3d> v{rand_unit(rng), rand_unit(rng), rand_unit(rng)};
    Eigen::Quaterniond q = Eigen::Quaterniond::UnitRandom();
    std::vector<Vector3d> w;
    for (const auto& u : v) w.push_back(q * u);
    auto f1 = fingerprint(v), f2 = fingerprint(w);
    REQUIRE(f1.size() == f2.size());
    for (size_t i = 0; i < f1.size(); ++i) CHECK(std::abs(f1[i] - f2[i]) <= 2e-6);
  }
}

TEST_CASE("gauge fix produces a canonical representative") {
  Rng rng(408);
  for (int t = 0; t < 30; ++t) {
    std::vector<Vector3d> v{rand_unit(rng), rand_unit(rng), rand_unit(rng)};
    Eigen::Quaterniond q = Eigen::Quaterniond::UnitRandom();
    std::vector<Vector3d> w;
    for (const auto& u : v) w.push_back(q * u);
    auto gv = gauge_fix(v), gw = gauge_fix(w);
    CHECK((gv[0] - Vector3d::UnitZ()).norm() < 1e-12);
    CHECK(std::abs(gv[1].y()) < 1e-10);
    CHECK(gv[1].x() >= -1e-12);
    for (size_t i = 0; i < v.size(); ++i) CHECK((gv[i] - gw[i]).norm() < 1e-9);
  }
}

TEST_CASE("unknot has no irreducible strata") {
  SolverConfig cfg;
  cfg.restarts = 200;
  CHECK(find_strata(parse("s1"), cfg).empty());
}

TEST_CASE("trefoil has one isolated stratum") {
  SolverConfig cfg;
  cfg.restarts = 400;
  auto strata = find_strata(parse("s1^3"), cfg);
  REQUIRE(strata.size() == 1);
  CHECK(strata[0].kind == StratumKind::isolated);
  CHECK(strata[0].tangent_dim == 0);
  CHECK(strata[0].samples.front().residual < 1e-10);
  // the unique binary dihedral class has meridian axes at angle 2*pi/3
  REQUIRE(strata[0].samples.front().fingerprint.size() == 1);
  CHECK(strata[0].samples.front().fingerprint[0] == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(dihedral_count_check(3) == 1);
}

TEST_CASE("trefoil stratum matches a dense grid search") {
  // gauge-fixed slice of (S^2)^2: v1 = e3, v2 = (sin t, 0, cos t); scan t
  auto b = parse("s1^3");
  int minima = 0;
  double prev = 1e9, prevprev = 1e9;
  std::vector<double> at;
  const int steps = 2000;
  for (int i = 0; i <= steps; ++i) {
    double t = M_PI * i / steps;  // t in (0, pi): irreducible slice
    std::vector<Vector3d> v{Vector3d::UnitZ(), Vector3d(std::sin(t), 0, std::cos(t))};
    double r = fixed_point_residual(b, v);
    if (i >= 2 && prev < prevprev && prev < r && prev < 1e-2) {
      ++minima;
      at.push_back(M_PI * (i - 1) / steps);
    }
    prevprev = prev;
    prev = r;
  }
  REQUIRE(minima == 1);
  CHECK(std::cos(at[0]) == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("figure eight has two isolated strata") {
  SolverConfig cfg;
  cfg.restarts = 1000;
  auto strata = find_strata(parse("s1 s2^-1 s1 s2^-1"), cfg);
  REQUIRE(strata.size() == 2);
  for (const auto& s : strata) {
    CHECK(s.kind == StratumKind::isolated);
    CHECK(s.samples.front().residual < 1e-10);
  }
  CHECK(dihedral_count_check(5) == 2);
}

TEST_CASE("granny knot strata match the composition prediction") {
  SolverConfig cfg;
  cfg.restarts = 2000;
  auto direct = find_strata(parse("s1^3 s2^3"), cfg);
  auto tref = find_strata(parse("s1^3"), cfg);
  auto predicted = compose_strata(tref, tref);
  REQUIRE(direct.size() == 3);
  REQUIRE(predicted.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(direct[i].kind == predicted[i].kind);
    CHECK(direct[i].tangent_dim == predicted[i].tangent_dim);
  }
  int circles = 0;
  for (const auto& s : direct)
    if (s.kind == StratumKind::circle) {
      ++circles;
      CHECK(s.tangent_dim == 1);
      CHECK(s.samples.size() >= 10);
    }
  CHECK(circles == 1);
}

TEST_CASE("strata are invariant under conjugation") {
  Rng rng(52);
  SolverConfig cfg;
  cfg.restarts = 400;
  auto base = find_strata(parse("s1^3"), cfg);
  for (int t = 0; t < 3; ++t) {
    auto x = testsupport::random_word(rng, 2, 3);
    auto conj = braid::markov_conjugate(parse("s1^3"), x);
    auto strata = find_strata(conj, cfg);
    REQUIRE(strata.size() == base.size());
    for (size_t i = 0; i < strata.size(); ++i) {
      CHECK(strata[i].kind == base[i].kind);
      CHECK(strata[i].tangent_dim == base[i].tangent_dim);
    }
  }
}

TEST_CASE("compose_strata edge cases") {
  std::vector<RepStratum> empty;
  CHECK(compose_strata(empty, empty).empty());
  SolverConfig cfg;
  cfg.restarts = 300;
  auto tref = find_strata(parse("s1^3"), cfg);
  auto left_only = compose_strata(tref, empty);
  REQUIRE(left_only.size() == 1);
  CHECK(left_only[0].kind == StratumKind::isolated);
  // counting: |G1| + |G2| + pairs
  auto fig8 = find_strata(parse("s1 s2^-1 s1 s2^-1"), cfg);
  auto both = compose_strata(tref, fig8);
  CHECK(both.size() == 1 + 2 + 2);
}

TEST_CASE("dihedral count rejects even input") {
  CHECK(dihedral_count_check(1) == 0);
  CHECK_THROWS_AS(dihedral_count_check(4), std::invalid_argument);
  CHECK_THROWS_AS(dihedral_count_check(-3), std::invalid_argument);
}

TEST_CASE("find_strata requires a knot") {
  CHECK_THROWS_AS(find_strata(parse("s1^2")), std::invalid_argument);
}
