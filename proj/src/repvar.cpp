#include "bfh/repvar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bfh::repvar {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// splitmix64; distributions are hand-rolled so enumeration is reproducible
// across standard libraries.
struct Rng {
  uint64_t state;
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  Vector3d sphere() {
    for (;;) {
      Vector3d v(2 * uniform() - 1, 2 * uniform() - 1, 2 * uniform() - 1);
      double n2 = v.squaredNorm();
      if (n2 > 1e-6 && n2 <= 1.0) return v / std::sqrt(n2);
    }
  }
};

Vector3d half_turn(const Vector3d& axis, const Vector3d& w) {
  return 2.0 * axis.dot(w) * axis - w;
}

}  // namespace

std::vector<Vector3d> braid_action(const braid::BraidWord& b, std::vector<Vector3d> v) {
  braid::check_valid(b);
  if (static_cast<int>(v.size()) != b.strands)
    throw std::invalid_argument("braid_action: vector count does not match strand count");
  for (int e : b.letters) {
    size_t i = static_cast<size_t>(std::abs(e)) - 1;
    Vector3d a = v[i], w = v[i + 1];
    if (e > 0) {
      v[i] = half_turn(a, w);
      v[i + 1] = a;
    } else {
      v[i] = w;
      v[i + 1] = half_turn(w, a);
    }
  }
  return v;
}

double fixed_point_residual(const braid::BraidWord& b, const std::vector<Vector3d>& v) {
  std::vector<Vector3d> w = braid_action(b, v);
  double s = 0;
  for (size_t i = 0; i < v.size(); ++i) s += (w[i] - v[i]).squaredNorm();
  return std::sqrt(s);
}

namespace {

// Pushes tangent directions through the action; dirs is 3n x m.
void action_with_jacobian(const braid::BraidWord& b, std::vector<Vector3d>& v, MatrixXd& dirs) {
  const Eigen::Index m = dirs.cols();
  for (int e : b.letters) {
    Eigen::Index i = std::abs(e) - 1;
    Vector3d a = v[static_cast<size_t>(i)], w = v[static_cast<size_t>(i + 1)];
    MatrixXd da = dirs.middleRows(3 * i, 3);
    MatrixXd dw = dirs.middleRows(3 * (i + 1), 3);
    if (e > 0) {
      for (Eigen::Index c = 0; c < m; ++c) {
        Vector3d dac = da.col(c), dwc = dw.col(c);
        dirs.col(c).segment(3 * i, 3) =
            2.0 * (dac.dot(w) + a.dot(dwc)) * a + 2.0 * a.dot(w) * dac - dwc;
        dirs.col(c).segment(3 * (i + 1), 3) = dac;
      }
      v[static_cast<size_t>(i)] = half_turn(a, w);
      v[static_cast<size_t>(i + 1)] = a;
    } else {
      for (Eigen::Index c = 0; c < m; ++c) {
        Vector3d dac = da.col(c), dwc = dw.col(c);
        dirs.col(c).segment(3 * i, 3) = dwc;
        dirs.col(c).segment(3 * (i + 1), 3) =
            2.0 * (dwc.dot(a) + w.dot(dac)) * w + 2.0 * w.dot(a) * dwc - dac;
      }
      v[static_cast<size_t>(i)] = w;
      v[static_cast<size_t>(i + 1)] = half_turn(w, a);
    }
  }
}

// Orthonormal tangent pair at each sphere factor, stacked as a 3n x 2n block basis.
MatrixXd tangent_basis(const std::vector<Vector3d>& v) {
  const Eigen::Index n = static_cast<Eigen::Index>(v.size());
  MatrixXd basis = MatrixXd::Zero(3 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector3d& x = v[static_cast<size_t>(i)];
    Vector3d u = std::abs(x.x()) < 0.9 ? Vector3d::UnitX() : Vector3d::UnitY();
    Vector3d t1 = (u - u.dot(x) * x).normalized();
    Vector3d t2 = x.cross(t1);
    basis.col(2 * i).segment(3 * i, 3) = t1;
    basis.col(2 * i + 1).segment(3 * i, 3) = t2;
  }
  return basis;
}

VectorXd residual_vector(const braid::BraidWord& b, const std::vector<Vector3d>& v) {
  std::vector<Vector3d> w = braid_action(b, v);
  VectorXd r(3 * static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i)
    r.segment(3 * static_cast<Eigen::Index>(i), 3) = w[i] - v[i];
  return r;
}

std::vector<Vector3d> retract(const std::vector<Vector3d>& v, const MatrixXd& basis,
                              const VectorXd& delta) {
  std::vector<Vector3d> out = v;
  for (size_t i = 0; i < v.size(); ++i) {
    Eigen::Index k = static_cast<Eigen::Index>(i);
    Vector3d stepv = basis.col(2 * k).segment(3 * k, 3) * delta(2 * k) +
                     basis.col(2 * k + 1).segment(3 * k, 3) * delta(2 * k + 1);
    out[i] = (out[i] + stepv).normalized();
  }
  return out;
}

// Levenberg-Marquardt on the product of spheres.
std::vector<Vector3d> lm_solve(const braid::BraidWord& b, std::vector<Vector3d> v,
                               const SolverConfig& cfg) {
  const Eigen::Index n = static_cast<Eigen::Index>(v.size());
  double lambda = 1e-3;
  double res = residual_vector(b, v).norm();
  for (int it = 0; it < cfg.max_iterations && res > 1e-14; ++it) {
    MatrixXd basis = tangent_basis(v);
    std::vector<Vector3d> w = v;
    MatrixXd pushed = basis;
    action_with_jacobian(b, w, pushed);
    MatrixXd jac = pushed - basis;  // d/dt [action(v) - v] along tangent directions
    VectorXd r = residual_vector(b, v);
    MatrixXd jtj = jac.transpose() * jac;
    VectorXd jtr = jac.transpose() * r;
    bool accepted = false;
    for (int trial = 0; trial < 10; ++trial) {
      MatrixXd damped = jtj + lambda * MatrixXd::Identity(2 * n, 2 * n);
      VectorXd delta = damped.ldlt().solve(-jtr);
      std::vector<Vector3d> cand = retract(v, basis, delta);
      double cres = residual_vector(b, cand).norm();
      if (cres < res) {
        v = std::move(cand);
        res = cres;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 5.0;
      if (lambda > 1e10) break;
    }
    if (!accepted) break;
  }
  return v;
}

double rounded(double x) { return std::round(x * 1e6) / 1e6; }

}  // namespace

std::vector<double> fingerprint(const std::vector<Vector3d>& v) {
  std::vector<double> fp;
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) fp.push_back(rounded(v[i].dot(v[j])));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) fp.push_back(rounded(v[i].cross(v[j]).dot(v[k])));
  std::sort(fp.begin(), fp.end());
  return fp;
}

bool is_reducible(const std::vector<Vector3d>& v, double tol) {
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      if (v[i].cross(v[j]).norm() > tol) return false;
  return true;
}

std::vector<Vector3d> gauge_fix(std::vector<Vector3d> v) {
  if (v.empty()) return v;
  Eigen::Quaterniond q = Eigen::Quaterniond::FromTwoVectors(v[0], Vector3d::UnitZ());
  for (auto& x : v) x = q * x;
  for (size_t j = 1; j < v.size(); ++j) {
    double rho = std::hypot(v[j].x(), v[j].y());
    if (rho < 1e-7) continue;
    double ang = std::atan2(v[j].y(), v[j].x());
    Eigen::AngleAxisd rot(-ang, Vector3d::UnitZ());
    for (auto& x : v) x = rot * x;
    break;
  }
  for (auto& x : v) x.normalize();
  return v;
}

int tangent_dimension(const braid::BraidWord& b, const std::vector<Vector3d>& v,
                      double rank_tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(v.size());
  MatrixXd basis = tangent_basis(v);
  std::vector<Vector3d> w = v;
  MatrixXd pushed = basis;
  action_with_jacobian(b, w, pushed);
  // linearization of action(v) - v on the tangent space, in tangent coordinates
  MatrixXd m = basis.transpose() * (pushed - basis);
  // conjugation directions w x v_i
  MatrixXd gauge(2 * n, 3);
  for (int axis = 0; axis < 3; ++axis) {
    Vector3d e = Vector3d::Zero();
    e(axis) = 1.0;
    VectorXd dir(3 * n);
    for (Eigen::Index i = 0; i < n; ++i)
      dir.segment(3 * i, 3) = e.cross(v[static_cast<size_t>(i)]);
    gauge.col(axis) = basis.transpose() * dir;
  }
  Eigen::JacobiSVD<MatrixXd> gsvd(gauge, Eigen::ComputeFullU);
  Eigen::Index grank = 0;
  for (Eigen::Index i = 0; i < gsvd.singularValues().size(); ++i)
    if (gsvd.singularValues()(i) > 1e-8) ++grank;
  MatrixXd complement = gsvd.matrixU().rightCols(2 * n - grank);
  Eigen::JacobiSVD<MatrixXd> msvd(m * complement);
  int kernel = 0;
  for (Eigen::Index i = 0; i < msvd.singularValues().size(); ++i)
    if (msvd.singularValues()(i) < rank_tol) ++kernel;
  kernel += static_cast<int>(2 * n - grank - msvd.singularValues().size());
  return kernel;
}

namespace {

// Distance between gauge-fixed representatives. The canonical form is unique
// per conjugacy class, so this separates strata that sorted fingerprints
// cannot (e.g. the two factor strata of a symmetric composite).
double point_distance(const RepPoint& a, const RepPoint& b) {
  if (a.vectors.size() != b.vectors.size()) return 1e18;
  double d = 0;
  for (size_t i = 0; i < a.vectors.size(); ++i)
    d = std::max(d, (a.vectors[i] - b.vectors[i]).lpNorm<Eigen::Infinity>());
  return d;
}

bool point_less(const RepPoint& a, const RepPoint& b) {
  if (a.fingerprint != b.fingerprint) return a.fingerprint < b.fingerprint;
  for (size_t i = 0; i < std::min(a.vectors.size(), b.vectors.size()); ++i)
    for (int c = 0; c < 3; ++c) {
      if (a.vectors[i](c) < b.vectors[i](c) - 1e-12) return true;
      if (a.vectors[i](c) > b.vectors[i](c) + 1e-12) return false;
    }
  return false;
}

constexpr double kSamePointTol = 1e-5;
constexpr double kChainTol = 0.35;

}  // namespace

std::vector<RepStratum> find_strata(const braid::BraidWord& b, const SolverConfig& cfg) {
  if (!braid::closure_is_knot(b))
    throw std::invalid_argument("find_strata: closure is not a knot");
  std::vector<RepPoint> accepted;
  for (int t = 0; t < cfg.restarts; ++t) {
    Rng rng{cfg.seed * 0x9e3779b97f4a7c15ull + static_cast<uint64_t>(t) + 1};
    std::vector<Vector3d> v0;
    for (int i = 0; i < b.strands; ++i) v0.push_back(rng.sphere());
    std::vector<Vector3d> v = lm_solve(b, std::move(v0), cfg);
    double res = fixed_point_residual(b, v);
    if (!(res < cfg.tol)) continue;
    if (is_reducible(v, cfg.parallel_tol)) continue;
    v = gauge_fix(std::move(v));
    RepPoint p;
    p.residual = res;
    p.fingerprint = fingerprint(v);
    p.vectors = std::move(v);
    accepted.push_back(std::move(p));
  }
  std::sort(accepted.begin(), accepted.end(), point_less);
  // merge numerically identical classes, keeping the best witness
  std::vector<RepPoint> distinct;
  for (auto& p : accepted) {
    bool merged = false;
    for (auto& q : distinct) {
      if (point_distance(q, p) < kSamePointTol) {
        if (p.residual < q.residual) q = std::move(p);
        merged = true;
        break;
      }
    }
    if (!merged) distinct.push_back(std::move(p));
  }
  std::vector<int> tdim(distinct.size());
  for (size_t i = 0; i < distinct.size(); ++i)
    tdim[i] = tangent_dimension(b, distinct[i].vectors, cfg.rank_tol);
  // chain positive-dimensional samples into connected families
  std::vector<RepStratum> out;
  std::vector<bool> used(distinct.size(), false);
  for (size_t i = 0; i < distinct.size(); ++i) {
    if (used[i]) continue;
    if (tdim[i] == 0) {
      RepStratum s;
      s.kind = StratumKind::isolated;
      s.tangent_dim = 0;
      s.samples.push_back(distinct[i]);
      used[i] = true;
      out.push_back(std::move(s));
      continue;
    }
    RepStratum s;
    s.tangent_dim = tdim[i];
    std::vector<size_t> frontier{i};
    used[i] = true;
    s.samples.push_back(distinct[i]);
    while (!frontier.empty()) {
      size_t cur = frontier.back();
      frontier.pop_back();
      for (size_t j = 0; j < distinct.size(); ++j) {
        if (used[j] || tdim[j] == 0) continue;
        if (point_distance(distinct[cur], distinct[j]) < kChainTol) {
          used[j] = true;
          s.tangent_dim = std::max(s.tangent_dim, tdim[j]);
          s.samples.push_back(distinct[j]);
          frontier.push_back(j);
        }
      }
    }
    std::sort(s.samples.begin(), s.samples.end(), point_less);
    s.kind = s.tangent_dim == 1 ? StratumKind::circle : StratumKind::unclassified;
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const RepStratum& a, const RepStratum& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return point_less(a.samples.front(), b.samples.front());
  });
  return out;
}

namespace {

RepPoint glue_point(const std::vector<Vector3d>& v1, const std::vector<Vector3d>& v2,
                    double theta, double residual) {
  // composite meridians: v1 followed by v2 conjugated so the shared meridian
  // matches; theta runs over the residual U(1) of gluings
  std::vector<Vector3d> w = v1;
  const Vector3d shared = v1.back();
  Eigen::Quaterniond align = Eigen::Quaterniond::FromTwoVectors(v2.front(), shared);
  Eigen::AngleAxisd spin(theta, shared);
  for (size_t j = 1; j < v2.size(); ++j) w.push_back(spin * (align * v2[j]));
  RepPoint p;
  p.vectors = gauge_fix(std::move(w));
  p.residual = residual;
  p.fingerprint = fingerprint(p.vectors);
  return p;
}

RepPoint extend_by_reducible(const std::vector<Vector3d>& v, int copies, bool on_left,
                             double residual) {
  std::vector<Vector3d> w;
  if (on_left) {
    w.assign(static_cast<size_t>(copies), v.front());
    w.insert(w.end(), v.begin(), v.end());
  } else {
    w = v;
    w.insert(w.end(), static_cast<size_t>(copies), v.back());
  }
  RepPoint p;
  p.vectors = gauge_fix(std::move(w));
  p.residual = residual;
  p.fingerprint = fingerprint(p.vectors);
  return p;
}

}  // namespace

std::vector<RepStratum> compose_strata(const std::vector<RepStratum>& s1,
                                       const std::vector<RepStratum>& s2) {
  auto width = [](const std::vector<RepStratum>& s) -> int {
    for (const auto& st : s)
      for (const auto& p : st.samples) return static_cast<int>(p.vectors.size());
    return 2;  // no irreducible strata: unknot-like factor on two strands
  };
  const int n1 = width(s1), n2 = width(s2);
  std::vector<RepStratum> out;
  for (const auto& st : s1) {
    RepStratum s;
    s.kind = st.kind;
    s.tangent_dim = st.tangent_dim;
    for (const auto& p : st.samples)
      s.samples.push_back(extend_by_reducible(p.vectors, n2 - 1, false, p.residual));
    out.push_back(std::move(s));
  }
  for (const auto& st : s2) {
    RepStratum s;
    s.kind = st.kind;
    s.tangent_dim = st.tangent_dim;
    for (const auto& p : st.samples)
      s.samples.push_back(extend_by_reducible(p.vectors, n1 - 1, true, p.residual));
    out.push_back(std::move(s));
  }
  constexpr int kGluingSamples = 12;
  for (const auto& a : s1)
    for (const auto& b : s2) {
      RepStratum s;
      s.tangent_dim = a.tangent_dim + b.tangent_dim + 1;
      s.kind = s.tangent_dim == 1 ? StratumKind::circle : StratumKind::unclassified;
      const RepPoint& pa = a.samples.front();
      const RepPoint& pb = b.samples.front();
      for (int t = 0; t < kGluingSamples; ++t) {
        double theta = 2.0 * M_PI * t / kGluingSamples;
        s.samples.push_back(
            glue_point(pa.vectors, pb.vectors, theta, std::max(pa.residual, pb.residual)));
      }
      std::sort(s.samples.begin(), s.samples.end(), point_less);
      out.push_back(std::move(s));
    }
  std::sort(out.begin(), out.end(), [](const RepStratum& a, const RepStratum& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return point_less(a.samples.front(), b.samples.front());
  });
  return out;
}

long dihedral_count_check(long det) {
  if (det <= 0 || det % 2 == 0)
    throw std::invalid_argument("dihedral_count_check: determinant must be a positive odd integer");
  return (det - 1) / 2;
}

std::string kind_name(StratumKind k) {
  switch (k) {
    case StratumKind::isolated: return "isolated";
    case StratumKind::circle: return "circle";
    case StratumKind::unclassified: return "unclassified";
  }
  return "unclassified";
}

}  // namespace bfh::repvar
