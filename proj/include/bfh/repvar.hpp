#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "bfh/braid.hpp"

namespace bfh::repvar {

using Eigen::Vector3d;

/// Right action of a braid word on tuples of unit 3-vectors (traceless SU(2)
/// elements as pure quaternions). Letter +i sends (v_i, v_{i+1}) to
/// (R_{v_i} v_{i+1}, v_i) with R_a the half-turn about axis a; letter -i is
/// the inverse rule. Preserves the quaternion product v_1 ... v_n.
std::vector<Vector3d> braid_action(const braid::BraidWord& b, std::vector<Vector3d> v);

/// || braid_action(b, v) - v ||_2
double fixed_point_residual(const braid::BraidWord& b, const std::vector<Vector3d>& v);

struct SolverConfig {
  int restarts = 2000;
  uint64_t seed = 1;
  double tol = 1e-10;        // accepted fixed-point residual
  double rank_tol = 1e-6;    // singular values below this count as kernel
  double parallel_tol = 1e-8;  // reducibility: all axes pairwise parallel
  int max_iterations = 120;
};

struct RepPoint {
  std::vector<Vector3d> vectors;  // gauge-fixed meridian images
  double residual = 0.0;
  std::vector<double> fingerprint;  // conjugation-invariant, see fingerprint()
};

enum class StratumKind { isolated, circle, unclassified };

struct RepStratum {
  StratumKind kind = StratumKind::isolated;
  int tangent_dim = 0;  // kernel dimension after removing conjugation directions
  std::vector<RepPoint> samples;
};

std::string kind_name(StratumKind k);

/// Sorted pairwise inner products and triple products, the conjugation
/// invariants used to separate strata samples.
std::vector<double> fingerprint(const std::vector<Vector3d>& v);

/// Rotate the tuple so v_1 = e3 and the first independent axis lies in the
/// xz half-plane with positive x.
std::vector<Vector3d> gauge_fix(std::vector<Vector3d> v);

bool is_reducible(const std::vector<Vector3d>& v, double tol);

/// Kernel dimension of the linearized fixed-point equation at v, minus the
/// conjugation directions. 0 for isolated classes, 1 along a circle.
int tangent_dimension(const braid::BraidWord& b, const std::vector<Vector3d>& v,
                      double rank_tol);

/// Random-restart enumeration of the irreducible traceless strata of the
/// closure's representation variety. Deterministic for a fixed seed.
std::vector<RepStratum> find_strata(const braid::BraidWord& b, const SolverConfig& cfg = {});

/// Predicted strata of a connected sum: each factor stratum paired with the
/// other knot's reducible survives as-is, and every cross pair contributes a
/// gluing family one dimension higher (a circle when both are isolated).
/// Witness points are synthesized by aligning the shared meridian over
/// sampled gluing rotations.
std::vector<RepStratum> compose_strata(const std::vector<RepStratum>& s1,
                                       const std::vector<RepStratum>& s2);

/// (det - 1) / 2, the binary dihedral count; a lower-bound sanity alarm for
/// the enumeration, exact on 2-bridge knots.
long dihedral_count_check(long det);

}  // namespace bfh::repvar
