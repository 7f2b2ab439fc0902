#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sylkit/dense.hpp"
#include "sylkit/krylov.hpp"
#include "sylkit/sketch.hpp"
#include "sylkit/sparse.hpp"

namespace sylkit::analysis {

using la::cplx;
using la::CDenseMat;
using la::DenseMat;
using sparse::SparseMatrix;

inline constexpr std::size_t kDefaultAngles = 256;

struct FovBoundary {
  std::vector<double> angles;
  std::vector<cplx> points;
  double alpha = 0.0;  // max Re(points)
};

/// Johnson's algorithm: for each angle the top eigenvector v of
/// (e^{i theta} M + e^{-i theta} M^*)/2 gives the boundary point v^* M v.
FovBoundary fov_boundary(const CDenseMat& M, std::size_t n_angles = kDefaultAngles);
FovBoundary fov_boundary(const DenseMat& M, std::size_t n_angles = kDefaultAngles);

/// Distance from z to the convex polygon spanned by the boundary samples;
/// zero inside.
double distance_to_fov(const FovBoundary& fov, cplx z);

/// Hhat + hhat e_d^T.
DenseMat perturbed_matrix(const DenseMat& Hhat, const std::vector<double>& hhat);

struct EffectiveFovResult {
  CDenseMat Q;   // reordered Schur vectors of M^T, [Q0, Q1]
  CDenseMat Q1;  // d x kept
  std::size_t kept = 0;
  std::size_t dropped = 0;
  CDenseMat compressed;  // Q1^* M Q1
  std::vector<double> first_row_magnitudes;  // |Q(0,i)| after reordering
  std::vector<cplx> eigenvalues;             // diagonal of the reordered Schur form
  std::vector<double> eigenvector_first;     // |first entry| of each unit eigenvector of M^T
  double threshold = 0.0;
};

/// 1e-12 |Hhat + hhat e_d^T|_F.
double default_drop_threshold(const DenseMat& Hhat, const std::vector<double>& hhat);

/// Schur vectors of (Hhat + hhat e_d^T)^T belonging to eigenvalues whose unit
/// eigenvector has first entry at most `drop_threshold` in modulus are moved
/// to the front and dropped; the rest span Q1. A negative threshold selects
/// the default.
EffectiveFovResult effective_fov(const DenseMat& Hhat, const std::vector<double>& hhat,
                                 double drop_threshold = -1.0);

/// Y = Q1 Z Q1^* with Z solving K Z + Z K^* + Q1^* e_1 beta^2 e_1^* Q1 = 0,
/// K = Q1^* M Q1. With this sign Z is a Gramian, so Y is positive
/// semidefinite whenever K is stable.
CDenseMat effective_lyapunov_solution(const EffectiveFovResult& eff, double beta);

struct DecayPoint {
  cplx lambda;
  double distance = 0.0;     // to W(Hhat)
  double first_entry = 0.0;  // |first entry| of the unit eigenvector of M^T
};

struct DecayProfile {
  std::vector<DecayPoint> points;  // sorted by distance
  std::optional<double> spearman;  // log first entry vs distance; empty when undefined
};

DecayProfile schur_decay_profile(const DenseMat& Hhat, const std::vector<double>& hhat,
                                 std::size_t n_angles = kDefaultAngles);

/// Hhat negative definite, Hhat + hhat e_d^T with an eigenvalue in the right
/// half-plane, and every eigenvalue of the compressed matrix in the left one.
bool ex45_qualifies(const sparse::HhatInstance& inst);

/// First seed in [first, first + count) whose instance qualifies.
std::optional<std::uint64_t> find_ex45_seed(std::size_t d, std::uint64_t first,
                                            std::size_t count);

/// Spearman rank correlation with averaged ranks for ties. Empty when either
/// sample is constant.
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);

/// (1 + sqrt((1+eps)/(1-eps))) (1 + 1/sqrt(1-eps)). Throws InvalidGeometry
/// unless eps in [0, 1).
double eta_epsilon(double eps);

/// Ellipse with center (-c, 0), real semi-axis a1 and imaginary semi-axis a2.
struct Ellipse {
  double c = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
};

/// Error bound for the sketched Lyapunov approximation on an ellipse in the
/// left half-plane with foci (-c +- delta, 0). Throws InvalidGeometry.
double ellipse_bound(std::size_t d, double alpha_max, const Ellipse& e, double eps);

/// Smallest-area axis-aligned ellipse centered on the real axis containing
/// all points, with a1 >= a2, then enlarged by the factor (1 + inflate) about
/// its rightmost vertex.
Ellipse bounding_ellipse(const std::vector<cplx>& points, double inflate = 0.01);

/// Dense inverse of I (x) H + G (x) I, the vectorized map Y -> H Y + Y G^T.
DenseMat kronecker_sum_inverse(const DenseMat& H, const DenseMat& G);

struct DistanceBound {
  double lhs = 0.0;  // |Y_full - T_U Y_sk T_V^T|_F
  double rhs = 0.0;  // |L^{-1}|_F |R_H E_d^T Y_sk + Y_sk E_d R_G^T|_F
  double L_inv_norm = 0.0;
  double rhs_tilde = 0.0;  // modified pencil, reported only
  double L_tilde_inv_norm = 0.0;
  double R_H_norm = 0.0;
  double R_G_norm = 0.0;
  double identity_residual = 0.0;  // consistency of the modified equation
};

/// Runs the full engine and the sketched engine described by `sketched` to
/// the same d with retained bases. Throws RequiresVerification for n > 2000
/// and Breakdown if either engine stops before d.
DistanceBound distance_to_full_bound(const SparseMatrix& A, const SparseMatrix& B,
                                     const DenseMat& C1, const DenseMat& C2, std::size_t d,
                                     krylov::SolverConfig sketched);

struct TensorEmbedding {
  double ratio = 0.0;  // |S_U M S_V^T|_F / |M|_F
  double eps = 0.0;
  double eps_tilde = 0.0;
  bool sandwich_holds = false;  // only meaningful when eps_tilde < 1
};

/// M = U Z V^T with orthonormal U, V. Throws NotOrthonormal.
TensorEmbedding tensor_embedding_check(const sketch::SketchOperator& S_U,
                                       const sketch::SketchOperator& S_V, const DenseMat& U,
                                       const DenseMat& V, const DenseMat& Z);

struct SketchFovGap {
  double alpha_plain = 0.0;     // alpha(V^T A V)
  double alpha_sketched = 0.0;  // alpha(V^T S^T S A V)
  double norm_A = 0.0;          // |A|_2
  FovBoundary plain;
  FovBoundary sketched;
};

/// Orthonormal basis of [b, Ab, ..., A^{d-1} b] for the Toeplitz test matrix
/// with b the normalized ones vector.
DenseMat toeplitz_krylov_basis(const SparseMatrix& A, std::size_t d);

SketchFovGap sketch_fov_gap(const SparseMatrix& A, const DenseMat& V,
                            const sketch::SketchOperator& S,
                            std::size_t n_angles = kDefaultAngles);

}  // namespace sylkit::analysis
