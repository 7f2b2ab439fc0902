#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sylkit/dct.hpp"
#include "sylkit/dense.hpp"

namespace sylkit::sketch {

using la::DenseMat;

enum class SketchKind { Gaussian, SRDCT, Exact };

std::string to_string(SketchKind kind);
SketchKind parse_sketch_kind(const std::string& name);  // throws InvalidConfig

/// Oblivious subspace embedding S (s x n). Immutable after construction and
/// rebuildable from (kind, n, s, seed) alone.
class SketchOperator {
 public:
  /// Dense Gaussian with entries N(0, 1/s).
  static SketchOperator gaussian(std::size_t n, std::size_t s, std::uint64_t seed);
  /// scale * rows_D(DCT2(signs .* x)). The default scale sqrt(n/s) makes the
  /// rows orthogonal with squared norm n/s; `literal_scale` uses sqrt(s/n).
  static SketchOperator srdct(std::size_t n, std::size_t s, std::uint64_t seed,
                              bool literal_scale = false);
  static SketchOperator exact(std::size_t n);
  static SketchOperator make(SketchKind kind, std::size_t n, std::size_t s, std::uint64_t seed,
                             bool literal_scale = false);

  SketchKind kind() const noexcept { return kind_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t s() const noexcept { return s_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double scale() const noexcept { return scale_; }
  const std::vector<double>& signs() const noexcept { return signs_; }
  const std::vector<std::size_t>& rows() const noexcept { return rows_; }

  /// S X for an n x r block.
  DenseMat apply(const DenseMat& x) const;
  /// Dense s x n matrix of the operator (small n only).
  DenseMat to_dense() const;

 private:
  SketchKind kind_ = SketchKind::Exact;
  std::size_t n_ = 0;
  std::size_t s_ = 0;
  std::uint64_t seed_ = 0;
  double scale_ = 1.0;
  std::shared_ptr<const DenseMat> gauss_;
  std::vector<double> signs_;
  std::vector<std::size_t> rows_;
  std::shared_ptr<const DctPlan> dct_;
};

DenseMat sketch_apply(const SketchOperator& s, const DenseMat& x);

/// Smallest eps with (1-eps)|v|^2 <= |Sv|^2 <= (1+eps)|v|^2 on Range(basis):
/// max(1 - sigma_min^2, sigma_max^2 - 1) of S*basis. Throws NotOrthonormal.
double measure_distortion(const SketchOperator& s, const DenseMat& basis);

/// Same measure from an already sketched orthonormal basis.
double distortion_from_sketched(const DenseMat& sketched_basis);

/// Incremental QR of the sketched basis: Q T = S [U_1, ..., U_d].
struct SketchedQRState {
  DenseMat Q;  // s x m, orthonormal columns
  DenseMat T;  // m x m, upper triangular
  std::size_t m() const noexcept { return Q.cols(); }
};

struct QRAppend {
  DenseMat t;    // m x r block column of T above the new diagonal block
  DenseMat tau;  // r x r upper triangular, nonnegative diagonal
};

/// Block Gram-Schmidt with one reorthogonalization pass, then a local
/// Householder QR. Throws Breakdown when a diagonal entry of tau falls below
/// 1e-14 |W|_F.
QRAppend sketched_qr_append(SketchedQRState& state, const DenseMat& w);

struct WhitenUpdate {
  DenseMat Hhat;        // T_{d+1} H_{d+1} T_{d+1}^{-1}, (d+1)r square
  DenseMat correction;  // t h_{d+1,d} tau_d^{-1}, dr x r (empty when d = 0)
};

/// Extends Hhat_d = T_d H_d T_d^{-1} by one block row and column.
///   T_{d+1} = [T_d, t; 0, tau],  H_{d+1} = [H_d, h_col; h_sub E_d^T, h_diag].
/// For d = 0 pass empty Hhat_d, T_d, t and h_col. Throws SingularTau.
WhitenUpdate whiten_hessenberg_update(const DenseMat& Hhat_d, const DenseMat& T_d,
                                      const DenseMat& t, const DenseMat& tau,
                                      const DenseMat& h_col, const DenseMat& h_sub,
                                      const DenseMat& h_diag);

}  // namespace sylkit::sketch
