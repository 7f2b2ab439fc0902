#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sylkit/dense.hpp"
#include "sylkit/memory.hpp"
#include "sylkit/sketch.hpp"
#include "sylkit/sparse.hpp"

namespace sylkit::krylov {

using la::DenseMat;
using sparse::SparseMatrix;

/// Truncation depth meaning "orthogonalize against every previous block".
inline constexpr std::size_t kFull = std::numeric_limits<std::size_t>::max();

enum class Engine { Full, Truncated, Sketched };

std::string to_string(Engine e);
Engine parse_engine(const std::string& name);  // throws InvalidConfig

/// Everything needed to regenerate a basis without inner products.
struct ArnoldiRecord {
  DenseMat H;    // (d+1)r x dr block upper Hessenberg, including h_{d+1,d}
  DenseMat ell;  // r x r, U_1 ell = C
  std::size_t k = kFull;
  std::size_t r = 0;
};

/// One side of a (possibly truncated) block Arnoldi process for M or M^T.
/// Only the most recent blocks are kept: before each new block is allocated
/// the window is cut back to k blocks, so at most k+1 blocks are ever live.
class ArnoldiSide {
 public:
  ArnoldiSide(const SparseMatrix& m, bool transpose, std::size_t k, MemoryTracker& tracker,
              bool shadow = false);

  /// U_1 ell = C. Throws Breakdown when C is numerically rank deficient.
  void start(const DenseMat& c);

  /// Computes block column d+1 of H and U_{d+2}. Returns true on a lucky
  /// breakdown, in which case the new subdiagonal block is set to zero and no
  /// block is appended.
  bool step();

  std::size_t d() const noexcept { return d_; }
  std::size_t r() const noexcept { return r_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  bool broken_down() const noexcept { return breakdown_; }

  /// (d+1)r x dr.
  const DenseMat& H() const noexcept { return H_; }
  /// Leading dr x dr block.
  DenseMat H_square() const;
  /// h_{d+1,d}.
  DenseMat h_sub() const;
  const DenseMat& ell() const noexcept { return ell_; }

  /// U_{d+1}, the most recent block (U_d after a breakdown).
  const DenseMat& newest() const;
  /// 1-based index of the oldest block still in the window.
  std::size_t window_first() const noexcept { return first_; }
  const std::deque<TrackedBlock>& window() const noexcept { return window_; }
  void release_window();

  /// Untracked copy of U_1..U_{d+1}; only filled in shadow mode.
  const DenseMat& shadow_basis() const noexcept { return shadow_; }

  ArnoldiRecord record() const { return {H_, ell_, k_, r_}; }

 private:
  const SparseMatrix* m_;
  bool transpose_;
  std::size_t k_;
  MemoryTracker* tracker_;
  bool shadow_on_;
  std::size_t n_ = 0;
  std::size_t r_ = 0;
  std::size_t d_ = 0;
  std::size_t first_ = 1;
  bool breakdown_ = false;
  DenseMat H_;
  DenseMat ell_;
  std::deque<TrackedBlock> window_;
  DenseMat shadow_;
};

struct SolverConfig {
  Engine engine = Engine::Sketched;
  double tol = 1e-6;
  std::size_t maxit = 1000;
  std::size_t k = 10;    // k_A for the truncated engine; the sketched engine uses it for both
  std::size_t k_B = 0;   // truncated engine only; 0 means same as k
  std::size_t p = 10;
  std::size_t s = 0;     // 0: min(n, 2 (maxit+1) r)
  sketch::SketchKind sketch = sketch::SketchKind::SRDCT;
  std::uint64_t seed = 0;
  bool literal_scale = false;
  double rank_tol = 0.0;  // 0: tol/10
  std::size_t chunk = 0;  // 0: k r
  bool verification = false;  // keeps shadow bases; n <= 2000 only
  bool record_timing = true;
  std::size_t max_singular_skips = 5;
};

/// Validates and fills defaults. Throws InvalidConfig.
SolverConfig resolve_config(SolverConfig cfg, std::size_t n1, std::size_t n2, std::size_t r);

struct HistoryEntry {
  std::size_t d = 0;
  double rho = 0.0;  // absolute estimator value
  std::optional<double> true_res;  // relative, verification mode only
  double wall_s = 0.0;
  std::size_t mem_vectors = 0;
};

struct SolveResult {
  Engine engine = Engine::Sketched;
  DenseMat X1, X2;
  std::size_t iterations = 0;
  std::vector<HistoryEntry> history;
  std::size_t rank = 0;
  std::size_t mem_long_vectors = 0;
  bool converged = false;
  bool breakdown = false;
  double rho = 0.0;
  double rhs_norm = 0.0;  // |beta_1 beta_2^T|_F
  DenseMat Y;             // projected solution at the last successful check
  std::vector<std::string> notes;
};

/// State handed to the observer at every successful check.
struct CheckContext {
  Engine engine;
  std::size_t d;
  std::size_t r;
  const DenseMat& Y;
  double rho;
  double rhs_norm;
  const DenseMat& M_U;  // projected coefficients of the solved equation
  const DenseMat& M_V;
  const DenseMat& beta1;
  const DenseMat& beta2;
  const DenseMat& h_last;  // whitened for the sketched engine
  const DenseMat& g_last;
  const ArnoldiSide& U;
  const ArnoldiSide& V;
  const DenseMat* T_U = nullptr;  // dr x dr, sketched engine only
  const DenseMat* T_V = nullptr;
  const DenseMat* T_U_all = nullptr;  // including the block of U_{d+1} when present
  const DenseMat* T_V_all = nullptr;
  const sketch::SketchOperator* S_U = nullptr;
  const sketch::SketchOperator* S_V = nullptr;
};

using Observer = std::function<void(const CheckContext&)>;

SolveResult solve(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                  const DenseMat& C2, const SolverConfig& cfg, const Observer& observer = {});
SolveResult solve_full(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                       const DenseMat& C2, SolverConfig cfg, const Observer& observer = {});
SolveResult solve_truncated(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                            const DenseMat& C2, SolverConfig cfg,
                            const Observer& observer = {});
SolveResult solve_sketched(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                           const DenseMat& C2, SolverConfig cfg,
                           const Observer& observer = {});

/// sqrt(dr) (|Y E_d g^T|_F + |h E_d^T Y|_F).
double residual_bound_truncated(const DenseMat& Y, const DenseMat& h_last,
                                const DenseMat& g_last, std::size_t d, std::size_t r);
/// sqrt(|h E_d^T Y|_F^2 + |Y E_d g^T|_F^2).
double residual_norm_sketched(const DenseMat& Y, const DenseMat& h_last,
                              const DenseMat& g_last, std::size_t d, std::size_t r);

struct Compressed {
  DenseMat Y1, Y2;  // each carries sqrt(Sigma)
  std::size_t rank = 0;
};

/// Truncated SVD with |Y - Y1 Y2^T|_F <= rank_tol |Y|_F.
Compressed compress_Y(const DenseMat& Y, double rank_tol);

/// T_U^{-1} Y T_V^{-T}.
DenseMat unwhiten(const DenseMat& Y, const DenseMat& T_U, const DenseMat& T_V);

/// Regenerates U_1..U_d from the stored coefficients and returns U_d Z.
/// Basis vectors are accumulated in batches of up to `chunk`, taken directly
/// from the replay window, so live length-n vectors never exceed
/// (k+1) r + cols(Z).
DenseMat replay_side(const SparseMatrix& M, bool transpose, const DenseMat& C,
                     const ArnoldiRecord& rec, const DenseMat& Z, std::size_t chunk,
                     MemoryTracker* tracker = nullptr);

std::pair<DenseMat, DenseMat> two_pass_reconstruct(
    const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1, const DenseMat& C2,
    const ArnoldiRecord& rec_A, const ArnoldiRecord& rec_B, const DenseMat& Z1,
    const DenseMat& Z2, std::size_t chunk, MemoryTracker* tracker = nullptr);

/// |A X1 X2^T + X1 X2^T B - C1 C2^T|_F / |C1 C2^T|_F from thin QR factors,
/// without forming any n1 x n2 matrix.
double relative_residual(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                         const DenseMat& C2, const DenseMat& X1, const DenseMat& X2);

}  // namespace sylkit::krylov
