#include "sylkit/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "sylkit/errors.hpp"
#include "sylkit/linalg.hpp"

namespace sylkit::krylov {

namespace {

DenseMat blk(const DenseMat& m, std::size_t bi, std::size_t bj, std::size_t r) {
  return m.block(bi * r, bj * r, r, r);
}

std::vector<double> column_norms(const DenseMat& w) {
  std::vector<double> out(w.cols());
  for (std::size_t c = 0; c < w.cols(); ++c) {
    double s = 0.0;
    for (double v : w.col(c)) s += v * v;
    out[c] = std::sqrt(s);
  }
  return out;
}

// R factor of a tall block. For r > 1 the Householder workspace is one extra
// n x r block and is counted as such.
DenseMat block_r(const DenseMat& w, MemoryTracker* tracker) {
  if (w.cols() == 1) return DenseMat(1, 1, la::frobenius_norm(w));
  if (tracker) tracker->acquire(w.cols());
  DenseMat r = la::qr_r(w);
  if (tracker) tracker->release(w.cols());
  return r;
}

}  // namespace

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Full: return "full";
    case Engine::Truncated: return "truncated";
    case Engine::Sketched: return "sketched";
  }
  return "?";
}

Engine parse_engine(const std::string& name) {
  if (name == "full") return Engine::Full;
  if (name == "truncated") return Engine::Truncated;
  if (name == "sketched") return Engine::Sketched;
  throw Error(ErrorCode::InvalidConfig, "unknown engine '" + name + "'");
}

// ---------------------------------------------------------------------------
// ArnoldiSide

ArnoldiSide::ArnoldiSide(const SparseMatrix& m, bool transpose, std::size_t k,
                         MemoryTracker& tracker, bool shadow)
    : m_(&m), transpose_(transpose), k_(k), tracker_(&tracker), shadow_on_(shadow) {
  if (m.n_rows() != m.n_cols()) throw DimensionMismatch("ArnoldiSide: operator is not square");
  if (k == 0) throw Error(ErrorCode::InvalidConfig, "ArnoldiSide: truncation depth must be positive");
  n_ = m.n_rows();
}

void ArnoldiSide::start(const DenseMat& c) {
  if (c.rows() != n_)
    throw DimensionMismatch("ArnoldiSide::start: factor has " + std::to_string(c.rows()) +
                            " rows, operator is " + std::to_string(n_));
  if (c.cols() == 0) throw DimensionMismatch("ArnoldiSide::start: empty factor");
  r_ = c.cols();
  ell_ = block_r(c, tracker_);
  const auto norms = column_norms(c);
  for (std::size_t i = 0; i < r_; ++i)
    if (!(ell_(i, i) > 1e-14 * norms[i]) || norms[i] == 0.0)
      throw Breakdown("right-hand side factor is numerically rank deficient", i);

  window_.clear();
  TrackedBlock u(*tracker_, n_, r_);
  u.mat() = la::solve_upper_right(c, ell_);
  window_.push_back(std::move(u));
  H_ = DenseMat(r_, 0);
  d_ = 0;
  first_ = 1;
  breakdown_ = false;
  if (shadow_on_) shadow_ = window_.back().mat();
}

bool ArnoldiSide::step() {
  if (window_.empty()) throw Error(ErrorCode::InvalidConfig, "ArnoldiSide::step before start");
  if (breakdown_) return true;
  const std::size_t j = d_ + 1;  // 1-based index of the block being multiplied
  while (window_.size() > k_) {
    window_.pop_front();
    ++first_;
  }
  TrackedBlock w(*tracker_, n_, r_);
  sparse::spmv_block(*m_, window_.back().mat(), transpose_, w.mat());
  const auto mu = column_norms(w.mat());

  H_.conservative_resize((j + 1) * r_, j * r_);
  for (std::size_t idx = 0; idx < window_.size(); ++idx) {
    const DenseMat& u = window_[idx].mat();
    const DenseMat h = la::adjoint_mul(u, w.mat());
    la::sub_mul(w.mat(), u, h);
    H_.set_block((first_ + idx - 1) * r_, (j - 1) * r_, h);
  }
  const DenseMat R = block_r(w.mat(), tracker_);
  d_ = j;
  for (std::size_t c = 0; c < r_; ++c) {
    if (!(R(c, c) > 1e-14 * mu[c])) {
      breakdown_ = true;
      return true;
    }
  }
  H_.set_block(j * r_, (j - 1) * r_, R);
  w.mat() = la::solve_upper_right(std::move(w.mat()), R);
  if (shadow_on_) shadow_ = la::hstack(shadow_, w.mat());
  window_.push_back(std::move(w));
  return false;
}

DenseMat ArnoldiSide::H_square() const { return H_.block(0, 0, d_ * r_, d_ * r_); }

DenseMat ArnoldiSide::h_sub() const {
  if (d_ == 0) return DenseMat(r_, r_);
  return blk(H_, d_, d_ - 1, r_);
}

const DenseMat& ArnoldiSide::newest() const {
  if (window_.empty()) throw Error(ErrorCode::InvalidConfig, "ArnoldiSide: window is empty");
  return window_.back().mat();
}

void ArnoldiSide::release_window() { window_.clear(); }

// ---------------------------------------------------------------------------
// Configuration

SolverConfig resolve_config(SolverConfig cfg, std::size_t n1, std::size_t n2, std::size_t r) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
  if (!(cfg.tol > 0.0)) bad("tol must be positive");
  if (cfg.maxit == 0) bad("maxit must be positive");
  if (cfg.p == 0) bad("p must be at least 1");
  if (cfg.k == 0) bad("k must be positive");
  if (cfg.rank_tol < 0.0) bad("rank_tol must be nonnegative");
  if (cfg.engine == Engine::Full) cfg.k = cfg.k_B = kFull;
  if (cfg.k_B == 0) cfg.k_B = cfg.k;
  if (cfg.engine == Engine::Sketched) cfg.k_B = cfg.k;
  if (cfg.rank_tol == 0.0) cfg.rank_tol = cfg.tol / 10.0;
  if (cfg.chunk == 0) cfg.chunk = std::min(cfg.k, cfg.maxit) * r;
  if (cfg.s == 0) cfg.s = std::min({n1, n2, 2 * (cfg.maxit + 1) * r});
  if (cfg.engine == Engine::Sketched && cfg.sketch == sketch::SketchKind::SRDCT &&
      cfg.s > std::min(n1, n2))
    bad("sketch dimension exceeds the problem size");
  if (cfg.verification && (n1 > 2000 || n2 > 2000))
    bad("verification mode is limited to n <= 2000");
  return cfg;
}

// ---------------------------------------------------------------------------
// Estimators and compression

double residual_bound_truncated(const DenseMat& Y, const DenseMat& h_last,
                                const DenseMat& g_last, std::size_t d, std::size_t r) {
  if (d == 0) return 0.0;
  const DenseMat row = Y.block((d - 1) * r, 0, r, Y.cols());  // E_d^T Y
  const DenseMat col = Y.block(0, (d - 1) * r, Y.rows(), r);  // Y E_d
  const double a = la::frobenius_norm(la::mul_adjoint(col, g_last));
  const double b = la::frobenius_norm(la::mul(h_last, row));
  return std::sqrt(static_cast<double>(d * r)) * (a + b);
}

double residual_norm_sketched(const DenseMat& Y, const DenseMat& h_last,
                              const DenseMat& g_last, std::size_t d, std::size_t r) {
  if (d == 0) return 0.0;
  const DenseMat row = Y.block((d - 1) * r, 0, r, Y.cols());
  const DenseMat col = Y.block(0, (d - 1) * r, Y.rows(), r);
  const double a = la::frobenius_norm(la::mul_adjoint(col, g_last));
  const double b = la::frobenius_norm(la::mul(h_last, row));
  return std::hypot(a, b);
}

Compressed compress_Y(const DenseMat& Y, double rank_tol) {
  Compressed out;
  const double ny = Y.empty() ? 0.0 : la::frobenius_norm(Y);
  if (ny == 0.0) {
    out.Y1 = DenseMat(Y.rows(), 0);
    out.Y2 = DenseMat(Y.cols(), 0);
    return out;
  }
  const la::SVD s = la::svd(Y);
  const std::size_t m = s.sigma.size();
  // Smallest l with sqrt(sum_{i >= l} sigma_i^2) <= rank_tol |Y|_F.
  std::size_t l = m;
  double tail = 0.0;
  const double cut = rank_tol * ny;
  while (l > 0) {
    const double next = tail + s.sigma[l - 1] * s.sigma[l - 1];
    if (std::sqrt(next) > cut) break;
    tail = next;
    --l;
  }
  out.rank = l;
  out.Y1 = DenseMat(Y.rows(), l);
  out.Y2 = DenseMat(Y.cols(), l);
  for (std::size_t j = 0; j < l; ++j) {
    const double f = std::sqrt(s.sigma[j]);
    for (std::size_t i = 0; i < Y.rows(); ++i) out.Y1(i, j) = s.U(i, j) * f;
    for (std::size_t i = 0; i < Y.cols(); ++i) out.Y2(i, j) = s.V(i, j) * f;
  }
  return out;
}

DenseMat unwhiten(const DenseMat& Y, const DenseMat& T_U, const DenseMat& T_V) {
  const DenseMat left = la::solve_upper(T_U, Y);
  return la::transpose(la::solve_upper(T_V, la::transpose(left)));
}

// ---------------------------------------------------------------------------
// Two-pass reconstruction

DenseMat replay_side(const SparseMatrix& M, bool transpose, const DenseMat& C,
                     const ArnoldiRecord& rec, const DenseMat& Z, std::size_t chunk,
                     MemoryTracker* tracker) {
  const std::size_t r = rec.r;
  const std::size_t n = C.rows();
  if (r == 0 || C.cols() != r || Z.rows() % r != 0)
    throw DimensionMismatch("replay_side: inconsistent block width");
  if (M.n_rows() != n || M.n_cols() != n) throw DimensionMismatch("replay_side: operator size");
  const std::size_t d = Z.rows() / r;
  if (d > 0 && (rec.H.cols() < (d - 1) * r || rec.H.rows() < d * r))
    throw DimensionMismatch("replay_side: coefficient record too short");
  if (chunk == 0) chunk = 1;

  MemoryTracker local;
  MemoryTracker& mem = tracker ? *tracker : local;
  const std::size_t l = Z.cols();
  TrackedBlock x(mem, n, l);
  if (d == 0 || l == 0) return std::move(x.mat());

  // Batches of up to `chunk` basis vectors are accumulated straight from the
  // window; a batch is flushed early if its oldest block is about to leave.
  std::deque<TrackedBlock> window;
  std::size_t first = 1;
  std::size_t pending_first = 1, pending = 0;  // blocks not yet absorbed into X
  auto flush = [&] {
    DenseMat& X = x.mat();
    for (std::size_t c = 0; c < l; ++c) {
      double* xc = X.data() + c * n;
      for (std::size_t b = 0; b < pending; ++b) {
        const DenseMat& u = window[pending_first + b - first].mat();
        for (std::size_t q = 0; q < r; ++q) {
          const double z = Z((pending_first + b - 1) * r + q, c);
          if (z == 0.0) continue;
          const double* uq = u.data() + q * n;
          for (std::size_t i = 0; i < n; ++i) xc[i] += uq[i] * z;
        }
      }
    }
    pending_first += pending;
    pending = 0;
  };
  auto absorb = [&] {
    if (++pending * r >= chunk) flush();
  };

  {
    TrackedBlock u(mem, n, r);
    u.mat() = la::solve_upper_right(C, rec.ell);
    window.push_back(std::move(u));
  }
  absorb();
  for (std::size_t j = 1; j < d; ++j) {
    if (window.size() > rec.k && pending > 0 && pending_first == first) flush();
    while (window.size() > rec.k) {
      window.pop_front();
      ++first;
    }
    TrackedBlock w(mem, n, r);
    sparse::spmv_block(M, window.back().mat(), transpose, w.mat());
    for (std::size_t idx = 0; idx < window.size(); ++idx) {
      const DenseMat h = rec.H.block((first + idx - 1) * r, (j - 1) * r, r, r);
      la::sub_mul(w.mat(), window[idx].mat(), h);
    }
    const DenseMat hs = rec.H.block(j * r, (j - 1) * r, r, r);
    const double stored = la::frobenius_norm(hs);
    const double replayed = la::frobenius_norm(w.mat());
    if (!(std::abs(stored - replayed) <= 1e-8 * std::max(stored, replayed)))
      throw ReplayMismatch("replayed block norm " + std::to_string(replayed) +
                               " differs from stored " + std::to_string(stored) +
                               " at step " + std::to_string(j),
                           j);
    w.mat() = la::solve_upper_right(std::move(w.mat()), hs);
    window.push_back(std::move(w));
    absorb();
  }
  if (pending > 0) flush();
  return std::move(x.mat());
}

std::pair<DenseMat, DenseMat> two_pass_reconstruct(
    const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1, const DenseMat& C2,
    const ArnoldiRecord& rec_A, const ArnoldiRecord& rec_B, const DenseMat& Z1,
    const DenseMat& Z2, std::size_t chunk, MemoryTracker* tracker) {
  if (Z1.cols() != Z2.cols()) throw DimensionMismatch("two_pass_reconstruct: rank differs");
  MemoryTracker local;
  MemoryTracker& mem = tracker ? *tracker : local;
  DenseMat X1 = replay_side(A, false, C1, rec_A, Z1, chunk, &mem);
  // X1 stays live while the second side is regenerated.
  mem.acquire(X1.cols());
  DenseMat X2;
  try {
    X2 = replay_side(B, true, C2, rec_B, Z2, chunk, &mem);
  } catch (...) {
    mem.release(X1.cols());
    throw;
  }
  mem.acquire(X2.cols());
  mem.release(X1.cols() + X2.cols());
  return {std::move(X1), std::move(X2)};
}

double relative_residual(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                         const DenseMat& C2, const DenseMat& X1, const DenseMat& X2) {
  if (X1.cols() != X2.cols() || C1.cols() != C2.cols())
    throw DimensionMismatch("relative_residual: factor widths differ");
  const DenseMat den = la::mul_adjoint(la::qr_r(C1), la::qr_r(C2));
  const double nc = la::frobenius_norm(den);
  const DenseMat ax = sparse::spmv_block(A, X1, false);
  const DenseMat bx = sparse::spmv_block(B, X2, true);
  const DenseMat L = la::hstack(la::hstack(ax, X1), C1);
  const DenseMat R = la::hstack(la::hstack(X2, bx), -C2);
  const double num = la::frobenius_norm(la::mul_adjoint(la::qr_r(L), la::qr_r(R)));
  return num / nc;
}

// ---------------------------------------------------------------------------
// Engines

namespace {

struct SketchSide {
  sketch::SketchOperator S;
  sketch::SketchedQRState qr;
  DenseMat t, tau;    // T column of the newest appended block
  DenseMat Hhat;      // T_d H_d T_d^{-1}
  DenseMat corr;      // t_{d+1} h_{d+1,d} tau_d^{-1}
  DenseMat hhat;      // tau_{d+1} h_{d+1,d} tau_d^{-1}

  void init(const DenseMat& u1) {
    const auto app = sketch::sketched_qr_append(qr, sketch::sketch_apply(S, u1));
    t = app.t;
    tau = app.tau;
  }

  // Called after side.step(); brings Hhat to size d and prepares the
  // correction for the projected matrix at step d.
  void advance(const ArnoldiSide& side, bool breakdown) {
    const std::size_t d = side.d();
    const std::size_t r = side.r();
    const DenseMat& H = side.H();
    const DenseMat h_diag = blk(H, d - 1, d - 1, r);
    const DenseMat h_col = H.block(0, (d - 1) * r, (d - 1) * r, r);
    const DenseMat h_prev = d >= 2 ? blk(H, d - 1, d - 2, r) : DenseMat(r, r);
    const DenseMat T_prev = qr.T.block(0, 0, (d - 1) * r, (d - 1) * r);
    Hhat = sketch::whiten_hessenberg_update(Hhat, T_prev, t, tau, h_col, h_prev, h_diag).Hhat;
    if (breakdown) {
      corr = DenseMat(d * r, r);
      hhat = DenseMat(r, r);
      return;
    }
    const auto app = sketch::sketched_qr_append(qr, sketch::sketch_apply(S, side.newest()));
    const DenseMat ht = la::solve_upper_right(side.h_sub(), tau);
    corr = la::mul(app.t, ht);
    hhat = la::mul(app.tau, ht);
    t = app.t;
    tau = app.tau;
  }

  DenseMat projected() const {
    DenseMat m = Hhat;
    const std::size_t dr = m.rows(), r = corr.cols();
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < dr; ++i) m(i, dr - r + j) += corr(i, j);
    return m;
  }
};

SolveResult run(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                const DenseMat& C2, const SolverConfig& raw, const Observer& observer) {
  if (A.n_rows() != A.n_cols() || B.n_rows() != B.n_cols())
    throw DimensionMismatch("solve: coefficients must be square");
  if (C1.rows() != A.n_rows() || C2.rows() != B.n_rows() || C1.cols() != C2.cols())
    throw DimensionMismatch("solve: right-hand side factors do not conform");
  const std::size_t r = C1.cols();
  const SolverConfig cfg = resolve_config(raw, A.n_rows(), B.n_rows(), r);
  const Engine engine = cfg.engine;
  const bool sk = engine == Engine::Sketched;
  const auto t0 = std::chrono::steady_clock::now();
  auto wall = [&] {
    if (!cfg.record_timing) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  MemoryTracker mem;
  ArnoldiSide U(A, false, cfg.k, mem, cfg.verification);
  ArnoldiSide V(B, true, cfg.k_B, mem, cfg.verification);
  U.start(C1);
  V.start(C2);

  std::optional<SketchSide> su, sv;
  DenseMat beta1 = U.ell(), beta2 = V.ell();
  if (sk) {
    const std::size_t s1 = cfg.sketch == sketch::SketchKind::Exact ? A.n_rows() : cfg.s;
    const std::size_t s2 = cfg.sketch == sketch::SketchKind::Exact ? B.n_rows() : cfg.s;
    su.emplace();
    sv.emplace();
    su->S = sketch::SketchOperator::make(cfg.sketch, A.n_rows(), s1, cfg.seed, cfg.literal_scale);
    sv->S = sketch::SketchOperator::make(cfg.sketch, B.n_rows(), s2, cfg.seed + 1,
                                         cfg.literal_scale);
    su->init(U.newest());
    sv->init(V.newest());
    beta1 = la::mul(su->tau, U.ell());
    beta2 = la::mul(sv->tau, V.ell());
  }
  const DenseMat top = la::mul_adjoint(beta1, beta2);
  const double rhs_norm = la::frobenius_norm(top);

  SolveResult res;
  res.engine = engine;
  res.rhs_norm = rhs_norm;
  DenseMat Y_last, TU_last, TV_last;
  std::size_t d_last = 0;
  std::size_t skips = 0;

  for (std::size_t d = 1; d <= cfg.maxit; ++d) {
    const bool bdU = U.step();
    const bool bdV = V.step();
    const bool bd = bdU || bdV;
    if (sk) {
      su->advance(U, bdU);
      sv->advance(V, bdV);
    }
    res.iterations = d;
    if (bd) {
      res.breakdown = true;
      res.notes.push_back("lucky breakdown at d=" + std::to_string(d));
    }
    if (!(d % cfg.p == 0 || bd || d == cfg.maxit)) continue;

    const std::size_t dr = d * r;
    DenseMat M_U, M_V, h_last, g_last;
    if (sk) {
      M_U = su->projected();
      M_V = sv->projected();
      h_last = su->hhat;
      g_last = sv->hhat;
    } else {
      M_U = U.H_square();
      M_V = V.H_square();
      h_last = U.h_sub();
      g_last = V.h_sub();
    }
    DenseMat rhs(dr, dr);
    rhs.set_block(0, 0, top);
    DenseMat Y;
    try {
      Y = la::solve_sylvester_dense(M_U, M_V, rhs);
    } catch (const SingularOperator& e) {
      const std::string msg = std::string(e.what()) + " (projected solve at d=" +
                              std::to_string(d) + ")";
      if (!sk || bd) throw SingularOperator(msg, e.row(), e.col());
      res.notes.push_back("skipped check: " + msg);
      if (++skips >= cfg.max_singular_skips)
        throw SingularOperator(msg + "; " + std::to_string(skips) + " consecutive checks failed",
                               e.row(), e.col());
      continue;
    }
    skips = 0;

    const double rho = engine == Engine::Truncated
                           ? residual_bound_truncated(Y, h_last, g_last, d, r)
                           : residual_norm_sketched(Y, h_last, g_last, d, r);
    DenseMat T_U, T_V;
    if (sk) {
      T_U = su->qr.T.block(0, 0, dr, dr);
      T_V = sv->qr.T.block(0, 0, dr, dr);
    }

    HistoryEntry h;
    h.d = d;
    h.rho = rho;
    h.mem_vectors = mem.peak();
    if (cfg.verification) {
      const DenseMat Ud = U.shadow_basis().block(0, 0, A.n_rows(), dr);
      const DenseMat Vd = V.shadow_basis().block(0, 0, B.n_rows(), dr);
      const DenseMat X1 = sk ? la::mul(Ud, la::solve_upper(T_U, Y)) : la::mul(Ud, Y);
      const DenseMat X2 = sk ? la::solve_upper_right(Vd, T_V) : Vd;
      h.true_res = relative_residual(A, B, C1, C2, X1, X2);
    }
    h.wall_s = wall();
    res.history.push_back(h);

    if (observer) {
      CheckContext ctx{engine, d,      r,      Y,      rho,    rhs_norm, M_U, M_V,
                       beta1,  beta2,  h_last, g_last, U,      V};
      if (sk) {
        ctx.T_U = &T_U;
        ctx.T_V = &T_V;
        ctx.T_U_all = &su->qr.T;
        ctx.T_V_all = &sv->qr.T;
        ctx.S_U = &su->S;
        ctx.S_V = &sv->S;
      }
      observer(ctx);
    }

    Y_last = std::move(Y);
    TU_last = std::move(T_U);
    TV_last = std::move(T_V);
    d_last = d;
    res.rho = rho;
    if (rho < cfg.tol * rhs_norm) {
      res.converged = true;
      break;
    }
    if (bd) break;
  }
  if (d_last == 0) throw NonConvergence("no projected solve succeeded");

  // Compression happens in the whitened coordinates, where the Frobenius norm
  // of Y tracks that of X; T^{-1} is applied to the thin factors afterwards.
  Compressed comp = compress_Y(Y_last, cfg.rank_tol);
  if (sk) {
    comp.Y1 = la::solve_upper(TU_last, std::move(comp.Y1));
    comp.Y2 = la::solve_upper(TV_last, std::move(comp.Y2));
  }
  res.rank = comp.rank;
  res.Y = std::move(Y_last);

  if (engine == Engine::Full) {
    // Every block is still in the window.
    const std::size_t l = comp.rank;
    TrackedBlock x1(mem, A.n_rows(), l), x2(mem, B.n_rows(), l);
    for (std::size_t i = 0; i < d_last; ++i) {
      la::add_mul(x1.mat(), U.window()[i].mat(), comp.Y1.block(i * r, 0, r, l));
      la::add_mul(x2.mat(), V.window()[i].mat(), comp.Y2.block(i * r, 0, r, l));
    }
    res.X1 = x1.mat();
    res.X2 = x2.mat();
  } else {
    U.release_window();
    V.release_window();
    auto [X1, X2] = two_pass_reconstruct(A, B, C1, C2, U.record(), V.record(), comp.Y1,
                                         comp.Y2, cfg.chunk, &mem);
    res.X1 = std::move(X1);
    res.X2 = std::move(X2);
  }
  res.mem_long_vectors = mem.peak();
  return res;
}

}  // namespace

SolveResult solve(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                  const DenseMat& C2, const SolverConfig& cfg, const Observer& observer) {
  return run(A, B, C1, C2, cfg, observer);
}

SolveResult solve_full(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                       const DenseMat& C2, SolverConfig cfg, const Observer& observer) {
  cfg.engine = Engine::Full;
  return run(A, B, C1, C2, cfg, observer);
}

SolveResult solve_truncated(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                            const DenseMat& C2, SolverConfig cfg, const Observer& observer) {
  cfg.engine = Engine::Truncated;
  return run(A, B, C1, C2, cfg, observer);
}

SolveResult solve_sketched(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                           const DenseMat& C2, SolverConfig cfg, const Observer& observer) {
  cfg.engine = Engine::Sketched;
  return run(A, B, C1, C2, cfg, observer);
}

}  // namespace sylkit::krylov
