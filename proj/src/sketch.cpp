#include "sylkit/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sylkit/linalg.hpp"
#include "sylkit/rng.hpp"

namespace sylkit::sketch {

std::string to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::Gaussian: return "gaussian";
    case SketchKind::SRDCT: return "srdct";
    case SketchKind::Exact: return "exact";
  }
  return "unknown";
}

SketchKind parse_sketch_kind(const std::string& name) {
  if (name == "gaussian") return SketchKind::Gaussian;
  if (name == "srdct") return SketchKind::SRDCT;
  if (name == "exact") return SketchKind::Exact;
  throw Error(ErrorCode::InvalidConfig, "unknown sketch kind '" + name + "'");
}

namespace {
void check_sizes(std::size_t n, std::size_t s) {
  if (n == 0) throw DimensionMismatch("sketch: source dimension must be positive");
  if (s == 0 || s > n)
    throw DimensionMismatch("sketch: need 0 < s <= n, got s=" + std::to_string(s) +
                            ", n=" + std::to_string(n));
}
}  // namespace

SketchOperator SketchOperator::gaussian(std::size_t n, std::size_t s, std::uint64_t seed) {
  check_sizes(n, s);
  SketchOperator op;
  op.kind_ = SketchKind::Gaussian;
  op.n_ = n;
  op.s_ = s;
  op.seed_ = seed;
  Rng rng(seed);
  op.gauss_ = std::make_shared<const DenseMat>(rng.normal_matrix(s, n, 1.0 / std::sqrt(double(s))));
  return op;
}

SketchOperator SketchOperator::srdct(std::size_t n, std::size_t s, std::uint64_t seed,
                                     bool literal_scale) {
  check_sizes(n, s);
  SketchOperator op;
  op.kind_ = SketchKind::SRDCT;
  op.n_ = n;
  op.s_ = s;
  op.seed_ = seed;
  const double ratio = static_cast<double>(n) / static_cast<double>(s);
  op.scale_ = literal_scale ? std::sqrt(1.0 / ratio) : std::sqrt(ratio);
  Rng rng(seed);
  op.signs_.resize(n);
  for (double& e : op.signs_) e = rng.sign();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i < s; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
  op.rows_.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(s));
  op.dct_ = std::make_shared<const DctPlan>(n);
  return op;
}

SketchOperator SketchOperator::exact(std::size_t n) {
  check_sizes(n, n);
  SketchOperator op;
  op.kind_ = SketchKind::Exact;
  op.n_ = n;
  op.s_ = n;
  return op;
}

SketchOperator SketchOperator::make(SketchKind kind, std::size_t n, std::size_t s,
                                    std::uint64_t seed, bool literal_scale) {
  switch (kind) {
    case SketchKind::Gaussian: return gaussian(n, s, seed);
    case SketchKind::SRDCT: return srdct(n, s, seed, literal_scale);
    case SketchKind::Exact: return exact(n);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown sketch kind");
}

DenseMat SketchOperator::apply(const DenseMat& x) const {
  if (x.rows() != n_)
    throw DimensionMismatch("sketch_apply: block has " + std::to_string(x.rows()) +
                            " rows, operator expects " + std::to_string(n_));
  switch (kind_) {
    case SketchKind::Exact:
      return x;
    case SketchKind::Gaussian:
      return la::mul(*gauss_, x);
    case SketchKind::SRDCT: {
      DenseMat out(s_, x.cols());
      std::vector<double> buf(n_), tr(n_);
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double* xc = x.data() + c * n_;
        for (std::size_t i = 0; i < n_; ++i) buf[i] = signs_[i] * xc[i];
        dct_->forward(buf.data(), tr.data());
        for (std::size_t i = 0; i < s_; ++i) out(i, c) = scale_ * tr[rows_[i]];
      }
      return out;
    }
  }
  return x;
}

DenseMat SketchOperator::to_dense() const {
  return apply(DenseMat::identity(n_));
}

DenseMat sketch_apply(const SketchOperator& s, const DenseMat& x) { return s.apply(x); }

double distortion_from_sketched(const DenseMat& sketched_basis) {
  if (sketched_basis.cols() == 0) return 0.0;
  const auto sv = la::svd(sketched_basis).sigma;
  double smax = sv.front(), smin = sv.back();
  // fewer sketch rows than basis columns: some direction is annihilated
  if (sketched_basis.rows() < sketched_basis.cols()) smin = 0.0;
  return std::max({0.0, 1.0 - smin * smin, smax * smax - 1.0});
}

double measure_distortion(const SketchOperator& s, const DenseMat& basis) {
  DenseMat g = la::adjoint_mul(basis, basis);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  const double err = la::max_abs(g);
  if (err > 1e-10)
    throw NotOrthonormal("measure_distortion: max |B^T B - I| = " + std::to_string(err));
  return distortion_from_sketched(s.apply(basis));
}

QRAppend sketched_qr_append(SketchedQRState& state, const DenseMat& w) {
  const std::size_t m = state.m();
  const std::size_t r = w.cols();
  if (m > 0 && w.rows() != state.Q.rows())
    throw DimensionMismatch("sketched_qr_append: block has " + std::to_string(w.rows()) +
                            " rows, state has " + std::to_string(state.Q.rows()));
  const double wnorm = la::frobenius_norm(w);
  DenseMat wp = w;
  QRAppend out;
  out.t = DenseMat(m, r);
  if (m > 0) {
    for (int pass = 0; pass < 2; ++pass) {
      const DenseMat c = la::adjoint_mul(state.Q, wp);
      la::sub_mul(wp, state.Q, c);
      out.t += c;
    }
  }
  la::QR local = la::householder_qr(wp);
  if (local.R.rows() < r)
    throw Breakdown("sketched_qr_append: sketch dimension exhausted", local.R.rows());
  for (std::size_t i = 0; i < r; ++i)
    if (!(local.R(i, i) >= 1e-14 * wnorm) || wnorm == 0.0)
      throw Breakdown("sketched_qr_append: sketched basis became dependent at column " +
                          std::to_string(m + i),
                      m + i);
  out.tau = local.R;

  state.Q = la::hstack(state.Q, local.Q);
  DenseMat t_new(m + r, m + r);
  t_new.set_block(0, 0, state.T);
  t_new.set_block(0, m, out.t);
  t_new.set_block(m, m, out.tau);
  state.T = std::move(t_new);
  return out;
}

namespace {
void check_tau(const DenseMat& tau, const char* which) {
  const double scale = la::max_abs(tau);
  for (std::size_t i = 0; i < tau.rows(); ++i)
    if (!(std::abs(tau(i, i)) > 1e-14 * scale))
      throw SingularTau(std::string("whiten_hessenberg_update: ") + which +
                        " has a vanishing diagonal entry at " + std::to_string(i));
}
}  // namespace

WhitenUpdate whiten_hessenberg_update(const DenseMat& Hhat_d, const DenseMat& T_d,
                                      const DenseMat& t, const DenseMat& tau,
                                      const DenseMat& h_col, const DenseMat& h_sub,
                                      const DenseMat& h_diag) {
  const std::size_t r = tau.rows();
  const std::size_t dr = Hhat_d.rows();
  if (!tau.is_square() || h_diag.rows() != r || h_diag.cols() != r || T_d.rows() != dr ||
      (dr > 0 && (t.rows() != dr || t.cols() != r || h_col.rows() != dr ||
                  h_sub.rows() != r || h_sub.cols() != r)))
    throw DimensionMismatch("whiten_hessenberg_update: inconsistent block sizes");
  check_tau(tau, "tau_{d+1}");

  WhitenUpdate out;
  out.Hhat = DenseMat(dr + r, dr + r);
  if (dr == 0) {
    out.Hhat = la::solve_upper_right(la::mul(tau, h_diag), tau);
    out.correction = DenseMat(0, r);
    return out;
  }
  const DenseMat tau_d = T_d.block(dr - r, dr - r, r, r);
  check_tau(tau_d, "tau_d");

  // h tau_d^{-1}
  const DenseMat h_taud = la::solve_upper_right(h_sub, tau_d);
  out.correction = la::mul(t, h_taud);

  DenseMat tl = Hhat_d;
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < dr; ++i) tl(i, dr - r + j) += out.correction(i, j);

  DenseMat tr = la::mul(T_d, h_col);
  la::add_mul(tr, t, h_diag);
  la::sub_mul(tr, tl, t);
  tr = la::solve_upper_right(std::move(tr), tau);

  const DenseMat bl = la::mul(tau, h_taud);

  DenseMat inner = h_diag;
  la::sub_mul(inner, h_taud, t.block(dr - r, 0, r, r));
  const DenseMat br = la::solve_upper_right(la::mul(tau, inner), tau);

  out.Hhat.set_block(0, 0, tl);
  out.Hhat.set_block(0, dr, tr);
  out.Hhat.set_block(dr, dr - r, bl);
  out.Hhat.set_block(dr, dr, br);
  return out;
}

}  // namespace sylkit::sketch
