#include "sylkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "sylkit/linalg.hpp"

namespace sylkit::analysis {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double segment_distance(cplx z, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(z - a);
  const double t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

// Unit eigenvector first entries of an upper triangular R, mapped back by Q.
std::vector<double> eigvec_first_entries(const la::SchurDecomposition& s) {
  const std::size_t n = s.dim;
  const double floor = 1e-300 + std::numeric_limits<double>::epsilon() *
                                    std::max(la::frobenius_norm(s.R), 1e-300);
  std::vector<double> out(n);
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(x.begin(), x.end(), cplx{});
    x[i] = 1.0;
    const cplx lam = s.R(i, i);
    for (std::size_t jj = i; jj-- > 0;) {
      cplx acc{};
      for (std::size_t k = jj + 1; k <= i; ++k) acc += s.R(jj, k) * x[k];
      cplx den = s.R(jj, jj) - lam;
      if (std::abs(den) < floor) den = floor;
      x[jj] = -acc / den;
    }
    cplx first{};
    double nrm2 = 0.0;
    for (std::size_t k = 0; k <= i; ++k) {
      first += s.Q(0, k) * x[k];
    }
    // Q is unitary, so |Q x| = |x|
    for (std::size_t k = 0; k <= i; ++k) nrm2 += std::norm(x[k]);
    out[i] = std::abs(first) / std::sqrt(nrm2);
  }
  return out;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}


// R E_d^T Y + Y E_d Q^T for dr x r blocks R, Q.
DenseMat low_rank_term(const DenseMat& R, const DenseMat& Q, const DenseMat& Y, std::size_t r) {
  const std::size_t dr = Y.rows();
  const DenseMat lastY_row = Y.block(dr - r, 0, r, Y.cols());
  const DenseMat Y_lastcol = Y.block(0, Y.cols() - r, Y.rows(), r);
  DenseMat out = la::mul(R, lastY_row);
  out += la::mul(Y_lastcol, la::transpose(Q));
  return out;
}

DenseMat subtract_last_block(DenseMat H, const DenseMat& R, std::size_t r) {
  const std::size_t dr = H.rows();
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < dr; ++i) H(i, dr - r + j) -= R(i, j);
  return H;
}

}  // namespace

DenseMat kronecker_sum_inverse(const DenseMat& H, const DenseMat& G) {
  if (!H.is_square() || !G.is_square())
    throw DimensionMismatch("kronecker_sum_inverse: coefficients must be square");
  const std::size_t m = H.rows(), p = G.rows();
  DenseMat L(m * p, m * p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) L(j * m + a, j * m + b) += H(a, b);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (G(i, j) != 0.0)
        for (std::size_t a = 0; a < m; ++a) L(i * m + a, j * m + a) += G(i, j);
  return la::inverse(L);
}

FovBoundary fov_boundary(const CDenseMat& M, std::size_t n_angles) {
  if (!M.is_square() || M.rows() == 0)
    throw DimensionMismatch("fov_boundary: matrix must be square and nonempty");
  if (n_angles < 8) throw Error(ErrorCode::InvalidConfig, "fov_boundary: need at least 8 angles");
  const std::size_t n = M.rows();
  const CDenseMat Mh = la::adjoint(M);
  FovBoundary out;
  out.angles.reserve(n_angles);
  out.points.reserve(n_angles);
  out.alpha = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_angles; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n_angles);
    const cplx w = std::polar(1.0, theta);
    CDenseMat H = M * (0.5 * w);
    H += Mh * (0.5 * std::conj(w));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const cplx v = 0.5 * (H(i, j) + std::conj(H(j, i)));
        H(i, j) = v;
        H(j, i) = std::conj(v);
      }
    for (std::size_t i = 0; i < n; ++i) H(i, i) = H(i, i).real();
    const la::HermitianEig eig = la::hermitian_eig(H);
    CDenseMat v = eig.vectors.block(0, n - 1, n, 1);
    const cplx z = la::adjoint_mul(v, la::mul(M, v))(0, 0);
    out.angles.push_back(theta);
    out.points.push_back(z);
    out.alpha = std::max(out.alpha, z.real());
  }
  return out;
}

FovBoundary fov_boundary(const DenseMat& M, std::size_t n_angles) {
  return fov_boundary(la::to_complex(M), n_angles);
}

double distance_to_fov(const FovBoundary& fov, cplx z) {
  const auto& p = fov.points;
  if (p.empty()) throw DimensionMismatch("distance_to_fov: empty boundary");
  double area = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    area += cross(p[i], p[(i + 1) % p.size()]);
    scale = std::max(scale, std::abs(p[i] - p[0]));
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    best = std::min(best, segment_distance(z, p[i], p[(i + 1) % p.size()]));
  if (std::abs(area) > 1e-12 * scale * scale) {
    const double orient = area > 0 ? 1.0 : -1.0;
    bool inside = true;
    for (std::size_t i = 0; i < p.size() && inside; ++i) {
      const cplx a = p[i], b = p[(i + 1) % p.size()];
      if (a == b) continue;
      if (orient * cross(b - a, z - a) < 0.0) inside = false;
    }
    if (inside) return 0.0;
  }
  return best;
}

DenseMat perturbed_matrix(const DenseMat& Hhat, const std::vector<double>& hhat) {
  if (!Hhat.is_square() || Hhat.rows() != hhat.size() || hhat.empty())
    throw DimensionMismatch("perturbed_matrix: Hhat must be d x d and hhat of length d");
  DenseMat M = Hhat;
  const std::size_t d = hhat.size();
  for (std::size_t i = 0; i < d; ++i) M(i, d - 1) += hhat[i];
  return M;
}

double default_drop_threshold(const DenseMat& Hhat, const std::vector<double>& hhat) {
  return 1e-12 * la::frobenius_norm(perturbed_matrix(Hhat, hhat));
}

EffectiveFovResult effective_fov(const DenseMat& Hhat, const std::vector<double>& hhat,
                                 double drop_threshold) {
  const DenseMat M = perturbed_matrix(Hhat, hhat);
  if (!(drop_threshold >= 0.0)) drop_threshold = default_drop_threshold(Hhat, hhat);
  const std::size_t d = M.rows();

  la::SchurDecomposition s = la::complex_schur(la::transpose(M));
  const std::vector<double> first = eigvec_first_entries(s);
  std::vector<bool> select(d);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < d; ++i) {
    select[i] = first[i] <= drop_threshold;
    if (select[i]) order.push_back(i);
  }
  const std::size_t dropped = order.size();
  for (std::size_t i = 0; i < d; ++i)
    if (!select[i]) order.push_back(i);
  la::reorder_schur(s, select);

  EffectiveFovResult out;
  out.threshold = drop_threshold;
  out.dropped = dropped;
  out.kept = d - dropped;
  out.Q = s.Q;
  out.Q1 = s.Q.block(0, dropped, d, out.kept);
  out.compressed = la::adjoint_mul(out.Q1, la::mul(la::to_complex(M), out.Q1));
  for (std::size_t i = 0; i < d; ++i) {
    out.first_row_magnitudes.push_back(std::abs(s.Q(0, i)));
    out.eigenvalues.push_back(s.R(i, i));
    out.eigenvector_first.push_back(first[order[i]]);
  }
  return out;
}

CDenseMat effective_lyapunov_solution(const EffectiveFovResult& eff, double beta) {
  const std::size_t d = eff.Q.rows();
  if (eff.kept == 0) return CDenseMat(d, d);
  CDenseMat e1q(eff.kept, 1);
  for (std::size_t j = 0; j < eff.kept; ++j) e1q(j, 0) = std::conj(eff.Q1(0, j));
  const CDenseMat rhs = la::mul_adjoint(e1q, e1q) * cplx{-beta * beta};
  const CDenseMat Z =
      la::solve_sylvester_dense(eff.compressed, la::conjugate(eff.compressed), rhs);
  return la::mul_adjoint(la::mul(eff.Q1, Z), eff.Q1);
}

std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionMismatch("spearman: samples differ in length");
  if (x.size() < 2) return std::nullopt;
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

DecayProfile schur_decay_profile(const DenseMat& Hhat, const std::vector<double>& hhat,
                                 std::size_t n_angles) {
  const DenseMat M = perturbed_matrix(Hhat, hhat);
  const la::SchurDecomposition s = la::complex_schur(la::transpose(M));
  const std::vector<double> first = eigvec_first_entries(s);
  const FovBoundary fov = fov_boundary(Hhat, n_angles);

  DecayProfile out;
  for (std::size_t i = 0; i < s.dim; ++i)
    out.points.push_back({s.R(i, i), distance_to_fov(fov, s.R(i, i)), first[i]});
  std::stable_sort(out.points.begin(), out.points.end(),
                   [](const DecayPoint& a, const DecayPoint& b) { return a.distance < b.distance; });
  std::vector<double> dist, logm;
  for (const auto& p : out.points) {
    dist.push_back(p.distance);
    logm.push_back(std::log10(std::max(p.first_entry, 1e-300)));
  }
  out.spearman = spearman(dist, logm);
  return out;
}

bool ex45_qualifies(const sparse::HhatInstance& inst) {
  const DenseMat M = perturbed_matrix(inst.Hhat, inst.hhat);
  if (!(la::numerical_abscissa(inst.Hhat) < 0.0)) return false;
  double spec = -std::numeric_limits<double>::infinity();
  for (const cplx& l : la::eigenvalues(M)) spec = std::max(spec, l.real());
  if (!(spec > 0.0)) return false;
  const EffectiveFovResult eff = effective_fov(inst.Hhat, inst.hhat);
  if (eff.kept == 0) return false;
  for (const cplx& l : la::eigenvalues(eff.compressed))
    if (!(l.real() < 0.0)) return false;
  return true;
}

std::optional<std::uint64_t> find_ex45_seed(std::size_t d, std::uint64_t first,
                                            std::size_t count) {
  for (std::uint64_t seed = first; seed < first + count; ++seed)
    if (ex45_qualifies(sparse::gen_hhat_ex45(d, seed))) return seed;
  return std::nullopt;
}

double eta_epsilon(double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw InvalidGeometry("eta_epsilon: eps must lie in [0, 1), got " + std::to_string(eps));
  return (1.0 + std::sqrt((1.0 + eps) / (1.0 - eps))) * (1.0 + 1.0 / std::sqrt(1.0 - eps));
}

double ellipse_bound(std::size_t d, double alpha_max, const Ellipse& e, double eps) {
  const double eta = eta_epsilon(eps);
  if (!(e.a1 > 0.0 && e.a2 >= 0.0 && e.a1 >= e.a2))
    throw InvalidGeometry("ellipse_bound: need a1 >= a2 >= 0 and a1 > 0");
  if (!(e.a1 < e.c))
    throw InvalidGeometry("ellipse_bound: ellipse is not contained in the open left half-plane");
  const double delta = std::sqrt(e.a1 * e.a1 - e.a2 * e.a2);
  const double gap = e.c - alpha_max;
  if (!(gap > delta))
    throw InvalidGeometry("ellipse_bound: (c - alpha_max)^2 <= delta^2");
  const double root = std::sqrt(gap * gap - delta * delta);
  const double rho1 = 0.5 * (e.a1 + e.a2);
  const double rho2 = (gap + root) / (2.0 * rho1);
  if (!(rho2 > 1.0))
    throw InvalidGeometry("ellipse_bound: rho_2 = " + std::to_string(rho2) + " <= 1");
  return 2.0 * eta / root * rho2 / (rho2 - 1.0) * std::pow(rho2, -static_cast<double>(d));
}

Ellipse bounding_ellipse(const std::vector<cplx>& points, double inflate) {
  if (points.empty()) throw DimensionMismatch("bounding_ellipse: no points");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymax = 0.0;
  for (const cplx& z : points) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymax = std::max(ymax, std::abs(z.imag()));
  }
  const double width = xmax - xmin;

  // semi-axis a2 needed for center x0 and real semi-axis a1
  auto a2_for = [&](double x0, double a1) {
    double a2 = 0.0;
    for (const cplx& z : points) {
      const double u = (z.real() - x0) / a1;
      const double q = 1.0 - u * u;
      if (q <= 0.0) {
        if (z.imag() != 0.0) return std::numeric_limits<double>::infinity();
        continue;
      }
      a2 = std::max(a2, std::abs(z.imag()) / std::sqrt(q));
    }
    return a2;
  };
  auto best_for_center = [&](double x0, Ellipse& e) {
    const double w = std::max(xmax - x0, x0 - xmin);
    double best = std::numeric_limits<double>::infinity();
    if (w == 0.0) {
      e = {-x0, ymax, ymax};
      return 2.0 * ymax * ymax;
    }
    // geometric grid in a1 / w, then golden refinement of the best bracket
    const std::size_t n = 160;
    double lo = std::log(1e-9), hi = std::log(1e4);
    auto area = [&](double t) {
      const double a1 = w * (1.0 + std::exp(t));
      return a1 * a2_for(x0, a1);
    };
    double tbest = lo;
    for (std::size_t i = 0; i <= n; ++i) {
      const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
      const double a = area(t);
      if (a < best) {
        best = a;
        tbest = t;
      }
    }
    const double h = (hi - lo) / static_cast<double>(n);
    double a = tbest - h, b = tbest + h;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
      const double c1 = b - g * (b - a), c2 = a + g * (b - a);
      if (area(c1) < area(c2)) b = c2; else a = c1;
    }
    const double t = 0.5 * (a + b);
    if (area(t) < best) tbest = t;
    const double a1 = w * (1.0 + std::exp(tbest));
    e = {-x0, a1, a2_for(x0, a1)};
    return e.a1 * e.a2 + (e.a2 == 0.0 ? e.a1 * 1e-300 : 0.0);
  };

  Ellipse best_e;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t nc = 41;
  double step = width / static_cast<double>(nc - 1);
  double center = 0.5 * (xmin + xmax);
  for (std::size_t i = 0; i < nc; ++i) {
    const double x0 = xmin + step * static_cast<double>(i);
    Ellipse e;
    const double a = best_for_center(x0, e);
    if (a < best) {
      best = a;
      best_e = e;
      center = x0;
    }
  }
  for (int round = 0; round < 3 && width > 0.0; ++round) {
    step /= 10.0;
    const double c0 = center;
    for (int i = -10; i <= 10; ++i) {
      const double x0 = c0 + step * i;
      Ellipse e;
      const double a = best_for_center(x0, e);
      if (a < best) {
        best = a;
        best_e = e;
        center = x0;
      }
    }
  }
  if (best_e.a2 > best_e.a1) best_e.a1 = best_e.a2;
  // homothety about the rightmost vertex, which therefore stays put
  const double vertex = -best_e.c + best_e.a1;
  best_e.a1 *= 1.0 + inflate;
  best_e.a2 *= 1.0 + inflate;
  best_e.c = best_e.a1 - vertex;
  return best_e;
}

namespace {

struct Captured {
  bool seen = false;
  DenseMat Y, M_U, M_V;
  DenseMat U, V;            // shadow bases, (d+1) blocks when available
  DenseMat T_U, T_V;        // full sketched triangular factors
  DenseMat h_U, h_V;        // whitened subdiagonal blocks
};

Captured run_to(const SparseMatrix& A, const SparseMatrix& B, const DenseMat& C1,
                const DenseMat& C2, std::size_t d, krylov::SolverConfig cfg) {
  cfg.maxit = d;
  cfg.p = d;
  cfg.tol = 1e-300;
  cfg.verification = true;
  cfg.record_timing = false;
  Captured cap;
  krylov::solve(A, B, C1, C2, cfg, [&](const krylov::CheckContext& ctx) {
    if (ctx.d != d) return;
    cap.seen = true;
    cap.Y = ctx.Y;
    cap.M_U = ctx.M_U;
    cap.M_V = ctx.M_V;
    cap.U = ctx.U.shadow_basis();
    cap.V = ctx.V.shadow_basis();
    cap.h_U = ctx.h_last;
    cap.h_V = ctx.g_last;
    if (ctx.T_U_all) {
      cap.T_U = *ctx.T_U_all;
      cap.T_V = *ctx.T_V_all;
    }
  });
  if (!cap.seen)
    throw Breakdown("distance_to_full_bound: engine " + krylov::to_string(cfg.engine) +
                        " stopped before d=" + std::to_string(d),
                    d);
  return cap;
}

// Expresses the whitened truncated basis in the orthonormal Krylov basis:
// returns T with Uhat_d = Ufull_d T, and R = Ufull_d^T Uhat_{d+1} hhat T_dd^{-1}
// where T_dd is the last diagonal block of T.
std::pair<DenseMat, DenseMat> transfer(const DenseMat& Ufull, const Captured& sk, std::size_t d,
                                       std::size_t r) {
  const std::size_t dr = d * r;
  const std::size_t n = Ufull.rows();
  if (sk.T_U.cols() < dr + r || sk.U.cols() < dr + r)
    throw Breakdown("distance_to_full_bound: sketched basis has no block d+1", d);
  const DenseMat Tall = sk.T_U.block(0, 0, dr + r, dr + r);
  const DenseMat Uhat = la::solve_upper_right(sk.U.block(0, 0, n, dr + r), Tall);
  const DenseMat Ud = Ufull.block(0, 0, n, dr);
  const DenseMat T = la::mul(la::transpose(Ud), Uhat.block(0, 0, n, dr));
  const DenseMat next = la::mul(la::transpose(Ud), Uhat.block(0, dr, n, r));
  const DenseMat T_dd = T.block(dr - r, dr - r, r, r);
  const DenseMat R = la::solve_upper_right(la::mul(next, sk.h_U), T_dd);
  return {T, R};
}

}  // namespace

DistanceBound distance_to_full_bound(const SparseMatrix& A, const SparseMatrix& B,
                                     const DenseMat& C1, const DenseMat& C2, std::size_t d,
                                     krylov::SolverConfig sketched) {
  if (A.n_rows() > 2000 || B.n_rows() > 2000)
    throw Error(ErrorCode::RequiresVerification,
                "distance_to_full_bound: retained bases need n <= 2000");
  if (d == 0) throw Error(ErrorCode::InvalidConfig, "distance_to_full_bound: d must be positive");
  const std::size_t r = C1.cols();
  sketched.engine = krylov::Engine::Sketched;
  krylov::SolverConfig full = sketched;
  full.engine = krylov::Engine::Full;

  const Captured fc = run_to(A, B, C1, C2, d, full);
  Captured sc = run_to(A, B, C1, C2, d, sketched);

  // the V side of the sketched run reuses the same helper with swapped roles
  Captured sv = sc;
  sv.U = sc.V;
  sv.T_U = sc.T_V;
  sv.h_U = sc.h_V;
  const auto [TU, RH] = transfer(fc.U, sc, d, r);
  const auto [TV, RG] = transfer(fc.V, sv, d, r);

  const DenseMat Ysk = la::mul(la::mul(TU, sc.Y), la::transpose(TV));
  const DenseMat& H = fc.M_U;
  const DenseMat& G = fc.M_V;

  DistanceBound out;
  out.lhs = la::frobenius_norm(fc.Y - Ysk);
  out.R_H_norm = la::frobenius_norm(RH);
  out.R_G_norm = la::frobenius_norm(RG);
  out.L_inv_norm = la::frobenius_norm(kronecker_sum_inverse(H, G));
  out.rhs = out.L_inv_norm * la::frobenius_norm(low_rank_term(RH, RG, Ysk, r));

  const DenseMat Ht = subtract_last_block(H, RH, r);
  const DenseMat Gt = subtract_last_block(G, RG, r);
  out.L_tilde_inv_norm = la::frobenius_norm(kronecker_sum_inverse(Ht, Gt));
  out.rhs_tilde = out.L_tilde_inv_norm * la::frobenius_norm(low_rank_term(RH, RG, fc.Y, r));

  // (H - R_H E_d^T) Ysk + Ysk (G - R_G E_d^T)^T should equal the full right-hand side
  DenseMat lhs_eq = la::mul(Ht, Ysk);
  lhs_eq += la::mul(Ysk, la::transpose(Gt));
  DenseMat full_rhs = la::mul(H, fc.Y);
  full_rhs += la::mul(fc.Y, la::transpose(G));
  out.identity_residual =
      la::frobenius_norm(lhs_eq - full_rhs) / std::max(la::frobenius_norm(full_rhs), 1e-300);
  return out;
}

TensorEmbedding tensor_embedding_check(const sketch::SketchOperator& S_U,
                                       const sketch::SketchOperator& S_V, const DenseMat& U,
                                       const DenseMat& V, const DenseMat& Z) {
  if (Z.rows() != U.cols() || Z.cols() != V.cols())
    throw DimensionMismatch("tensor_embedding_check: Z must be cols(U) x cols(V)");
  TensorEmbedding out;
  out.eps = std::max(sketch::measure_distortion(S_U, U), sketch::measure_distortion(S_V, V));
  out.eps_tilde = out.eps * (2.0 + out.eps);
  const double zn = la::frobenius_norm(Z);
  if (zn == 0.0) throw DimensionMismatch("tensor_embedding_check: Z is zero");
  const DenseMat SU = S_U.apply(U), SV = S_V.apply(V);
  out.ratio = la::frobenius_norm(la::mul(la::mul(SU, Z), la::transpose(SV))) / zn;
  // 1e-12 absorbs rounding in the exact-sketch limit
  out.sandwich_holds = out.ratio >= 1.0 - out.eps_tilde - 1e-12 &&
                       out.ratio <= 1.0 + out.eps_tilde + 1e-12;
  return out;
}

DenseMat toeplitz_krylov_basis(const SparseMatrix& A, std::size_t d) {
  const std::size_t n = A.n_rows();
  if (d == 0 || d > n) throw DimensionMismatch("toeplitz_krylov_basis: need 0 < d <= n");
  DenseMat K(n, d);
  DenseMat v(n, 1, 1.0 / std::sqrt(static_cast<double>(n)));
  for (std::size_t j = 0; j < d; ++j) {
    K.set_block(0, j, v);
    v = sparse::spmv_block(A, v);
  }
  return la::householder_qr(K).Q;
}

SketchFovGap sketch_fov_gap(const SparseMatrix& A, const DenseMat& V,
                            const sketch::SketchOperator& S, std::size_t n_angles) {
  const DenseMat AV = sparse::spmv_block(A, V);
  const DenseMat plain = la::mul(la::transpose(V), AV);
  const DenseMat sk = la::mul(la::transpose(S.apply(V)), S.apply(AV));
  SketchFovGap out;
  out.plain = fov_boundary(plain, n_angles);
  out.sketched = fov_boundary(sk, n_angles);
  out.alpha_plain = la::numerical_abscissa(plain);
  out.alpha_sketched = la::numerical_abscissa(sk);
  out.norm_A = la::norm2(A.to_dense());
  return out;
}

}  // namespace sylkit::analysis
