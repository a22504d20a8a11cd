#include "kraftlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>

#include "kraftlab/errors.hpp"

namespace kraftlab {

namespace {

void require_nonneg_square(const Mat& m, const char* who) {
  if (m.n <= 0 || m.a.size() != static_cast<std::size_t>(m.n) * m.n)
    throw DomainError(std::string(who) + ": matrix is not square");
  for (double x : m.a)
    if (x < 0.0 || !std::isfinite(x))
      throw DomainError(std::string(who) +
                        ": matrix entries must be finite and non-negative");
}

// Nodes reachable from 0 along edges selected by pick(i, j).
template <typename Pick>
int reach_count(const Mat& m, Pick pick) {
  std::vector<char> seen(m.n, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int count = 1;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j = 0; j < m.n; ++j) {
      if (!seen[j] && pick(i, j)) {
        seen[j] = 1;
        ++count;
        queue.push_back(j);
      }
    }
  }
  return count;
}

struct GelfandResult {
  double rho = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Gelfand: rho = lim ||M^(2^t)||^(1/2^t). Tracks r_t = log2||M^(2^t)|| / 2^t,
// which updates by log2(norm of the renormalized square) / 2^t, so no
// intermediate value can overflow.
GelfandResult gelfand_radius(const Mat& m0, double rel_tol, int max_iter) {
  GelfandResult res;
  Mat m = m0;
  double nm = inf_norm(m);
  if (nm == 0.0) {
    res.converged = true;
    return res;  // nilpotent of index 1
  }
  for (double& x : m.a) x /= nm;
  double r = std::log2(nm);
  double half = 1.0;
  // Relative tolerance on rho translates to an absolute one on log2(rho).
  double log_tol = rel_tol / std::log(4.0);
  for (int t = 1; t <= max_iter; ++t) {
    m = mat_mul(m, m);
    nm = inf_norm(m);
    res.iterations = t;
    if (nm == 0.0) {
      res.rho = 0.0;
      res.residual = 0.0;
      res.converged = true;
      return res;
    }
    half *= 0.5;
    double delta = std::log2(nm) * half;
    r += delta;
    for (double& x : m.a) x /= nm;
    if (std::abs(delta) <= log_tol) {
      res.rho = std::exp2(r);
      res.residual = std::abs(std::exp2(delta) - 1.0);
      res.converged = true;
      return res;
    }
  }
  res.rho = std::exp2(r);
  res.residual = std::abs(std::exp2(std::log2(nm) * half) - 1.0);
  return res;
}

struct PowerResult {
  double rho_shifted = 0.0;  // spectral radius of M + I
  std::vector<double> vec;   // sup-normalized iterate
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Power iteration on B = M + I (primitive when M is irreducible). The
// Collatz-Wielandt ratios of the strictly positive iterate bracket rho(B);
// the bracket width is the stopping criterion.
PowerResult power_shifted(const Mat& m, double rel_tol, int max_iter,
                          bool transpose) {
  PowerResult res;
  std::vector<double> v(m.n, 1.0);
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> w = transpose ? vec_mat(v, m) : mat_vec(m, v);
    for (int i = 0; i < m.n; ++i) w[i] += v[i];  // B = M + I
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < m.n; ++i) {
      double ratio = w[i] / v[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    double norm = *std::max_element(w.begin(), w.end());
    for (double& x : w) x /= norm;
    v = std::move(w);
    res.iterations = it;
    if (hi - lo <= rel_tol * hi) {
      res.rho_shifted = 0.5 * (hi + lo);
      res.residual = (hi - lo) / hi;
      res.vec = std::move(v);
      res.converged = true;
      return res;
    }
  }
  res.vec = std::move(v);
  return res;
}

}  // namespace

Mat to_mat(const DyadicMatrix& k) {
  Mat m(k.size());
  m.a = k.to_doubles();
  return m;
}

Mat mat_mul(const Mat& x, const Mat& y) {
  if (x.n != y.n) throw DomainError("matrix size mismatch in product");
  Mat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

std::vector<double> mat_vec(const Mat& m, const std::vector<double>& v) {
  std::vector<double> r(m.n, 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r[i] += m(i, j) * v[j];
  return r;
}

std::vector<double> vec_mat(const std::vector<double>& v, const Mat& m) {
  std::vector<double> r(m.n, 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r[j] += v[i] * m(i, j);
  return r;
}

double inf_norm(const Mat& m) {
  double best = 0.0;
  for (int i = 0; i < m.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < m.n; ++j) row += std::abs(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

bool matrix_irreducible(const Mat& m) {
  require_nonneg_square(m, "matrix_irreducible");
  if (m.n == 1) return m(0, 0) > 0.0;
  auto fwd = [&m](int i, int j) { return m(i, j) > 0.0; };
  auto bwd = [&m](int i, int j) { return m(j, i) > 0.0; };
  return reach_count(m, fwd) == m.n && reach_count(m, bwd) == m.n;
}

const char* spectral_method_name(SpectralMethod m) {
  return m == SpectralMethod::kPowerIteration ? "power_iteration" : "gelfand";
}

SpectralReport spectral_radius(const Mat& m, double rel_tol, int max_iter) {
  require_nonneg_square(m, "spectral_radius");
  SpectralReport rep;
  if (m.n == 1) {
    // 1x1: the entry is the spectral radius, exactly.
    rep.rho = m(0, 0);
    rep.method = SpectralMethod::kGelfand;
    return rep;
  }
  GelfandResult gf = gelfand_radius(m, rel_tol, max_iter);
  rep.rho = gf.rho;
  rep.method = SpectralMethod::kGelfand;
  rep.iterations = gf.iterations;
  rep.residual = gf.residual;
  if (!matrix_irreducible(m)) {
    if (!gf.converged) throw Error("spectral_radius: no convergence");
    return rep;
  }
  PowerResult pi = power_shifted(m, rel_tol, max_iter, /*transpose=*/false);
  if (pi.converged) {
    double rho_pi = pi.rho_shifted - 1.0;
    double agree = std::abs(rho_pi - gf.rho) / std::max(1.0, rho_pi);
    rep.rho = rho_pi;
    rep.method = SpectralMethod::kPowerIteration;
    rep.iterations = pi.iterations;
    rep.residual = std::max(pi.residual, gf.converged ? agree : 0.0);
    return rep;
  }
  if (!gf.converged) throw Error("spectral_radius: no convergence");
  return rep;
}

SpectralReport spectral_radius(const DyadicMatrix& k, double rel_tol,
                               int max_iter) {
  return spectral_radius(to_mat(k), rel_tol, max_iter);
}

PerronPair perron_vectors(const Mat& m, double rel_tol, int max_iter) {
  require_nonneg_square(m, "perron_vectors");
  if (!matrix_irreducible(m))
    throw DomainError("perron_vectors: matrix is reducible");
  PowerResult right = power_shifted(m, rel_tol * 1e-2, max_iter, false);
  PowerResult left = power_shifted(m, rel_tol * 1e-2, max_iter, true);
  if (!right.converged || !left.converged)
    throw Error("perron_vectors: power iteration did not converge");
  PerronPair pair;
  pair.rho = right.rho_shifted - 1.0;
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
  };
  pair.right = std::move(right.vec);
  pair.left = std::move(left.vec);
  normalize(pair.right);
  normalize(pair.left);
  double scale = std::max(1.0, pair.rho);
  double resid = 0.0;
  std::vector<double> mv = mat_vec(m, pair.right);
  std::vector<double> um = vec_mat(pair.left, m);
  for (int i = 0; i < m.n; ++i) {
    resid = std::max(resid, std::abs(mv[i] - pair.rho * pair.right[i]));
    resid = std::max(resid, std::abs(um[i] - pair.rho * pair.left[i]));
  }
  pair.residual = resid / scale;
  return pair;
}

PerronPair perron_vectors(const DyadicMatrix& k, double rel_tol,
                          int max_iter) {
  return perron_vectors(to_mat(k), rel_tol, max_iter);
}

double collatz_wielandt(const Mat& m, const std::vector<double>& w,
                        CwSide side) {
  require_nonneg_square(m, "collatz_wielandt");
  if (static_cast<int>(w.size()) != m.n)
    throw DomainError("collatz_wielandt: vector length mismatch");
  bool any_pos = false;
  for (double x : w) {
    if (x < 0.0) throw DomainError("collatz_wielandt: vector must be >= 0");
    any_pos = any_pos || x > 0.0;
  }
  if (!any_pos)
    throw DomainError("collatz_wielandt: vector must not be all zero");
  std::vector<double> kw = mat_vec(m, w);
  if (side == CwSide::kUpper) {
    for (int i = 0; i < m.n; ++i)
      if (w[i] == 0.0 && kw[i] > 0.0)
        throw DomainError(
            "collatz_wielandt: upper bound needs w > 0 wherever (K w) > 0");
  }
  double best = side == CwSide::kLower
                    ? std::numeric_limits<double>::infinity()
                    : 0.0;
  for (int i = 0; i < m.n; ++i) {
    if (w[i] <= 0.0) continue;
    double ratio = kw[i] / w[i];
    best = side == CwSide::kLower ? std::min(best, ratio)
                                  : std::max(best, ratio);
  }
  return best;
}

double collatz_wielandt(const DyadicMatrix& k, const std::vector<double>& w,
                        CwSide side) {
  return collatz_wielandt(to_mat(k), w, side);
}

}  // namespace kraftlab
