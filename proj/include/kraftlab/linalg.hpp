#pragma once

#include <string>
#include <vector>

#include "kraftlab/dyadic_matrix.hpp"

namespace kraftlab {

/// Dense square double matrix, row-major. Entries must be non-negative for
/// every routine in this header.
struct Mat {
  int n = 0;
  std::vector<double> a;

  Mat() = default;
  explicit Mat(int size) : n(size), a(static_cast<std::size_t>(size) * size) {}
  double& operator()(int i, int j) {
    return a[static_cast<std::size_t>(i) * n + j];
  }
  double operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i) * n + j];
  }
};

Mat to_mat(const DyadicMatrix& k);
Mat mat_mul(const Mat& x, const Mat& y);
std::vector<double> mat_vec(const Mat& m, const std::vector<double>& v);
std::vector<double> vec_mat(const std::vector<double>& v, const Mat& m);
/// Max absolute row sum.
double inf_norm(const Mat& m);

/// Strong connectivity of the digraph with an edge i -> j per positive entry.
bool matrix_irreducible(const Mat& m);

enum class SpectralMethod { kPowerIteration, kGelfand };

const char* spectral_method_name(SpectralMethod m);

struct SpectralReport {
  double rho = 0.0;
  SpectralMethod method = SpectralMethod::kGelfand;
  int iterations = 0;
  /// Relative defect of the final estimate: convergence gap for Gelfand,
  /// eigen-equation residual for power iteration.
  double residual = 0.0;
};

/// Spectral radius of a non-negative matrix to relative tolerance rel_tol.
/// Gelfand's formula (repeated squaring with sup-norm renormalization) is the
/// workhorse and needs no structural assumptions; when the matrix is
/// irreducible the result is cross-checked by power iteration on M + I and
/// the power-iteration value is reported. Throws DomainError for non-square
/// or negative input, Error if neither method converges within max_iter.
SpectralReport spectral_radius(const Mat& m, double rel_tol = 1e-9,
                               int max_iter = 10000);
SpectralReport spectral_radius(const DyadicMatrix& k, double rel_tol = 1e-9,
                               int max_iter = 10000);

struct PerronPair {
  double rho = 0.0;
  std::vector<double> left;   // row vector u, u K = rho u, sums to 1
  std::vector<double> right;  // column vector v, K v = rho v, sums to 1
  double residual = 0.0;      // max of the two eigen-equation residuals
};

/// Perron left/right eigenvectors of an irreducible non-negative matrix,
/// normalized to unit sum, eigen-residual below rel_tol. Throws DomainError
/// when the matrix is reducible.
PerronPair perron_vectors(const Mat& m, double rel_tol = 1e-8,
                          int max_iter = 100000);
PerronPair perron_vectors(const DyadicMatrix& k, double rel_tol = 1e-8,
                          int max_iter = 100000);

enum class CwSide { kLower, kUpper };

/// Collatz-Wielandt ratio bound from a non-negative, not identically zero
/// test vector w:
///   lower: min over {z : w_z > 0} of [K w]_z / w_z  (<= rho)
///   upper: max over {z : w_z > 0} of [K w]_z / w_z  (>= rho), which requires
///          w_z > 0 wherever [K w]_z > 0, otherwise the max understates rho
///          and the call throws DomainError.
double collatz_wielandt(const Mat& m, const std::vector<double>& w, CwSide s);
double collatz_wielandt(const DyadicMatrix& k, const std::vector<double>& w,
                        CwSide s);

}  // namespace kraftlab
