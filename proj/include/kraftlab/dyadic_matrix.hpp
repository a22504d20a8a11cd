#pragma once

#include <cstdint>
#include <vector>

#include "kraftlab/budget.hpp"
#include "kraftlab/dyadic.hpp"

namespace kraftlab {

/// Dense square matrix of non-negative dyadics. Multiplication uses a fixed
/// summation order (inner index ascending) so results are reproducible
/// bit-for-bit.
class DyadicMatrix {
 public:
  DyadicMatrix() = default;
  explicit DyadicMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

  static DyadicMatrix identity(int n);

  int size() const { return n_; }
  Dyadic& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const Dyadic& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }

  DyadicMatrix operator*(const DyadicMatrix& o) const;
  bool operator==(const DyadicMatrix& o) const;

  std::vector<Dyadic> row_sums() const;
  Dyadic total_sum() const;
  Dyadic max_entry() const;
  /// Widest mantissa across entries, for budget accounting.
  std::size_t max_bits() const;
  std::vector<double> to_doubles() const;

 private:
  int n_ = 0;
  std::vector<Dyadic> a_;
};

/// K^n by repeated squaring; n == 0 gives the identity. Throws
/// BudgetExceeded once any intermediate mantissa outgrows
/// budget.max_mantissa_bits.
DyadicMatrix matrix_power(const DyadicMatrix& k, std::uint64_t n,
                          const Budget& budget = Budget{});

}  // namespace kraftlab
