#include "kraftlab/dyadic_matrix.hpp"

#include "kraftlab/errors.hpp"

namespace kraftlab {

DyadicMatrix DyadicMatrix::identity(int n) {
  DyadicMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Dyadic(1ul);
  return m;
}

DyadicMatrix DyadicMatrix::operator*(const DyadicMatrix& o) const {
  if (n_ != o.n_) throw DomainError("matrix size mismatch in product");
  DyadicMatrix r(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      Dyadic acc;
      for (int k = 0; k < n_; ++k) acc += at(i, k) * o.at(k, j);
      r.at(i, j) = std::move(acc);
    }
  }
  return r;
}

bool DyadicMatrix::operator==(const DyadicMatrix& o) const {
  if (n_ != o.n_) return false;
  for (std::size_t i = 0; i < a_.size(); ++i)
    if (a_[i] != o.a_[i]) return false;
  return true;
}

std::vector<Dyadic> DyadicMatrix::row_sums() const {
  std::vector<Dyadic> r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r[i] += at(i, j);
  return r;
}

Dyadic DyadicMatrix::total_sum() const {
  Dyadic t;
  for (const Dyadic& d : a_) t += d;
  return t;
}

Dyadic DyadicMatrix::max_entry() const {
  Dyadic m;
  for (const Dyadic& d : a_)
    if (d > m) m = d;
  return m;
}

std::size_t DyadicMatrix::max_bits() const {
  std::size_t b = 0;
  for (const Dyadic& d : a_) b = std::max(b, d.bit_size());
  return b;
}

std::vector<double> DyadicMatrix::to_doubles() const {
  std::vector<double> v(a_.size());
  for (std::size_t i = 0; i < a_.size(); ++i) v[i] = a_[i].to_double();
  return v;
}

DyadicMatrix matrix_power(const DyadicMatrix& k, std::uint64_t n,
                          const Budget& budget) {
  DyadicMatrix result = DyadicMatrix::identity(k.size());
  if (n == 0) return result;
  DyadicMatrix base = k;
  auto check = [&budget](const DyadicMatrix& m) {
    if (m.max_bits() > budget.max_mantissa_bits)
      throw BudgetExceeded("matrix power exceeded the mantissa bit budget");
  };
  check(base);
  bool have_result = false;
  while (true) {
    if (n & 1) {
      result = have_result ? result * base : base;
      have_result = true;
      check(result);
    }
    n >>= 1;
    if (n == 0) break;
    base = base * base;
    check(base);
  }
  return result;
}

}  // namespace kraftlab
