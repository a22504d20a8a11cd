#include "kraftlab/dyadic.hpp"

#include <cmath>
#include <limits>

#include "kraftlab/errors.hpp"

namespace kraftlab {

void Dyadic::canonicalize() {
  if (mant_ == 0) {
    exp_ = 0;
    return;
  }
  if (exp_ == 0) return;
  // Lowest set bit bounds how far the fraction can be reduced.
  mp_bitcnt_t low = mpz_scan1(mant_.get_mpz_t(), 0);
  std::uint64_t shift = std::min<std::uint64_t>(low, exp_);
  if (shift > 0) {
    mpz_fdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(),
                    static_cast<mp_bitcnt_t>(shift));
    exp_ -= shift;
  }
}

Dyadic Dyadic::from_mantissa_exp(mpz_class m, std::uint64_t e) {
  if (m < 0) throw DomainError("dyadic mantissa must be non-negative");
  Dyadic d;
  d.mant_ = std::move(m);
  d.exp_ = e;
  d.canonicalize();
  return d;
}

Dyadic Dyadic::half_pow(std::uint64_t bits) {
  Dyadic d;
  d.mant_ = 1;
  d.exp_ = bits;
  return d;
}

Dyadic Dyadic::pow2(std::uint64_t bits) {
  Dyadic d;
  mpz_ui_pow_ui(d.mant_.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  return d;
}

std::size_t Dyadic::bit_size() const {
  if (mant_ == 0) return 0;
  return mpz_sizeinbase(mant_.get_mpz_t(), 2);
}

Dyadic& Dyadic::operator+=(const Dyadic& o) {
  if (o.mant_ == 0) return *this;
  if (mant_ == 0) {
    *this = o;
    return *this;
  }
  std::uint64_t e = std::max(exp_, o.exp_);
  mpz_class a = mant_;
  if (e > exp_)
    mpz_mul_2exp(a.get_mpz_t(), a.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(e - exp_));
  mpz_class b = o.mant_;
  if (e > o.exp_)
    mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(e - o.exp_));
  mant_ = a + b;
  exp_ = e;
  canonicalize();
  return *this;
}

Dyadic& Dyadic::operator*=(const Dyadic& o) {
  mant_ *= o.mant_;
  exp_ += o.exp_;
  canonicalize();  // only does work when a factor was zero
  return *this;
}

int Dyadic::compare(const Dyadic& o) const {
  // Cross-multiply by the exponent gap on one side only.
  if (exp_ == o.exp_) return mpz_cmp(mant_.get_mpz_t(), o.mant_.get_mpz_t());
  mpz_class shifted;
  if (exp_ > o.exp_) {
    mpz_mul_2exp(shifted.get_mpz_t(), o.mant_.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(exp_ - o.exp_));
    return mpz_cmp(mant_.get_mpz_t(), shifted.get_mpz_t());
  }
  mpz_mul_2exp(shifted.get_mpz_t(), mant_.get_mpz_t(),
               static_cast<mp_bitcnt_t>(o.exp_ - exp_));
  return mpz_cmp(shifted.get_mpz_t(), o.mant_.get_mpz_t());
}

double Dyadic::to_double() const {
  if (mant_ == 0) return 0.0;
  long m_exp = 0;
  double frac = mpz_get_d_2exp(&m_exp, mant_.get_mpz_t());
  // value = frac * 2^(m_exp - exp_)
  return std::ldexp(frac, static_cast<int>(m_exp - static_cast<long>(exp_)));
}

double Dyadic::log2() const {
  if (mant_ == 0) return -std::numeric_limits<double>::infinity();
  long m_exp = 0;
  double frac = mpz_get_d_2exp(&m_exp, mant_.get_mpz_t());
  return std::log2(frac) + static_cast<double>(m_exp) -
         static_cast<double>(exp_);
}

}  // namespace kraftlab
