#include <doctest.h>

#include <cmath>
#include <random>

#include "kraftlab/dyadic.hpp"
#include "kraftlab/dyadic_matrix.hpp"
#include "kraftlab/errors.hpp"

using namespace kraftlab;

TEST_CASE("dyadic canonical form") {
  Dyadic a = Dyadic::from_mantissa_exp(mpz_class(4), 2);  // 4/4 = 1
  CHECK(a == Dyadic(1));
  CHECK(a.exponent() == 0);
  CHECK(a.mantissa() == 1);

  Dyadic z = Dyadic::from_mantissa_exp(mpz_class(0), 17);
  CHECK(z.is_zero());
  CHECK(z.exponent() == 0);

  Dyadic h = Dyadic::half_pow(3);
  CHECK(h.mantissa() == 1);
  CHECK(h.exponent() == 3);
  CHECK(h.to_double() == 0.125);
}

TEST_CASE("dyadic arithmetic is exact") {
  Dyadic half = Dyadic::half_pow(1);
  Dyadic quarter = Dyadic::half_pow(2);
  CHECK(half + quarter == Dyadic::from_mantissa_exp(mpz_class(3), 2));
  CHECK(half * half == quarter);
  CHECK((half + half) == Dyadic(1));

  // 1/2 + 1/4 + 1/8 + 1/8 = 1
  Dyadic sum = Dyadic::half_pow(1) + Dyadic::half_pow(2) +
               Dyadic::half_pow(3) + Dyadic::half_pow(3);
  CHECK(sum == Dyadic(1));

  Dyadic big = Dyadic::pow2(70);
  CHECK(big * Dyadic::half_pow(70) == Dyadic(1));
}

TEST_CASE("dyadic comparison across exponents") {
  Dyadic a = Dyadic::from_mantissa_exp(mpz_class(3), 2);   // 3/4
  Dyadic b = Dyadic::from_mantissa_exp(mpz_class(13), 4);  // 13/16
  CHECK(a < b);
  CHECK(b > a);
  CHECK(a <= a);
  CHECK(a != b);
  CHECK(Dyadic() < Dyadic::half_pow(60));
}

TEST_CASE("dyadic log2 and to_double") {
  CHECK(Dyadic::half_pow(10).log2() == doctest::Approx(-10.0));
  CHECK(std::isinf(Dyadic().log2()));
  CHECK(Dyadic().log2() < 0);
  Dyadic v = Dyadic::from_mantissa_exp(mpz_class(5), 3);  // 5/8
  CHECK(v.to_double() == 0.625);
  CHECK(v.log2() == doctest::Approx(std::log2(0.625)));
}

TEST_CASE("dyadic random sum agrees with long double") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(0, 20);
  Dyadic sum;
  long double ref = 0.0L;
  for (int i = 0; i < 200; ++i) {
    int l = len(rng);
    sum += Dyadic::half_pow(l);
    ref += std::pow(2.0L, static_cast<long double>(-l));
  }
  CHECK(sum.to_double() ==
        doctest::Approx(static_cast<double>(ref)).epsilon(1e-15));
}

TEST_CASE("dyadic matrix multiply is exact and ordered") {
  DyadicMatrix k(2);
  k.at(0, 0) = Dyadic::half_pow(1);
  k.at(0, 1) = Dyadic::half_pow(1);
  k.at(1, 0) = Dyadic(1);
  DyadicMatrix sq = k * k;
  // [[1/2,1/2],[1,0]]^2 = [[3/4,1/4],[1/2,1/2]]
  CHECK(sq.at(0, 0) == Dyadic::from_mantissa_exp(mpz_class(3), 2));
  CHECK(sq.at(0, 1) == Dyadic::half_pow(2));
  CHECK(sq.at(1, 0) == Dyadic::half_pow(1));
  CHECK(sq.at(1, 1) == Dyadic::half_pow(1));

  CHECK(matrix_power(k, 1) == k);
  CHECK(matrix_power(k, 2) == sq);
  CHECK(matrix_power(k, 0) == DyadicMatrix::identity(2));
  CHECK(matrix_power(k, 5) == sq * sq * k);
}

TEST_CASE("matrix power respects the mantissa budget") {
  DyadicMatrix m(1);
  m.at(0, 0) = Dyadic::from_mantissa_exp(mpz_class(3), 1);  // 3/2
  Budget tight;
  tight.max_mantissa_bits = 64;
  CHECK_THROWS_AS(matrix_power(m, 100, tight), BudgetExceeded);
  Budget loose;
  CHECK(matrix_power(m, 64, loose).at(0, 0).bit_size() > 64);
}

TEST_CASE("dyadic matrix row sums and extremes") {
  DyadicMatrix k(2);
  k.at(0, 0) = Dyadic::half_pow(1);
  k.at(0, 1) = Dyadic::half_pow(2);
  k.at(1, 0) = Dyadic(1);
  std::vector<Dyadic> rows = k.row_sums();
  CHECK(rows[0] == Dyadic::from_mantissa_exp(mpz_class(3), 2));
  CHECK(rows[1] == Dyadic(1));
  CHECK(k.total_sum() == Dyadic::from_mantissa_exp(mpz_class(7), 2));
  CHECK(k.max_entry() == Dyadic(1));
}
