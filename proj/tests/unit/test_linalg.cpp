#include <doctest.h>

#include <random>
#include <vector>

#include "kraftlab/errors.hpp"
#include "kraftlab/io.hpp"
#include "kraftlab/kraft.hpp"
#include "kraftlab/linalg.hpp"

using namespace kraftlab;

namespace {

Mat example_k() {
  Encoder e = parse_encoder(
      load_json(std::string(KRAFTLAB_DATA_DIR) + "/example1.json"));
  return to_mat(kraft_matrix(e));
}

}  // namespace

TEST_CASE("spectral radius on known matrices") {
  Mat d(2);
  d(0, 0) = 0.25;
  d(1, 1) = 0.5;
  SpectralReport rep = spectral_radius(d);
  CHECK(rep.rho == doctest::Approx(0.5).epsilon(1e-9));

  Mat zero(3);
  CHECK(spectral_radius(zero).rho == 0.0);

  Mat one(1);
  one(0, 0) = 0.8125;
  rep = spectral_radius(one);
  CHECK(rep.rho == 0.8125);
  CHECK(rep.iterations == 0);

  // Companion of x^2 - x - 1: golden ratio.
  Mat fib(2);
  fib(0, 0) = 1.0;
  fib(0, 1) = 1.0;
  fib(1, 0) = 1.0;
  rep = spectral_radius(fib);
  CHECK(rep.rho == doctest::Approx(1.6180339887498949).epsilon(1e-9));
  CHECK(rep.method == SpectralMethod::kPowerIteration);

  Mat neg(1);
  neg(0, 0) = -1.0;
  CHECK_THROWS_AS(spectral_radius(neg), DomainError);
}

TEST_CASE("gelfand handles reducible and periodic structure") {
  // Nilpotent: rho = 0.
  Mat nil(2);
  nil(0, 1) = 3.0;
  CHECK(spectral_radius(nil).rho == doctest::Approx(0.0).epsilon(1e-6));

  // Reducible block diagonal: rho = max of blocks.
  Mat blocks(3);
  blocks(0, 0) = 0.3;
  blocks(1, 2) = 2.0;
  blocks(2, 1) = 2.0;  // period-2 block, rho 2
  CHECK(spectral_radius(blocks).rho == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("perron vectors of the block coder Kraft matrix") {
  Mat k = example_k();
  PerronPair p = perron_vectors(k);
  CHECK(p.rho == doctest::Approx(1.0).epsilon(1e-8));
  // Right vector proportional to (1, 3/4, 1), left to (1, 1, 1/4).
  CHECK(p.right[0] == doctest::Approx(4.0 / 11).epsilon(1e-6));
  CHECK(p.right[1] == doctest::Approx(3.0 / 11).epsilon(1e-6));
  CHECK(p.right[2] == doctest::Approx(4.0 / 11).epsilon(1e-6));
  CHECK(p.left[0] == doctest::Approx(4.0 / 9).epsilon(1e-6));
  CHECK(p.left[1] == doctest::Approx(4.0 / 9).epsilon(1e-6));
  CHECK(p.left[2] == doctest::Approx(1.0 / 9).epsilon(1e-6));

  Mat reducible(2);
  reducible(0, 0) = 1.0;
  reducible(1, 1) = 1.0;
  CHECK_THROWS_AS(perron_vectors(reducible), DomainError);
}

TEST_CASE("collatz-wielandt ratios bracket the spectral radius") {
  Mat k = example_k();
  std::vector<double> ones{1.0, 1.0, 1.0};
  CHECK(collatz_wielandt(k, ones, CwSide::kLower) ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(collatz_wielandt(k, ones, CwSide::kUpper) ==
        doctest::Approx(1.25).epsilon(1e-12));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.1, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w{pos(rng), pos(rng), pos(rng)};
    CHECK(collatz_wielandt(k, w, CwSide::kLower) <= 1.0 + 1e-9);
    CHECK(collatz_wielandt(k, w, CwSide::kUpper) >= 1.0 - 1e-9);
  }

  // Upper side demands support covering K w.
  Mat chain(2);
  chain(0, 1) = 1.0;
  chain(1, 0) = 1.0;
  std::vector<double> partial{1.0, 0.0};
  CHECK_THROWS_AS(collatz_wielandt(chain, partial, CwSide::kUpper),
                  DomainError);
  CHECK(collatz_wielandt(chain, partial, CwSide::kLower) == 0.0);
}

TEST_CASE("irreducibility of matrices") {
  Mat k = example_k();
  CHECK(matrix_irreducible(k));
  Mat tri(2);
  tri(0, 0) = 1.0;
  tri(0, 1) = 1.0;
  tri(1, 1) = 1.0;
  CHECK_FALSE(matrix_irreducible(tri));
  Mat single(1);
  CHECK_FALSE(matrix_irreducible(single));
  single(0, 0) = 0.5;
  CHECK(matrix_irreducible(single));
}
