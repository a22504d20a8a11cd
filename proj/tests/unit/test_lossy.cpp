#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "kraftlab/errors.hpp"
#include "kraftlab/io.hpp"
#include "kraftlab/lossy.hpp"

using namespace kraftlab;

namespace {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

nlohmann::json load(const char* name) {
  return load_json(std::string(KRAFTLAB_DATA_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("hamming ball sizes by enumeration and DP") {
  Distortion ham = Distortion::hamming(2);
  CHECK(ham.integral());
  CHECK(ham.balanced());

  std::vector<int> center{0, 0, 0};
  // Radius 1 ball around 000: itself plus the three single flips.
  CHECK(ball_size_enumerate(ham, center, 1.0 / 3) == 4);
  CHECK(ball_size_dp(ham, center, 1.0 / 3) == 4);
  CHECK(ball_size(ham, center, 1.0 / 3) == 4);
  CHECK(b_ell(ham, 3, 1.0 / 3) == 4);

  // Radius boundaries: D just below 1/3 still admits radius 1 through the
  // slack, D = 0 only the center, D = 1 everything.
  CHECK(b_ell(ham, 3, 0.0) == 1);
  CHECK(b_ell(ham, 3, 1.0) == 8);
  CHECK(b_ell(ham, 4, 0.5) == 11);  // 1 + 4 + 6

  // Unbalanced table: the max runs over centers.
  Distortion skew;
  skew.source_size = 2;
  skew.repro_size = 2;
  skew.d = {0.0, 1.0, 2.0, 0.0};
  skew.source_names = {"0", "1"};
  skew.repro_names = {"0", "1"};
  CHECK_FALSE(skew.balanced());
  // Center 11...1: source symbol 0 costs 1 per letter, so radius ell D = 2
  // admits words with at most two zeros; no other center does better.
  CHECK(ball_size(skew, std::vector<int>{1, 1, 1}, 2.0 / 3) == 7);
  CHECK(ball_size(skew, std::vector<int>{0, 0, 0}, 2.0 / 3) == 4);
  CHECK(b_ell(skew, 3, 2.0 / 3) == 7);
}

TEST_CASE("nearest-codeword quantizer on the repetition codebook") {
  Distortion ham = Distortion::hamming(2);
  Quantizer q = parse_quantizer(load("quantizer_rep3.json"), ham);
  CHECK(q.ell == 3);
  CHECK(q.source_blocks() == 8);
  CHECK(q.repro_blocks() == 8);
  CHECK(q.D == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(quantizer_max_distortion(q, ham) == doctest::Approx(1.0 / 3));

  // Majority vote: words with at most one 1 go to 000 (rank 0), the rest to
  // 111 (rank 7).
  for (std::int64_t rank = 0; rank < 8; ++rank) {
    int ones = __builtin_popcountll(static_cast<unsigned long long>(rank));
    CHECK(q.map[rank] == (ones <= 1 ? 0 : 7));
  }
}

TEST_CASE("quantizer parsing rejects an understated distortion level") {
  Distortion ham = Distortion::hamming(2);
  nlohmann::json j = load("quantizer_rep3.json");
  j["D"] = 0.2;
  CHECK_THROWS_AS(parse_quantizer(j, ham), ParseError);
  j["D"] = 0.4;
  Quantizer q = parse_quantizer(j, ham);
  CHECK(q.D == doctest::Approx(0.4));
}

TEST_CASE("lossy kraft chain on the repetition scheme") {
  Distortion ham = Distortion::hamming(2);
  Quantizer q = parse_quantizer(load("quantizer_rep3.json"), ham);
  Encoder coder = parse_encoder(load("repro_coder3.json"));

  LossyKraft lk = lossy_kraft_matrix(q, coder, ham);
  CHECK(lk.ball_bound == 4);
  // Khat = 2^-2 + 2^-2 + 6 * 2^-5 = 11/16; K pulls 4 blocks onto each
  // codeword of length 2, so K = 8 * 2^-2 = 2.
  CHECK(lk.k_hat.at(0, 0) == Dyadic::from_mantissa_exp(mpz_class(11), 4));
  CHECK(lk.k.at(0, 0) == Dyadic(2));
  CHECK(lk.entrywise_dominated);

  GKIReport rep = lossy_gki_check(q, coder, ham);
  CHECK(rep.all_hold());
  CHECK(rep.context.at("ball_bound").get<std::uint64_t>() == 4);
  double phi = std::stod(rep.context.at("phi").get<std::string>());
  CHECK(phi == doctest::Approx(binary_entropy(1.0 / 3)).epsilon(1e-3));
  // log2 B = 2 <= ell Phi(D) ~ 2.755.
  CHECK(2.0 <= q.ell * phi + 1e-9);
}

TEST_CASE("reproduction coder alphabet must cover the repro blocks") {
  Distortion ham = Distortion::hamming(2);
  Quantizer q = parse_quantizer(load("quantizer_rep3.json"), ham);
  Encoder wrong = parse_encoder(load("example1.json"));
  CHECK_THROWS_AS(lossy_kraft_matrix(q, wrong, ham), DomainError);
}

TEST_CASE("max conditional entropy under a distortion budget") {
  Distortion ham = Distortion::hamming(2);
  CHECK(phi_of_D(ham, 0.0) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(phi_of_D(ham, 0.11) == doctest::Approx(0.49981).epsilon(1e-3));
  CHECK(phi_of_D(ham, 1.0 / 3) ==
        doctest::Approx(binary_entropy(1.0 / 3)).epsilon(1e-3));
  // Saturation: the uniform conditional is feasible at D = 1/2.
  CHECK(phi_of_D(ham, 0.5) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(phi_of_D(ham, 0.9) == doctest::Approx(1.0).epsilon(1e-6));

  // Monotone in D.
  double prev = 0.0;
  for (double D : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    double cur = phi_of_D(ham, D);
    CHECK(cur >= prev - 1e-9);
    prev = cur;
  }

  Distortion ham3 = Distortion::hamming(3);
  CHECK(phi_of_D(ham3, 2.0 / 3) == doctest::Approx(std::log2(3.0)).epsilon(1e-4));
  CHECK(phi_of_D(ham3, 0.0) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("spectral radius is monotone under entrywise domination") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    Mat a(n), b(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double base = unif(rng);
        a(i, j) = base;
        b(i, j) = base + unif(rng) * 0.5;
      }
    double ra = spectral_radius(a).rho;
    double rb = spectral_radius(b).rho;
    CHECK(ra <= rb + 1e-7 * std::max(1.0, rb));
  }
}
