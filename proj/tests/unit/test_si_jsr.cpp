#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "kraftlab/io.hpp"
#include "kraftlab/si.hpp"

using namespace kraftlab;

namespace {

SIEncoder load_pair() {
  return parse_si_encoder(
      load_json(std::string(KRAFTLAB_DATA_DIR) + "/si_pair.json"));
}

// A = [[eps, 1/eps], [0, eps]], B = transpose(A); the family's products can
// blow up even though each member has tiny spectral radius.
std::vector<Mat> eps_family(double eps) {
  Mat a(2);
  a(0, 0) = eps;
  a(0, 1) = 1.0 / eps;
  a(1, 1) = eps;
  Mat b(2);
  b(0, 0) = eps;
  b(1, 0) = 1.0 / eps;
  b(1, 1) = eps;
  return {a, b};
}

}  // namespace

TEST_CASE("kraft family of the paired encoder") {
  SIEncoder e = load_pair();
  KraftFamily fam = kraft_family(e);
  REQUIRE(fam.size() == 2);
  CHECK(fam.labels == std::vector<std::string>{"u", "v"});
  // K(u) = [[1/2,1/2],[1/4,1/4]], K(v) = [[1/4,1/4],[1/2,1/2]].
  CHECK(fam.mats[0].at(0, 0) == Dyadic::half_pow(1));
  CHECK(fam.mats[0].at(1, 0) == Dyadic::half_pow(2));
  CHECK(fam.mats[1].at(0, 1) == Dyadic::half_pow(2));
  CHECK(fam.mats[1].at(1, 1) == Dyadic::half_pow(1));

  // Every row sum is at most 1, so all products of the family keep row sums
  // at most 1 and the all-ones vector is sub-invariant.
  for (const DyadicMatrix& k : fam.mats)
    for (const Dyadic& r : k.row_sums()) CHECK(r <= Dyadic(1));

  std::vector<int> word{0, 1, 1, 0, 1};
  DyadicMatrix prod = family_product(fam, word);
  for (const Dyadic& r : prod.row_sums()) CHECK(r <= Dyadic(1));

  SubinvariantResult sub = find_subinvariant_vector(fam);
  REQUIRE(sub.found);
  for (double v : sub.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("si encode and the side-information IL check") {
  SIEncoder e = load_pair();
  std::vector<int> xs{1, 0};
  std::vector<int> ws{0, 1};
  // (A,1,u) -> "1" to B, then (B,0,v) -> "0" stays B.
  EncodeTrace t = si_encode(e, 0, xs, ws);
  CHECK(t.concatenated == "10");
  CHECK(t.final_state == 1);

  ILVerdict v = check_il_si(e, 4);
  CHECK(v.il_up_to_depth);
  CHECK(v.checked_depth == 4);

  // Merge the two outputs under side symbol u at state A: now inputs 0 and 1
  // collide on every side word starting with u once they meet again in A.
  SIEncoder bad = e;
  bad.output[bad.cell(0, 1, 0)] = Codeword{"0"};
  bad.next[bad.cell(0, 1, 0)] = 0;
  ILVerdict w = check_il_si(bad, 4);
  REQUIRE(w.witness.has_value());
  CHECK(w.checked_depth == 1);
  CHECK(w.witness->si_word == std::vector<int>{0});
  CHECK(w.witness->first == std::vector<int>{0});
  CHECK(w.witness->second == std::vector<int>{1});
}

TEST_CASE("family products multiply left to right") {
  std::vector<Mat> fam = eps_family(0.5);
  std::vector<int> ab{0, 1};
  Mat prod = family_product(fam, ab);
  // A B with eps = 1/2: [[1/2,2],[0,1/2]] [[1/2,0],[2,1/2]] = [[17/4,1],[1,1/4]].
  CHECK(prod(0, 0) == doctest::Approx(4.25));
  CHECK(prod(0, 1) == doctest::Approx(1.0));
  CHECK(prod(1, 0) == doctest::Approx(1.0));
  CHECK(prod(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("jsr bracket on the eps family") {
  double eps = 0.1;
  std::vector<Mat> fam = eps_family(eps);
  // Triangular, so only the norm-based estimate applies; the huge
  // off-diagonal entry needs a tight tolerance to wash out.
  CHECK(spectral_radius(fam[0], 1e-13).rho ==
        doctest::Approx(eps).epsilon(1e-12));
  CHECK(spectral_radius(fam[1], 1e-13).rho ==
        doctest::Approx(eps).epsilon(1e-12));

  double e2 = eps * eps;
  double rho_ab = e2 + 1.0 / (2.0 * e2) +
                  std::sqrt(1.0 + 1.0 / (4.0 * e2 * e2));
  JSRBracket br = jsr_bracket(fam, 6);
  CHECK(br.lower >= std::sqrt(rho_ab) * (1.0 - 1e-9));
  CHECK(br.lower > 1.0);
  CHECK(br.upper >= br.lower * (1.0 - 1e-9));
  CHECK(br.exhaustive_depth == 6);
  CHECK_FALSE(br.sampled);

  // No sub-invariant vector exists: products grow without bound.
  SubinvariantResult sub = find_subinvariant_vector(fam);
  CHECK_FALSE(sub.found);
}

TEST_CASE("jsr bracket for a single matrix collapses to its radius") {
  Mat m(2);
  m(0, 0) = 0.5;
  m(0, 1) = 0.25;
  m(1, 0) = 0.25;
  m(1, 1) = 0.5;  // symmetric, rho = 0.75
  JSRBracket br = jsr_bracket(std::vector<Mat>{m}, 8);
  CHECK(br.lower == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(br.upper >= 0.75 - 1e-9);
  CHECK(br.upper <= 1.0);
}

TEST_CASE("sampling kicks in when the budget stops exhaustive search") {
  std::vector<Mat> fam = eps_family(0.1);
  Budget small;
  small.max_strings = 40;  // levels 2 + 4 + 8 + 16 fit, 32 does not
  JSRBracket br = jsr_bracket(fam, 12, 1, small);
  CHECK(br.exhaustive_depth < 12);
  CHECK(br.sampled);
  CHECK(br.sample_count > 0);
  CHECK(br.lower > 1.0);
}
