#include <doctest.h>

#include <string>
#include <vector>

#include "kraftlab/io.hpp"
#include "kraftlab/kraft.hpp"
#include "kraftlab/linalg.hpp"

using namespace kraftlab;

namespace {

Encoder load(const char* name) {
  return parse_encoder(load_json(std::string(KRAFTLAB_DATA_DIR) + "/" + name));
}

Dyadic frac(unsigned long num, std::uint64_t pow) {
  return Dyadic::from_mantissa_exp(mpz_class(num), pow);
}

}  // namespace

TEST_CASE("three-state block coder Kraft matrix is exact") {
  Encoder e = load("example1.json");
  DyadicMatrix k = kraft_matrix(e);
  CHECK(k.at(0, 0).is_zero());
  CHECK(k.at(0, 1) == Dyadic(1));
  CHECK(k.at(0, 2) == frac(1, 2));
  CHECK(k.at(1, 0) == frac(3, 2));
  CHECK(k.at(1, 1).is_zero());
  CHECK(k.at(2, 0) == Dyadic(1));

  std::vector<Dyadic> rows = k.row_sums();
  CHECK(rows[0] == frac(5, 2));
  CHECK(rows[1] == frac(3, 2));
  CHECK(rows[2] == Dyadic(1));

  DyadicMatrix sq = k * k;
  CHECK(sq.at(0, 0) == Dyadic(1));
  CHECK(sq.at(1, 1) == frac(3, 2));
  CHECK(sq.at(1, 2) == frac(3, 4));
  CHECK(sq.at(2, 1) == Dyadic(1));
  CHECK(sq.at(2, 2) == frac(1, 2));
  CHECK(sq.at(0, 1).is_zero());
  // K^3 = K, so every even power equals K^2.
  CHECK(matrix_power(k, 3) == k);
  CHECK(matrix_power(k, 100) == sq);
}

TEST_CASE("spectral radius of the block coder is exactly critical") {
  Encoder e = load("example1.json");
  SpectralReport rep = spectral_radius(kraft_matrix(e));
  CHECK(rep.rho == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.residual <= 1e-6);
}

TEST_CASE("block view powers match direct enumeration") {
  Encoder e = load("example1.json");
  for (int ell : {1, 2, 3, 5}) CHECK(block_kraft_consistency(e, ell));
  Encoder n = load("nonil2.json");
  for (int ell : {1, 2, 4}) CHECK(block_kraft_consistency(n, ell));
}

TEST_CASE("gki report covers the irreducible record set") {
  Encoder e = load("example1.json");
  std::vector<int> ells{1, 2, 5};
  GKIReport rep = gki_check(e, ells);
  CHECK(rep.all_hold());
  CHECK(rep.context.at("irreducible").get<bool>());

  std::vector<std::string> names;
  for (const InequalityRecord& r : rep.records) names.push_back(r.name);
  auto has = [&](const char* n) {
    for (const std::string& s : names)
      if (s == n) return true;
    return false;
  };
  CHECK(has("spectral_radius_le_one"));
  CHECK(has("power_entry_le_one_plus_ell_lmax"));
  CHECK(has("power_row_sum_le_s_times_one_plus_ell_lmax"));
  CHECK(has("power_entry_le_one_plus_log2_one_plus_alpha_pow_ell"));
  CHECK(has("min_row_sum_le_one"));
  CHECK(has("power_entry_le_pow2_s_minus_one_lmax"));
  CHECK(has("power_row_sum_le_s_pow2_s_minus_one_lmax"));
  CHECK(has("power_total_sum_le_s_sq_pow2_s_minus_one_lmax"));

  // Row S exceeds 1, yet some state always stays within it; at ell = 1 the
  // smallest sum is row O's 3/4.
  for (const InequalityRecord& r : rep.records)
    if (r.name == "min_row_sum_le_one") {
      CHECK(r.holds);
      CHECK(std::get<Dyadic>(r.lhs) <= Dyadic(1));
      if (r.ell == 1)
        CHECK(std::get<Dyadic>(r.lhs) ==
              Dyadic::from_mantissa_exp(mpz_class(3), 2));
    }
}

TEST_CASE("gki report on a non-IL encoder still holds") {
  // rho(K) <= 1 is necessary, not sufficient: this encoder passes every
  // inequality yet collides at depth 2.
  Encoder e = load("nonil2.json");
  std::vector<int> ells{1, 3};
  GKIReport rep = gki_check(e, ells);
  CHECK(rep.all_hold());
  ILVerdict v = check_il(e, 3);
  CHECK_FALSE(v.il_up_to_depth);
}

TEST_CASE("state-oblivious baseline values") {
  CHECK(zl_baseline(1, 2, 1) == doctest::Approx(2.584962500721).epsilon(1e-12));
  // 9 (1 + log2(13/9))
  CHECK(zl_baseline(3, 2, 2) == doctest::Approx(13.77463245028902).epsilon(1e-12));
  // Large ell: the log term dominates, slope log2(alpha) per step.
  double a = zl_baseline(2, 2, 30);
  double b = zl_baseline(2, 2, 31);
  CHECK(b - a == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("minimum-over-states Kraft sum stays under the baseline") {
  Encoder e = load("example1.json");
  for (int ell = 1; ell <= 8; ++ell) {
    Dyadic sum = min_state_kraft_sum(e, ell);
    double baseline = zl_baseline(e.num_states, e.alphabet_size, ell);
    CHECK(sum.to_double() < baseline);
  }
  // ell = 1: best lengths are 0 (from S) and 1 (from I), sum 1 + 1/2.
  CHECK(min_state_kraft_sum(e, 1) ==
        Dyadic::from_mantissa_exp(mpz_class(3), 1));
}

TEST_CASE("padded lengths satisfy the unit Kraft inequality") {
  Encoder e = load("example1.json");
  for (int n : {1, 2, 3, 6}) {
    PrefixRepair rep = prefix_repair_lengths(e, e.initial_state, n);
    CHECK(rep.within_one);
    CHECK(rep.kraft_sum <= Dyadic(1));
    CHECK(static_cast<int>(rep.lengths.size()) == (1 << n));
    // pad = ceil(log2(s(1 + n l_max))) + ceil(log2 s) with s = 3, l_max = 2.
    int expect = 0;
    long long cap = 3 * (1 + 2LL * n);
    while ((1LL << expect) < cap) ++expect;
    CHECK(rep.pad_bits == expect + 2);
  }
}
