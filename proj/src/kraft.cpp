#include "kraftlab/kraft.hpp"

#include <cmath>

#include "kraftlab/errors.hpp"
#include "kraftlab/linalg.hpp"

namespace kraftlab {

namespace {

int ceil_log2(const mpz_class& v) {
  // smallest t with 2^t >= v
  if (v <= 1) return 0;
  mpz_class w = v - 1;
  return static_cast<int>(mpz_sizeinbase(w.get_mpz_t(), 2));
}

std::uint64_t checked_word_count(int alphabet_size, int n,
                                 std::uint64_t per_word_cost,
                                 const Budget& budget) {
  std::uint64_t words = 1;
  for (int i = 0; i < n; ++i) {
    if (words > budget.max_strings / static_cast<std::uint64_t>(alphabet_size))
      throw BudgetExceeded("word enumeration exceeds the string budget");
    words *= static_cast<std::uint64_t>(alphabet_size);
  }
  if (per_word_cost > 0 && words > budget.max_strings / per_word_cost)
    throw BudgetExceeded("word enumeration exceeds the string budget");
  return words;
}

// 1 + log2(1 + 2^t) without overflowing for large t.
double one_plus_log2_one_plus_exp2(double t) {
  if (t > 512.0) return 1.0 + t;
  return 1.0 + std::log2(1.0 + std::exp2(t));
}

}  // namespace

DyadicMatrix kraft_matrix(const Encoder& e) {
  e.validate();
  DyadicMatrix k(e.num_states);
  for (int z = 0; z < e.num_states; ++z)
    for (int x = 0; x < e.alphabet_size; ++x)
      k.at(z, e.step(z, x)) +=
          Dyadic::half_pow(static_cast<std::uint64_t>(e.out(z, x).length()));
  return k;
}

bool block_kraft_consistency(const Encoder& e, int ell, const Budget& budget) {
  if (ell < 1) throw DomainError("block_kraft_consistency: ell must be >= 1");
  std::uint64_t words = checked_word_count(
      e.alphabet_size, ell, static_cast<std::uint64_t>(e.num_states), budget);
  DyadicMatrix direct(e.num_states);
  // One transition of the block view per (state, word) pair.
  for (int z = 0; z < e.num_states; ++z) {
    for (std::uint64_t w = 0; w < words; ++w) {
      int cur = z;
      long long bits = 0;
      std::uint64_t rest = w;
      // big-endian digit order; the digit weight walks down from alpha^(l-1)
      std::uint64_t weight = words / e.alphabet_size;
      for (int i = 0; i < ell; ++i) {
        int x = static_cast<int>(rest / weight);
        rest %= weight;
        weight = weight == 1 ? 1 : weight / e.alphabet_size;
        bits += e.out(cur, x).length();
        cur = e.step(cur, x);
      }
      direct.at(z, cur) +=
          Dyadic::half_pow(static_cast<std::uint64_t>(bits));
    }
  }
  return direct == matrix_power(kraft_matrix(e),
                                static_cast<std::uint64_t>(ell), budget);
}

GKIReport gki_check(const Encoder& e, std::span<const int> ells,
                    const Budget& budget) {
  e.validate();
  DyadicMatrix k = kraft_matrix(e);
  int s = e.num_states;
  int l_max = e.l_max();
  bool irreducible = is_irreducible(e);
  SpectralReport spectral = spectral_radius(k);

  GKIReport report;
  report.context = {
      {"states", s},
      {"alphabet", e.alphabet_size},
      {"l_max", l_max},
      {"irreducible", irreducible},
      {"spectral", {{"rho", format_double(spectral.rho)},
                    {"method", spectral_method_name(spectral.method)},
                    {"iterations", spectral.iterations},
                    {"residual", format_double(spectral.residual)}}}};

  report.records.push_back(make_float_record("spectral_radius_le_one",
                                             std::nullopt, spectral.rho, 1.0));

  for (int ell : ells) {
    if (ell < 1) throw DomainError("gki_check: ell must be >= 1");
    DyadicMatrix kl = matrix_power(k, static_cast<std::uint64_t>(ell), budget);
    mpz_class affine = 1 + mpz_class(ell) * l_max;

    Dyadic max_entry = kl.max_entry();
    // first maximal entry in row-major order
    int max_row = 0, max_col = 0;
    bool found = false;
    for (int i = 0; i < s && !found; ++i)
      for (int j = 0; j < s && !found; ++j)
        if (kl.at(i, j) == max_entry) {
          max_row = i;
          max_col = j;
          found = true;
        }

    std::vector<Dyadic> rows = kl.row_sums();
    int arg_max_row = 0, arg_min_row = 0;
    for (int i = 1; i < s; ++i) {
      if (rows[i] > rows[arg_max_row]) arg_max_row = i;
      if (rows[i] < rows[arg_min_row]) arg_min_row = i;
    }

    InequalityRecord entry_rec = make_exact_record(
        "power_entry_le_one_plus_ell_lmax", ell, max_entry, Dyadic(affine));
    entry_rec.witness = {{"from_state", e.state_names.empty()
                              ? std::to_string(max_row)
                              : e.state_names[max_row]},
                         {"to_state", e.state_names.empty()
                              ? std::to_string(max_col)
                              : e.state_names[max_col]}};
    report.records.push_back(std::move(entry_rec));

    InequalityRecord row_rec = make_exact_record(
        "power_row_sum_le_s_times_one_plus_ell_lmax", ell, rows[arg_max_row],
        Dyadic(mpz_class(s) * affine));
    row_rec.witness = {{"state", e.state_names.empty()
                            ? std::to_string(arg_max_row)
                            : e.state_names[arg_max_row]}};
    report.records.push_back(std::move(row_rec));

    report.records.push_back(make_float_record(
        "power_entry_le_one_plus_log2_one_plus_alpha_pow_ell", ell,
        max_entry.to_double(),
        one_plus_log2_one_plus_exp2(
            static_cast<double>(ell) *
            std::log2(static_cast<double>(e.alphabet_size)))));

    if (irreducible) {
      InequalityRecord min_rec = make_exact_record(
          "min_row_sum_le_one", ell, rows[arg_min_row], Dyadic(1ul));
      min_rec.witness = {{"state", e.state_names.empty()
                              ? std::to_string(arg_min_row)
                              : e.state_names[arg_min_row]}};
      report.records.push_back(std::move(min_rec));

      Dyadic uniform = Dyadic::pow2(
          static_cast<std::uint64_t>(s - 1) *
          static_cast<std::uint64_t>(l_max));
      report.records.push_back(make_exact_record(
          "power_entry_le_pow2_s_minus_one_lmax", ell, max_entry, uniform));
      report.records.push_back(make_exact_record(
          "power_row_sum_le_s_pow2_s_minus_one_lmax", ell, rows[arg_max_row],
          Dyadic(mpz_class(s)) * uniform));
      report.records.push_back(make_exact_record(
          "power_total_sum_le_s_sq_pow2_s_minus_one_lmax", ell,
          kl.total_sum(), Dyadic(mpz_class(s) * s) * uniform));
    }
  }
  return report;
}

double zl_baseline(long long num_states, long long alphabet_size, int ell) {
  if (num_states < 1 || alphabet_size < 1 || ell < 1)
    throw DomainError("zl_baseline: arguments must be positive");
  double s2 = static_cast<double>(num_states) * num_states;
  double t = static_cast<double>(ell) *
                 std::log2(static_cast<double>(alphabet_size)) -
             std::log2(s2);
  return s2 * one_plus_log2_one_plus_exp2(t);
}

Dyadic min_state_kraft_sum(const Encoder& e, int ell, const Budget& budget) {
  if (ell < 1) throw DomainError("min_state_kraft_sum: ell must be >= 1");
  e.validate();
  std::uint64_t words = checked_word_count(
      e.alphabet_size, ell, static_cast<std::uint64_t>(e.num_states), budget);
  Dyadic sum;
  std::vector<int> word(ell, 0);
  for (std::uint64_t w = 0; w < words; ++w) {
    std::uint64_t rest = w;
    for (int i = ell - 1; i >= 0; --i) {
      word[i] = static_cast<int>(rest % e.alphabet_size);
      rest /= e.alphabet_size;
    }
    long long best = -1;
    for (int z = 0; z < e.num_states; ++z) {
      long long bits = 0;
      int cur = z;
      for (int x : word) {
        bits += e.out(cur, x).length();
        cur = e.step(cur, x);
      }
      if (best < 0 || bits < best) best = bits;
    }
    sum += Dyadic::half_pow(static_cast<std::uint64_t>(best));
  }
  return sum;
}

PrefixRepair prefix_repair_lengths(const Encoder& e, int start_state, int n,
                                   const Budget& budget) {
  if (n < 1) throw DomainError("prefix_repair_lengths: n must be >= 1");
  e.validate();
  if (start_state < 0 || start_state >= e.num_states)
    throw DomainError("prefix_repair_lengths: start state out of range");
  std::uint64_t words = checked_word_count(e.alphabet_size, n, 1, budget);
  mpz_class count_bound = mpz_class(e.num_states) *
                          (1 + mpz_class(n) * e.l_max());
  PrefixRepair repair;
  repair.pad_bits = ceil_log2(count_bound) + ceil_log2(mpz_class(e.num_states));
  repair.lengths.resize(words);
  std::vector<int> word(n, 0);
  for (std::uint64_t w = 0; w < words; ++w) {
    std::uint64_t rest = w;
    for (int i = n - 1; i >= 0; --i) {
      word[i] = static_cast<int>(rest % e.alphabet_size);
      rest /= e.alphabet_size;
    }
    long long bits = 0;
    int cur = start_state;
    for (int x : word) {
      bits += e.out(cur, x).length();
      cur = e.step(cur, x);
    }
    repair.lengths[w] = bits + repair.pad_bits;
    repair.kraft_sum +=
        Dyadic::half_pow(static_cast<std::uint64_t>(repair.lengths[w]));
  }
  repair.within_one = repair.kraft_sum <= Dyadic(1ul);
  return repair;
}

}  // namespace kraftlab
