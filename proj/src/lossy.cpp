#include "kraftlab/lossy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kraftlab/errors.hpp"
#include "kraftlab/kraft.hpp"
#include "kraftlab/linalg.hpp"

namespace kraftlab {

namespace {

constexpr double kDistortionSlack = 1e-9;

std::uint64_t checked_pow_u64(int base, int exp, const Budget& budget,
                              const char* who) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > budget.max_strings / static_cast<std::uint64_t>(base))
      throw BudgetExceeded(std::string(who) +
                           ": block enumeration exceeds the string budget");
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

void unrank(std::uint64_t rank, int base, int len, std::vector<int>& out) {
  out.resize(len);
  for (int i = len - 1; i >= 0; --i) {
    out[i] = static_cast<int>(rank % static_cast<std::uint64_t>(base));
    rank /= static_cast<std::uint64_t>(base);
  }
}

}  // namespace

Distortion Distortion::hamming(int alphabet_size) {
  Distortion d;
  d.source_size = alphabet_size;
  d.repro_size = alphabet_size;
  d.d.assign(static_cast<std::size_t>(alphabet_size) * alphabet_size, 1.0);
  for (int x = 0; x < alphabet_size; ++x) {
    d.d[static_cast<std::size_t>(x) * alphabet_size + x] = 0.0;
    d.source_names.push_back(std::to_string(x));
  }
  d.repro_names = d.source_names;
  return d;
}

double Distortion::min_value() const {
  return *std::min_element(d.begin(), d.end());
}

double Distortion::max_value() const {
  return *std::max_element(d.begin(), d.end());
}

bool Distortion::integral() const {
  for (double v : d)
    if (std::abs(v - std::round(v)) > 1e-12) return false;
  return true;
}

bool Distortion::balanced() const {
  std::vector<double> ref;
  for (int x = 0; x < source_size; ++x) ref.push_back(at(x, 0));
  std::sort(ref.begin(), ref.end());
  for (int xhat = 1; xhat < repro_size; ++xhat) {
    std::vector<double> col;
    for (int x = 0; x < source_size; ++x) col.push_back(at(x, xhat));
    std::sort(col.begin(), col.end());
    if (col != ref) return false;
  }
  return true;
}

void Distortion::validate() const {
  if (source_size <= 0 || repro_size <= 0)
    throw DomainError("distortion: empty alphabet");
  if (d.size() != static_cast<std::size_t>(source_size) * repro_size)
    throw DomainError("distortion: table must be source x reproduction");
  for (double v : d)
    if (v < 0.0 || !std::isfinite(v))
      throw DomainError("distortion: values must be finite and >= 0");
}

std::uint64_t ball_size_enumerate(const Distortion& d,
                                  std::span<const int> repro_word, double D,
                                  const Budget& budget) {
  d.validate();
  int ell = static_cast<int>(repro_word.size());
  if (ell < 1) throw DomainError("ball_size: empty reproduction word");
  for (int xhat : repro_word)
    if (xhat < 0 || xhat >= d.repro_size)
      throw DomainError("ball_size: reproduction symbol out of range");
  std::uint64_t words =
      checked_pow_u64(d.source_size, ell, budget, "ball_size");
  double threshold = static_cast<double>(ell) * D + kDistortionSlack;
  std::uint64_t count = 0;
  std::vector<int> x;
  for (std::uint64_t r = 0; r < words; ++r) {
    unrank(r, d.source_size, ell, x);
    double total = 0.0;
    for (int i = 0; i < ell; ++i) total += d.at(x[i], repro_word[i]);
    if (total <= threshold) ++count;
  }
  return count;
}

std::uint64_t ball_size_dp(const Distortion& d,
                           std::span<const int> repro_word, double D) {
  d.validate();
  if (!d.integral())
    throw DomainError("ball_size_dp: distortion table must be integral");
  int ell = static_cast<int>(repro_word.size());
  if (ell < 1) throw DomainError("ball_size: empty reproduction word");
  double raw = static_cast<double>(ell) * D + kDistortionSlack;
  long long cap = static_cast<long long>(std::floor(raw));
  if (cap < 0) return 0;
  // dp[c]: words so far with cumulative distortion exactly c
  std::vector<std::uint64_t> dp(static_cast<std::size_t>(cap) + 1, 0);
  dp[0] = 1;
  for (int i = 0; i < ell; ++i) {
    int xhat = repro_word[i];
    if (xhat < 0 || xhat >= d.repro_size)
      throw DomainError("ball_size: reproduction symbol out of range");
    std::vector<std::uint64_t> next(dp.size(), 0);
    for (int x = 0; x < d.source_size; ++x) {
      long long step = static_cast<long long>(std::llround(d.at(x, xhat)));
      for (long long c = 0; c + step <= cap; ++c)
        next[static_cast<std::size_t>(c + step)] += dp[static_cast<std::size_t>(c)];
    }
    dp = std::move(next);
  }
  std::uint64_t total = 0;
  for (std::uint64_t v : dp) total += v;
  return total;
}

std::uint64_t ball_size(const Distortion& d, std::span<const int> repro_word,
                        double D, const Budget& budget) {
  if (d.integral()) return ball_size_dp(d, repro_word, D);
  return ball_size_enumerate(d, repro_word, D, budget);
}

std::uint64_t b_ell(const Distortion& d, int ell, double D,
                    const Budget& budget) {
  d.validate();
  if (ell < 1) throw DomainError("b_ell: ell must be >= 1");
  if (d.balanced()) {
    // every center word spans a ball of the same size
    std::vector<int> word(ell, 0);
    return ball_size(d, word, D, budget);
  }
  std::uint64_t words = checked_pow_u64(d.repro_size, ell, budget, "b_ell");
  std::uint64_t best = 0;
  std::vector<int> word;
  for (std::uint64_t r = 0; r < words; ++r) {
    unrank(r, d.repro_size, ell, word);
    best = std::max(best, ball_size(d, word, D, budget));
  }
  return best;
}

std::uint64_t Quantizer::source_blocks() const {
  std::uint64_t v = 1;
  for (int i = 0; i < ell; ++i) v *= static_cast<std::uint64_t>(source_size);
  return v;
}

std::uint64_t Quantizer::repro_blocks() const {
  std::uint64_t v = 1;
  for (int i = 0; i < ell; ++i) v *= static_cast<std::uint64_t>(repro_size);
  return v;
}

void Quantizer::validate() const {
  if (ell < 1) throw DomainError("quantizer: ell must be >= 1");
  if (source_size <= 0 || repro_size <= 0)
    throw DomainError("quantizer: empty alphabet");
  if (D < 0.0 || !std::isfinite(D))
    throw DomainError("quantizer: D must be finite and >= 0");
  if (static_cast<double>(ell) * std::log2(static_cast<double>(source_size)) >
          62.0 ||
      static_cast<double>(ell) * std::log2(static_cast<double>(repro_size)) >
          62.0)
    throw DomainError("quantizer: block space too large to rank");
  if (map.size() != source_blocks())
    throw DomainError("quantizer: map must cover every source block");
  std::uint64_t repro = repro_blocks();
  for (std::int64_t v : map)
    if (v < 0 || static_cast<std::uint64_t>(v) >= repro)
      throw DomainError("quantizer: mapped block out of range");
}

double quantizer_max_distortion(const Quantizer& q, const Distortion& d,
                                const Budget& budget) {
  q.validate();
  d.validate();
  if (d.source_size != q.source_size || d.repro_size != q.repro_size)
    throw DomainError("quantizer/distortion alphabet mismatch");
  std::uint64_t words =
      checked_pow_u64(q.source_size, q.ell, budget, "quantizer");
  double worst = 0.0;
  std::vector<int> x, xhat;
  for (std::uint64_t r = 0; r < words; ++r) {
    unrank(r, q.source_size, q.ell, x);
    unrank(static_cast<std::uint64_t>(q.map[r]), q.repro_size, q.ell, xhat);
    double total = 0.0;
    for (int i = 0; i < q.ell; ++i) total += d.at(x[i], xhat[i]);
    worst = std::max(worst, total);
  }
  return worst / static_cast<double>(q.ell);
}

Quantizer quantizer_nearest_codeword(
    const Distortion& d, int ell,
    const std::vector<std::vector<int>>& codebook, const Budget& budget) {
  d.validate();
  if (ell < 1) throw DomainError("quantizer: ell must be >= 1");
  if (codebook.empty()) throw DomainError("quantizer: empty codebook");
  for (const std::vector<int>& word : codebook) {
    if (static_cast<int>(word.size()) != ell)
      throw DomainError("quantizer: codebook word length mismatch");
    for (int xhat : word)
      if (xhat < 0 || xhat >= d.repro_size)
        throw DomainError("quantizer: codebook symbol out of range");
  }
  Quantizer q;
  q.ell = ell;
  q.source_size = d.source_size;
  q.repro_size = d.repro_size;
  std::uint64_t words = checked_pow_u64(d.source_size, ell, budget,
                                        "quantizer");
  q.map.resize(words);
  double worst = 0.0;
  std::vector<int> x;
  for (std::uint64_t r = 0; r < words; ++r) {
    unrank(r, d.source_size, ell, x);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t c = 0; c < codebook.size(); ++c) {
      double total = 0.0;
      for (int i = 0; i < ell; ++i) total += d.at(x[i], codebook[c][i]);
      if (total < best) {
        best = total;
        best_idx = c;
      }
    }
    std::uint64_t rank = 0;
    for (int i = 0; i < ell; ++i)
      rank = rank * static_cast<std::uint64_t>(d.repro_size) +
             static_cast<std::uint64_t>(codebook[best_idx][i]);
    q.map[r] = static_cast<std::int64_t>(rank);
    worst = std::max(worst, best);
  }
  q.D = worst / static_cast<double>(ell);
  q.validate();
  return q;
}

LossyKraft lossy_kraft_matrix(const Quantizer& q, const Encoder& repro_coder,
                              const Distortion& d, const Budget& budget) {
  q.validate();
  d.validate();
  repro_coder.validate();
  if (d.source_size != q.source_size || d.repro_size != q.repro_size)
    throw DomainError("quantizer/distortion alphabet mismatch");
  std::uint64_t repro = q.repro_blocks();
  if (static_cast<std::uint64_t>(repro_coder.alphabet_size) != repro)
    throw DomainError(
        "reproduction coder must consume one reproduction block per symbol");
  double worst = quantizer_max_distortion(q, d, budget);
  if (worst > q.D + kDistortionSlack)
    throw DomainError("quantizer exceeds its declared distortion level");

  LossyKraft result;
  result.k_hat = kraft_matrix(repro_coder);
  result.ball_bound = b_ell(d, q.ell, q.D, budget);

  // Pull Kraft weights back through the quantizer: each source block costs
  // what its reproduction block costs.
  DyadicMatrix k(repro_coder.num_states);
  for (int z = 0; z < repro_coder.num_states; ++z)
    for (std::uint64_t r = 0; r < q.source_blocks(); ++r) {
      int sym = static_cast<int>(q.map[r]);
      k.at(z, repro_coder.step(z, sym)) += Dyadic::half_pow(
          static_cast<std::uint64_t>(repro_coder.out(z, sym).length()));
    }
  result.k = std::move(k);

  Dyadic ball(mpz_class(static_cast<unsigned long>(result.ball_bound)));
  result.entrywise_dominated = true;
  for (int i = 0; i < result.k.size(); ++i)
    for (int j = 0; j < result.k.size(); ++j)
      if (result.k.at(i, j) > ball * result.k_hat.at(i, j)) {
        result.entrywise_dominated = false;
        break;
      }
  return result;
}

namespace {

// Largest H(X | Xhat) for a fixed reproduction marginal: the optimal
// conditional is the tilted P(x | xhat) = exp(-lambda d(x, xhat)) / Z(xhat)
// with lambda chosen so the expected distortion meets D (lambda = 0 once the
// uniform conditional is affordable).
double inner_conditional_entropy(const Distortion& d,
                                 const std::vector<double>& q_marginal,
                                 double D) {
  int m = d.repro_size;
  int a = d.source_size;
  // expected distortion floor: best possible given q
  double floor = 0.0;
  for (int xhat = 0; xhat < m; ++xhat) {
    if (q_marginal[xhat] <= 0.0) continue;
    double best = std::numeric_limits<double>::infinity();
    for (int x = 0; x < a; ++x) best = std::min(best, d.at(x, xhat));
    floor += q_marginal[xhat] * best;
  }
  if (floor > D + 1e-12) return -std::numeric_limits<double>::infinity();

  auto stats = [&](double lambda, double& h_bits) {
    double expected = 0.0;
    h_bits = 0.0;
    for (int xhat = 0; xhat < m; ++xhat) {
      if (q_marginal[xhat] <= 0.0) continue;
      double zmax = -std::numeric_limits<double>::infinity();
      for (int x = 0; x < a; ++x)
        zmax = std::max(zmax, -lambda * d.at(x, xhat));
      double z = 0.0, ed = 0.0;
      for (int x = 0; x < a; ++x) {
        double wgt = std::exp(-lambda * d.at(x, xhat) - zmax);
        z += wgt;
        ed += wgt * d.at(x, xhat);
      }
      ed /= z;
      double h = 0.0;
      for (int x = 0; x < a; ++x) {
        double p = std::exp(-lambda * d.at(x, xhat) - zmax) / z;
        if (p > 0.0) h -= p * std::log2(p);
      }
      expected += q_marginal[xhat] * ed;
      h_bits += q_marginal[xhat] * h;
    }
    return expected;
  };

  double h0;
  if (stats(0.0, h0) <= D + 1e-12) return h0;  // uniform conditional fits

  double lo = 0.0, hi = 1.0, h_hi;
  while (stats(hi, h_hi) > D && hi < 1e9) hi *= 2.0;
  if (hi >= 1e9) {
    // effectively the argmin conditional; entropy counts distortion ties
    double h = 0.0;
    for (int xhat = 0; xhat < m; ++xhat) {
      if (q_marginal[xhat] <= 0.0) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int x = 0; x < a; ++x) best = std::min(best, d.at(x, xhat));
      int ties = 0;
      for (int x = 0; x < a; ++x)
        if (d.at(x, xhat) <= best + 1e-15) ++ties;
      h += q_marginal[xhat] * std::log2(static_cast<double>(ties));
    }
    return h;
  }
  double h_mid = h_hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double ed = stats(mid, h_mid);
    if (ed > D)
      lo = mid;
    else
      hi = mid;
  }
  stats(hi, h_mid);  // the feasible endpoint
  return h_mid;
}

}  // namespace

double phi_of_D(const Distortion& d, double D) {
  d.validate();
  if (D < d.min_value() - 1e-12)
    throw DomainError("phi_of_D: no joint distribution meets this D");
  int m = d.repro_size;
  if (m == 0) throw DomainError("phi_of_D: empty reproduction alphabet");

  auto eval = [&](const std::vector<double>& q) {
    return inner_conditional_entropy(d, q, D);
  };

  // Coarse simplex grid, then pattern search along coordinate pairs. The
  // objective is concave in q, so the local refinement cannot stall at a
  // non-global optimum once the grid lands in its basin.
  int grid;
  if (m <= 2)
    grid = 200;
  else if (m == 3)
    grid = 40;
  else if (m == 4)
    grid = 16;
  else
    grid = 8;

  std::vector<double> best_q(m, 1.0 / m);
  double best = eval(best_q);
  std::vector<int> parts(m, 0);
  // enumerate compositions of `grid` into m parts
  std::vector<double> q(m);
  auto visit = [&](auto&& self, int idx, int remaining) -> void {
    if (idx == m - 1) {
      parts[idx] = remaining;
      for (int i = 0; i < m; ++i)
        q[i] = static_cast<double>(parts[i]) / grid;
      double v = eval(q);
      if (v > best) {
        best = v;
        best_q = q;
      }
      return;
    }
    for (int take = 0; take <= remaining; ++take) {
      parts[idx] = take;
      self(self, idx + 1, remaining - take);
    }
  };
  visit(visit, 0, grid);

  for (double step = 1.0 / grid; step > 1e-7; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          if (i == j) continue;
          if (best_q[j] < step) continue;
          std::vector<double> trial = best_q;
          trial[i] += step;
          trial[j] -= step;
          double v = eval(trial);
          if (v > best + 1e-15) {
            best = v;
            best_q = std::move(trial);
            improved = true;
          }
        }
    }
  }
  return std::max(0.0, best);
}

GKIReport lossy_gki_check(const Quantizer& q, const Encoder& repro_coder,
                          const Distortion& d, const Budget& budget) {
  LossyKraft lk = lossy_kraft_matrix(q, repro_coder, d, budget);
  double rho_hat = spectral_radius(lk.k_hat).rho;
  double rho = spectral_radius(lk.k).rho;
  double phi = phi_of_D(d, q.D);
  double ball = static_cast<double>(lk.ball_bound);

  GKIReport report;
  report.context = {{"ell", q.ell},
                    {"D", format_double(q.D)},
                    {"ball_bound", lk.ball_bound},
                    {"phi", format_double(phi)},
                    {"rho", format_double(rho)},
                    {"rho_reproduction", format_double(rho_hat)}};
  report.records.push_back(make_float_record(
      "reproduction_spectral_radius_le_one", q.ell, rho_hat, 1.0));
  report.records.push_back(make_float_record(
      "spectral_radius_le_ball_bound", q.ell, rho, ball));
  report.records.push_back(make_float_record(
      "log2_ball_bound_le_ell_phi", q.ell,
      ball > 0.0 ? std::log2(ball) : 0.0,
      static_cast<double>(q.ell) * phi));
  InequalityRecord dom;
  dom.name = "kraft_entrywise_le_ball_times_reproduction";
  dom.ell = q.ell;
  dom.lhs = lk.k.max_entry();
  dom.rhs = Dyadic(mpz_class(static_cast<unsigned long>(lk.ball_bound))) *
            lk.k_hat.max_entry();
  dom.holds = lk.entrywise_dominated;
  dom.regime = "exact";
  report.records.push_back(std::move(dom));
  return report;
}

}  // namespace kraftlab
