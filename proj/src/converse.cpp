#include "kraftlab/converse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kraftlab/errors.hpp"

namespace kraftlab {

namespace {

std::uint64_t checked_pow(int base, int exp, const char* who) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(base))
      throw DomainError(std::string(who) + ": alphabet^ell overflows");
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

}  // namespace

std::map<std::uint64_t, long long> EmpiricalDist::window_marginal() const {
  std::map<std::uint64_t, long long> m;
  for (const auto& [key, cnt] : counts) m[key.second] += cnt;
  return m;
}

std::map<std::uint64_t, long long> EmpiricalDist::prefix_marginal() const {
  std::uint64_t mod = checked_pow(alphabet_size, ell - 1, "prefix_marginal");
  std::map<std::uint64_t, long long> m;
  for (const auto& [key, cnt] : counts) m[key.second % mod] += cnt;
  return m;
}

std::map<std::uint64_t, long long> EmpiricalDist::suffix_marginal() const {
  std::map<std::uint64_t, long long> m;
  for (const auto& [key, cnt] : counts)
    m[key.second / static_cast<std::uint64_t>(alphabet_size)] += cnt;
  return m;
}

bool EmpiricalDist::shift_invariant() const {
  if (ell < 2) return true;
  return prefix_marginal() == suffix_marginal();
}

EmpiricalDist empirical_joint(const Encoder& e, int start_state,
                              std::span<const int> xs, int ell) {
  if (ell < 1) throw DomainError("empirical_joint: ell must be >= 1");
  if (xs.empty()) throw DomainError("empirical_joint: empty sequence");
  checked_pow(e.alphabet_size, ell, "empirical_joint");
  CyclicExtension ext = cyclic_extend(e, start_state, xs);
  const std::vector<int>& seq = ext.extended;
  long long n = static_cast<long long>(seq.size());
  EncodeTrace trace = encode(e, start_state, seq);

  EmpiricalDist dist;
  dist.ell = ell;
  dist.alphabet_size = e.alphabet_size;
  dist.num_states = e.num_states;
  dist.n_original = static_cast<long long>(xs.size());
  dist.n_extended = n;
  for (long long i = 0; i < n; ++i) {
    std::uint64_t packed = 0;
    std::uint64_t weight = 1;
    for (int j = 0; j < ell; ++j) {
      packed += static_cast<std::uint64_t>(seq[(i + j) % n]) * weight;
      weight *= static_cast<std::uint64_t>(e.alphabet_size);
    }
    ++dist.counts[{trace.states[i], packed}];
  }
  return dist;
}

EmpiricalDist empirical_window_dist(std::span<const int> xs,
                                    int alphabet_size, int ell) {
  if (ell < 1) throw DomainError("empirical_window_dist: ell must be >= 1");
  if (alphabet_size < 1)
    throw DomainError("empirical_window_dist: alphabet must be >= 1");
  if (xs.empty()) throw DomainError("empirical_window_dist: empty sequence");
  checked_pow(alphabet_size, ell, "empirical_window_dist");
  long long n = static_cast<long long>(xs.size());
  for (int x : xs)
    if (x < 0 || x >= alphabet_size)
      throw DomainError("empirical_window_dist: symbol out of range");

  EmpiricalDist dist;
  dist.ell = ell;
  dist.alphabet_size = alphabet_size;
  dist.num_states = 1;
  dist.n_original = n;
  dist.n_extended = n;
  for (long long i = 0; i < n; ++i) {
    std::uint64_t packed = 0;
    std::uint64_t weight = 1;
    for (int j = 0; j < ell; ++j) {
      packed += static_cast<std::uint64_t>(xs[(i + j) % n]) * weight;
      weight *= static_cast<std::uint64_t>(alphabet_size);
    }
    ++dist.counts[{0, packed}];
  }
  return dist;
}

double count_entropy(const std::map<std::uint64_t, long long>& counts,
                     long long total) {
  double h = 0.0;
  for (const auto& [_, cnt] : counts) {
    if (cnt == 0) continue;
    double p = static_cast<double>(cnt) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double empirical_cond_entropy(const EmpiricalDist& d) {
  double h_window = count_entropy(d.window_marginal(), d.n_extended);
  if (d.ell == 1) return h_window;
  return h_window - count_entropy(d.prefix_marginal(), d.n_extended);
}

double stochastic_rate_bound(double cond_entropy_bits, int num_states,
                             int l_max, int ell) {
  if (num_states < 1 || ell < 1)
    throw DomainError("stochastic_rate_bound: bad arguments");
  return cond_entropy_bits -
         (2.0 * std::log2(static_cast<double>(num_states)) +
          static_cast<double>(num_states - 1) * l_max) /
             static_cast<double>(ell);
}

RateBoundReport individual_rate_bound(const Encoder& e, int start_state,
                                      std::span<const int> xs,
                                      std::span<const int> ells) {
  if (ells.empty()) throw DomainError("individual_rate_bound: no ells");
  EncodeTrace trace = encode(e, start_state, xs);
  RateBoundReport rep;
  rep.n_original = static_cast<long long>(xs.size());
  rep.rate = static_cast<double>(trace.total_bits) /
             static_cast<double>(xs.size());
  int s = e.num_states;
  int l_max = e.l_max();
  double best = -std::numeric_limits<double>::infinity();
  for (int ell : ells) {
    EmpiricalDist dist = empirical_joint(e, start_state, xs, ell);
    rep.n_extended = dist.n_extended;
    double h = empirical_cond_entropy(dist);
    double term = stochastic_rate_bound(h, s, l_max, ell);
    rep.terms.push_back(RateBoundTerm{ell, h, term});
    if (term > best) {
      best = term;
      rep.best_ell = ell;
    }
  }
  // Undo the cyclic extension: the added symbols cost at most (s-1) l_max
  // output bits, charged back against the original length.
  rep.bound = best - static_cast<double>(s - 1) * l_max /
                         static_cast<double>(rep.n_original);
  rep.holds = rep.bound <= rep.rate + 1e-9 * std::max(1.0, std::abs(rep.rate));
  return rep;
}

Lz78Parse lz78_parse(std::span<const int> xs) {
  Lz78Parse parse;
  // Trie over (node, symbol) edges; node 0 is the root.
  std::map<std::pair<long long, int>, long long> edges;
  long long next_node = 1;
  long long cur = 0;
  std::size_t phrase_start = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto it = edges.find({cur, xs[i]});
    if (it != edges.end()) {
      cur = it->second;
      continue;
    }
    edges[{cur, xs[i]}] = next_node++;
    parse.phrases.emplace_back(phrase_start, i - phrase_start + 1);
    ++parse.c;
    phrase_start = i + 1;
    cur = 0;
  }
  if (phrase_start < xs.size()) {
    // trailing phrase retraces an existing trie path
    parse.phrases.emplace_back(phrase_start, xs.size() - phrase_start);
    parse.last_repeats = true;
  }
  return parse;
}

double default_epsilon(long long n) {
  if (n < 3) throw DomainError("default_epsilon: n must be >= 3");
  double log_n = std::log2(static_cast<double>(n));
  return std::log2(log_n) / log_n;
}

const char* default_epsilon_label() {
  return "log2(log2 n) / log2 n (heuristic)";
}

double lz_rate_bound(long long c, long long n, int ell, int num_states,
                     int l_max, double epsilon) {
  if (c < 1 || n < 1) throw DomainError("lz_rate_bound: bad arguments");
  double parse_entropy = static_cast<double>(c) *
                         std::log2(static_cast<double>(c)) /
                         static_cast<double>(n);
  return stochastic_rate_bound(parse_entropy - epsilon, num_states, l_max,
                               ell);
}

LossFunction LossFunction::hamming(int alphabet_size) {
  LossFunction loss;
  loss.alphabet_size = alphabet_size;
  loss.values.assign(
      static_cast<std::size_t>(alphabet_size) * alphabet_size, 1.0);
  for (int x = 0; x < alphabet_size; ++x)
    loss.values[static_cast<std::size_t>(x) * alphabet_size + x] = 0.0;
  return loss;
}

double LossFunction::max_loss() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

bool LossFunction::balanced() const {
  std::vector<double> ref;
  for (int x = 0; x < alphabet_size; ++x) ref.push_back(loss(x, 0));
  std::sort(ref.begin(), ref.end());
  for (int xhat = 1; xhat < alphabet_size; ++xhat) {
    std::vector<double> col;
    for (int x = 0; x < alphabet_size; ++x) col.push_back(loss(x, xhat));
    std::sort(col.begin(), col.end());
    if (col != ref) return false;
  }
  return true;
}

void LossFunction::validate() const {
  if (alphabet_size <= 0) throw DomainError("loss: empty alphabet");
  if (values.size() !=
      static_cast<std::size_t>(alphabet_size) * alphabet_size)
    throw DomainError("loss: table must be alphabet x alphabet");
  for (double v : values)
    if (v < 0.0 || !std::isfinite(v))
      throw DomainError("loss: values must be finite and >= 0");
}

double partition_function(const LossFunction& loss, double theta) {
  loss.validate();
  if (!(theta > 0.0)) throw DomainError("partition_function: theta must be > 0");
  if (!loss.balanced())
    throw DomainError("partition_function: loss must be balanced");
  double z = 0.0;
  for (int x = 0; x < loss.alphabet_size; ++x)
    z += std::exp(-loss.loss(x, 0) / theta);
  return z;
}

double delta_function(const LossFunction& loss, double rate_bits) {
  loss.validate();
  if (rate_bits < 0.0) throw DomainError("delta_function: rate must be >= 0");
  if (!loss.balanced())
    throw DomainError("delta_function: loss must be balanced");
  double r_nats = rate_bits * std::log(2.0);
  auto objective = [&](double theta) {
    return theta * (r_nats - std::log(partition_function(loss, theta)));
  };
  // Golden-section maximization of a concave objective.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1e-6, b = 1e6;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > 1e-10 * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  double best = std::max(objective(0.5 * (a + b)),
                         std::max(objective(a), objective(b)));
  // Endpoints of the admissible range can dominate when the optimum sits at
  // theta -> 0 or theta -> infinity.
  best = std::max(best, objective(1e-6));
  best = std::max(best, objective(1e6));
  return std::max(0.0, best);
}

void PredictorSpec::validate() const {
  if (num_states <= 0) throw DomainError("predictor needs at least one state");
  if (alphabet_size <= 0)
    throw DomainError("predictor needs a non-empty alphabet");
  std::size_t cells =
      static_cast<std::size_t>(num_states) * alphabet_size;
  if (predict.size() != cells || next.size() != cells)
    throw DomainError("predictor transition tables are not total");
  if (initial_state < 0 || initial_state >= num_states)
    throw DomainError("predictor initial state out of range");
  if (initial_prediction < 0 || initial_prediction >= alphabet_size)
    throw DomainError("predictor initial prediction out of range");
  for (int z : next)
    if (z < 0 || z >= num_states)
      throw DomainError("predictor next-state out of range");
  for (int g : predict)
    if (g < 0 || g >= alphabet_size)
      throw DomainError("predictor prediction out of range");
}

PredictorRun run_predictor(const PredictorSpec& p, const LossFunction& loss,
                           std::span<const int> xs) {
  p.validate();
  loss.validate();
  if (loss.alphabet_size != p.alphabet_size)
    throw DomainError("run_predictor: loss and predictor alphabets differ");
  PredictorRun run;
  run.guesses.reserve(xs.size());
  run.losses.reserve(xs.size());
  int state = p.initial_state;
  int guess = p.initial_prediction;
  for (int x : xs) {
    if (x < 0 || x >= p.alphabet_size)
      throw DomainError("run_predictor: symbol out of range");
    run.guesses.push_back(guess);
    double l = loss.loss(x, guess);
    run.losses.push_back(l);
    run.total_loss += l;
    guess = p.guess(state, x);
    state = p.step(state, x);
  }
  run.average_loss =
      xs.empty() ? 0.0 : run.total_loss / static_cast<double>(xs.size());
  return run;
}

PredictionBound prediction_lower_bound(const LossFunction& loss,
                                       double cond_entropy_bits,
                                       long long predictor_states, int k,
                                       int ell, long long n, int l_max,
                                       int alphabet_size) {
  if (predictor_states < 1 || k < 1 || ell < 1 || n < 1)
    throw DomainError("prediction_lower_bound: bad arguments");
  // M_k = (alpha^k - 1) / (alpha - 1): phase states of the k-block tree.
  double mk;
  if (alphabet_size == 1) {
    mk = static_cast<double>(k);
  } else {
    mk = (std::pow(static_cast<double>(alphabet_size), k) - 1.0) /
         (static_cast<double>(alphabet_size) - 1.0);
  }
  double states = static_cast<double>(predictor_states) * mk;
  double arg = cond_entropy_bits -
               (2.0 * std::log2(states) + (states - 1.0) * l_max) /
                   static_cast<double>(ell) -
               static_cast<double>(l_max) / static_cast<double>(n) -
               1.0 / static_cast<double>(k);
  PredictionBound b;
  b.delta_argument = std::max(0.0, arg);
  b.bound = delta_function(loss, b.delta_argument);
  return b;
}

PredictiveCodeReport predictive_code_length(const PredictorSpec& p,
                                            const LossFunction& loss,
                                            double theta, int k,
                                            std::span<const int> xs,
                                            bool natural_base) {
  if (!(theta > 0.0))
    throw DomainError("predictive_code_length: theta must be > 0");
  if (k < 1) throw DomainError("predictive_code_length: k must be >= 1");
  PredictorRun run = run_predictor(p, loss, xs);
  double log2_z;
  double per_loss_bits;
  if (natural_base) {
    log2_z = std::log2(partition_function(loss, theta));
    per_loss_bits = 1.0 / (theta * std::log(2.0));
  } else {
    double z2 = 0.0;
    for (int x = 0; x < loss.alphabet_size; ++x)
      z2 += std::exp2(-loss.loss(x, 0) / theta);
    log2_z = std::log2(z2);
    per_loss_bits = 1.0 / theta;
  }
  PredictiveCodeReport rep;
  rep.total_loss = run.total_loss;
  std::size_t n = xs.size();
  for (std::size_t start = 0; start < n; start += k) {
    std::size_t len = std::min<std::size_t>(k, n - start);
    double ideal = 0.0;
    for (std::size_t i = start; i < start + len; ++i)
      ideal += run.losses[i] * per_loss_bits + log2_z;
    rep.bits += static_cast<long long>(std::ceil(ideal - 1e-12));
    rep.ideal_bits += ideal;
    ++rep.blocks;
  }
  rep.upper_bound = rep.ideal_bits + static_cast<double>(n) /
                                         static_cast<double>(k);
  rep.bound_holds = static_cast<double>(rep.bits) <= rep.upper_bound + 1e-9;
  return rep;
}

}  // namespace kraftlab
