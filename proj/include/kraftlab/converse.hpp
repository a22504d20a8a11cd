#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kraftlab/encoder.hpp"

namespace kraftlab {

/// Joint empirical distribution of (state, length-ell input window) taken
/// over all n cyclic window positions of a cyclically extended run. Windows
/// are packed little-endian: symbol j of the window contributes
/// x * alphabet^j, so the leading (ell-1)-prefix is the packed value modulo
/// alphabet^(ell-1).
struct EmpiricalDist {
  int ell = 0;
  int alphabet_size = 0;
  int num_states = 0;
  long long n_original = 0;
  long long n_extended = 0;  // denominator of every relative frequency
  std::map<std::pair<int, std::uint64_t>, long long> counts;

  std::map<std::uint64_t, long long> window_marginal() const;
  std::map<std::uint64_t, long long> prefix_marginal() const;  // first ell-1
  std::map<std::uint64_t, long long> suffix_marginal() const;  // last ell-1
  /// Cyclic windows make the prefix and suffix marginals coincide exactly.
  bool shift_invariant() const;
};

EmpiricalDist empirical_joint(const Encoder& e, int start_state,
                              std::span<const int> xs, int ell);

/// Cyclic window statistics of a bare sequence, no encoder involved: a
/// single-state EmpiricalDist over all n cyclic windows of xs itself
/// (n_original == n_extended == n).
EmpiricalDist empirical_window_dist(std::span<const int> xs,
                                    int alphabet_size, int ell);

/// H(window) - H(prefix) in bits: the empirical conditional entropy of the
/// last window symbol given the ell-1 before it.
double empirical_cond_entropy(const EmpiricalDist& d);

/// Entropy in bits of a count map with the given total.
double count_entropy(const std::map<std::uint64_t, long long>& counts,
                     long long total);

/// Compression-rate floor for any s-state lossless encoder, from the order-
/// ell empirical conditional entropy:
///   H - (2 log2 s + (s - 1) l_max) / ell.
double stochastic_rate_bound(double cond_entropy_bits, int num_states,
                             int l_max, int ell);

struct RateBoundTerm {
  int ell = 0;
  double cond_entropy = 0.0;
  double bound = 0.0;
};

struct RateBoundReport {
  double rate = 0.0;   // achieved bits per input symbol
  double bound = 0.0;  // best lower bound on the rate
  bool holds = false;  // bound <= rate (within 1e-9)
  int best_ell = 0;
  long long n_original = 0;
  long long n_extended = 0;
  std::vector<RateBoundTerm> terms;
};

/// Individual-sequence converse: the encoder's rate on xs against the best
/// order-ell bound over the given window lengths, with the cyclic-extension
/// correction (s - 1) l_max / n subtracted.
RateBoundReport individual_rate_bound(const Encoder& e, int start_state,
                                      std::span<const int> xs,
                                      std::span<const int> ells);

/// Incremental parsing into phrases, each a previously unseen word except
/// possibly the last. c counts the distinct phrases only; the trailing
/// repeat, when present, is still returned so the phrases concatenate back
/// to the input.
struct Lz78Parse {
  std::vector<std::pair<std::size_t, std::size_t>> phrases;  // (start, len)
  long long c = 0;
  bool last_repeats = false;
};

Lz78Parse lz78_parse(std::span<const int> xs);

/// Heuristic vanishing term for the parsing entropy bound:
/// log2(log2 n) / log2 n. Requires n >= 3.
double default_epsilon(long long n);

/// Name of the default epsilon model for reports. It is a heuristic choice
/// of the vanishing term, not a bound derived from first principles, and
/// every report that uses it must carry this label.
const char* default_epsilon_label();

/// Rate floor from the phrase count: (c log2 c) / n - epsilon minus the
/// finite-state deficit at window length ell.
double lz_rate_bound(long long c, long long n, int ell, int num_states,
                     int l_max, double epsilon);

/// Additive per-letter loss rho(x, xhat). Balanced means every reference
/// column carries the same multiset of values, which makes the partition
/// function reference-independent.
struct LossFunction {
  int alphabet_size = 0;
  std::vector<double> values;  // values[x * alphabet_size + xhat]

  static LossFunction hamming(int alphabet_size);
  double loss(int x, int xhat) const {
    return values[static_cast<std::size_t>(x) * alphabet_size + xhat];
  }
  double max_loss() const;
  bool balanced() const;
  void validate() const;
};

/// Z(theta) = sum over x of exp(-rho(x, xhat) / theta), the same for every
/// xhat of a balanced loss. Natural base.
double partition_function(const LossFunction& loss, double theta);

/// Delta(R) = sup over theta > 0 of theta * (R - ln Z(theta)), clamped at 0.
/// R enters in bits and is converted to nats; the result is in loss units.
/// The objective is concave in theta, so golden-section search on
/// [1e-6, 1e6] nails the supremum.
double delta_function(const LossFunction& loss, double rate_bits);

/// Deterministic finite-state predictor. The guess for x_(t+1) is
/// predict(state_t, x_t); the first guess, made before any input, is
/// initial_prediction.
struct PredictorSpec {
  int num_states = 0;
  int alphabet_size = 0;
  int initial_state = 0;
  int initial_prediction = 0;
  std::vector<int> predict;  // predict[state * alphabet + symbol]
  std::vector<int> next;
  std::vector<std::string> state_names;
  std::vector<std::string> symbol_names;

  int guess(int state, int x) const {
    return predict[static_cast<std::size_t>(state) * alphabet_size + x];
  }
  int step(int state, int x) const {
    return next[static_cast<std::size_t>(state) * alphabet_size + x];
  }
  void validate() const;
};

struct PredictorRun {
  std::vector<int> guesses;
  std::vector<double> losses;
  double total_loss = 0.0;
  double average_loss = 0.0;
};

PredictorRun run_predictor(const PredictorSpec& p, const LossFunction& loss,
                           std::span<const int> xs);

/// Converse for prediction: no q-state predictor beats
///   Delta(H - (2 log2(q M_k) + (q M_k - 1) l_max) / ell - l_max / n - 1/k)
/// where M_k = (alpha^k - 1) / (alpha - 1) counts the k-block phase states
/// of the predictive encoder whose longest codeword is l_max.
struct PredictionBound {
  double delta_argument = 0.0;  // the clipped rate handed to Delta
  double bound = 0.0;           // loss floor, in loss units
};

PredictionBound prediction_lower_bound(const LossFunction& loss,
                                       double cond_entropy_bits,
                                       long long predictor_states, int k,
                                       int ell, long long n, int l_max,
                                       int alphabet_size);

/// Length of the predictive code that spends ceil(ideal) bits per k-block,
/// where the per-letter ideal under the theta-tilted residual distribution
/// is rho_t / (theta ln 2) + log2 Z(theta) bits (natural base) or
/// rho_t / theta + log2 Z2(theta) bits (base 2).
struct PredictiveCodeReport {
  long long bits = 0;
  double ideal_bits = 0.0;
  double upper_bound = 0.0;  // ideal + n/k
  bool bound_holds = false;
  double total_loss = 0.0;
  long long blocks = 0;
};

PredictiveCodeReport predictive_code_length(const PredictorSpec& p,
                                            const LossFunction& loss,
                                            double theta, int k,
                                            std::span<const int> xs,
                                            bool natural_base = true);

}  // namespace kraftlab
