#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kraftlab/budget.hpp"
#include "kraftlab/dyadic_matrix.hpp"
#include "kraftlab/encoder.hpp"
#include "kraftlab/report.hpp"

namespace kraftlab {

/// Single-letter distortion d(x, xhat) >= 0 between a source alphabet and a
/// reproduction alphabet.
struct Distortion {
  int source_size = 0;
  int repro_size = 0;
  std::vector<double> d;  // d[x * repro_size + xhat]
  std::vector<std::string> source_names;
  std::vector<std::string> repro_names;

  static Distortion hamming(int alphabet_size);
  double at(int x, int xhat) const {
    return d[static_cast<std::size_t>(x) * repro_size + xhat];
  }
  double min_value() const;
  double max_value() const;
  /// All values within 1e-12 of non-negative integers.
  bool integral() const;
  /// Every reproduction column holds the same multiset of values, making
  /// ball sizes independent of the center word.
  bool balanced() const;
  void validate() const;
};

/// Number of source words within per-block distortion ell * D of the given
/// reproduction word, by direct enumeration of source_size^ell words.
std::uint64_t ball_size_enumerate(const Distortion& d,
                                  std::span<const int> repro_word, double D,
                                  const Budget& budget = Budget{});

/// Same count by dynamic programming over integer cumulative distortion.
/// Only applies when the distortion table is integral.
std::uint64_t ball_size_dp(const Distortion& d, std::span<const int> repro_word,
                           double D);

/// Dispatches to the DP when the table is integral, else enumerates.
std::uint64_t ball_size(const Distortion& d, std::span<const int> repro_word,
                        double D, const Budget& budget = Budget{});

/// Largest ball size over all reproduction words of length ell. Balanced
/// distortions shortcut to a single ball.
std::uint64_t b_ell(const Distortion& d, int ell, double D,
                    const Budget& budget = Budget{});

/// Block quantizer: every source word of length ell maps to a reproduction
/// word of the same length, with per-block distortion at most ell * D.
/// Blocks are ranked big-endian.
struct Quantizer {
  int ell = 0;
  int source_size = 0;
  int repro_size = 0;
  double D = 0.0;
  std::vector<std::int64_t> map;  // source block rank -> repro block rank

  std::uint64_t source_blocks() const;
  std::uint64_t repro_blocks() const;
  void validate() const;
};

/// Worst per-block distortion of the quantizer, normalized per letter.
double quantizer_max_distortion(const Quantizer& q, const Distortion& d,
                                const Budget& budget = Budget{});

/// Maps each source block to the closest codebook word (ties to the lowest
/// codebook index); D becomes the worst per-letter distortion achieved.
Quantizer quantizer_nearest_codeword(const Distortion& d, int ell,
                                     const std::vector<std::vector<int>>& codebook,
                                     const Budget& budget = Budget{});

/// Kraft data of a quantized-then-coded scheme. The reproduction coder runs
/// on repro blocks (one input symbol per block); k pulls its Kraft weights
/// back through the quantizer onto source blocks.
struct LossyKraft {
  DyadicMatrix k;      // source-block Kraft matrix
  DyadicMatrix k_hat;  // reproduction-block Kraft matrix
  std::uint64_t ball_bound = 0;  // B_ell
  bool entrywise_dominated = false;  // k <= ball_bound * k_hat
};

LossyKraft lossy_kraft_matrix(const Quantizer& q, const Encoder& repro_coder,
                              const Distortion& d,
                              const Budget& budget = Budget{});

/// Largest conditional entropy H(X | Xhat) over joint distributions whose
/// expected distortion is at most D, in bits. Concave and non-decreasing in
/// D; equals log2(source alphabet) once D admits the uniform conditional.
double phi_of_D(const Distortion& d, double D);

/// Chains every bound of the lossy pipeline: the reproduction coder's own
/// Kraft test, rho(K) <= B_ell, B_ell <= 2^(ell Phi(D)), and the entrywise
/// domination K <= B_ell * Khat.
GKIReport lossy_gki_check(const Quantizer& q, const Encoder& repro_coder,
                          const Distortion& d,
                          const Budget& budget = Budget{});

}  // namespace kraftlab
