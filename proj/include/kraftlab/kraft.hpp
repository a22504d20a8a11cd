#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kraftlab/budget.hpp"
#include "kraftlab/dyadic_matrix.hpp"
#include "kraftlab/encoder.hpp"
#include "kraftlab/report.hpp"

namespace kraftlab {

/// Kraft matrix K[z][z'] = sum over symbols x with g(z, x) = z' of
/// 2^-len(f(z, x)). Exact.
DyadicMatrix kraft_matrix(const Encoder& e);

/// Verifies that the Kraft matrix of the ell-step block view of the encoder
/// (one transition per input word of length ell) equals K^ell. Enumerates
/// s * alpha^ell words against the budget.
bool block_kraft_consistency(const Encoder& e, int ell,
                             const Budget& budget = Budget{});

/// Every generalized Kraft inequality that applies to the encoder, each as
/// one record: the spectral-radius test, the per-ell power growth bounds,
/// and, when the transition digraph is irreducible, the uniform power bounds
/// and the guaranteed sub-unit row sum.
GKIReport gki_check(const Encoder& e, std::span<const int> ells,
                    const Budget& budget = Budget{});

/// State-oblivious baseline bound s^2 * (1 + log2(1 + alpha^ell / s^2)).
double zl_baseline(long long num_states, long long alphabet_size, int ell);

/// Exact sum over all input words of length ell of 2^-(best achievable
/// output length over start states). Always at most zl_baseline and never
/// tight against it.
Dyadic min_state_kraft_sum(const Encoder& e, int ell,
                           const Budget& budget = Budget{});

/// Padded length function l'(x^n) = l(start, x^n)
///   + ceil(log2(s * (1 + n * l_max))) + ceil(log2 s),
/// which satisfies the unit Kraft inequality whenever the encoder does
/// (row sums of K^n within the affine growth bound).
struct PrefixRepair {
  int pad_bits = 0;
  std::vector<long long> lengths;  // indexed by big-endian input word rank
  Dyadic kraft_sum;
  bool within_one = false;
};

PrefixRepair prefix_repair_lengths(const Encoder& e, int start_state, int n,
                                   const Budget& budget = Budget{});

}  // namespace kraftlab
