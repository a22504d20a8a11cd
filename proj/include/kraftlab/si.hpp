#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kraftlab/budget.hpp"
#include "kraftlab/dyadic_matrix.hpp"
#include "kraftlab/encoder.hpp"
#include "kraftlab/linalg.hpp"

namespace kraftlab {

/// Finite-state encoder whose transitions also read a side-information
/// symbol w known to the decoder: next state g(z, x, w), output f(z, x, w).
/// Tables are laid out (z, w) pair-major: index (z * si_alphabet + w) * alpha
/// + x, so all transitions sharing a side symbol sit together.
struct SIEncoder {
  int num_states = 0;
  int alphabet_size = 0;
  int si_alphabet_size = 0;
  int initial_state = 0;
  std::vector<Codeword> output;
  std::vector<int> next;
  std::vector<std::string> state_names;
  std::vector<std::string> symbol_names;
  std::vector<std::string> si_symbol_names;

  std::size_t cell(int z, int x, int w) const {
    return (static_cast<std::size_t>(z) * si_alphabet_size + w) *
               alphabet_size +
           x;
  }
  const Codeword& out(int z, int x, int w) const {
    return output[cell(z, x, w)];
  }
  int step(int z, int x, int w) const { return next[cell(z, x, w)]; }
  int l_max() const;
  void validate() const;
};

/// One Kraft matrix per side symbol: K(w)[z][z'] = sum over x with
/// g(z, x, w) = z' of 2^-len(f(z, x, w)).
struct KraftFamily {
  std::vector<DyadicMatrix> mats;
  std::vector<std::string> labels;

  int states() const { return mats.empty() ? 0 : mats.front().size(); }
  std::size_t size() const { return mats.size(); }
};

KraftFamily kraft_family(const SIEncoder& e);

/// K(w_1) K(w_2) ... K(w_n), multiplied left to right. The empty word gives
/// the identity.
DyadicMatrix family_product(const KraftFamily& fam, std::span<const int> word,
                            const Budget& budget = Budget{});
Mat family_product(const std::vector<Mat>& fam, std::span<const int> word);

/// Two-sided bracket on the joint spectral radius of a finite matrix family:
///   lower = max over inspected words w of rho(K(w))^(1/|w|)
///   upper = min over fully enumerated depths n of
///           max_{|w| = n} ||K(w)||_inf^(1/n).
/// Depths are enumerated exhaustively while the work fits the word budget;
/// past that, seeded random sampling keeps improving the lower bound only
/// (a sampled maximum cannot certify an upper bound).
struct JSRBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<int> lower_word;   // witness for the lower bound
  int upper_depth = 0;           // depth attaining the upper bound
  int exhaustive_depth = 0;      // deepest fully enumerated level
  bool sampled = false;
  std::uint64_t sample_count = 0;
};

JSRBracket jsr_bracket(const std::vector<Mat>& fam, int max_depth = 8,
                       std::uint64_t seed = 1,
                       const Budget& budget = Budget{});
JSRBracket jsr_bracket(const KraftFamily& fam, int max_depth = 8,
                       std::uint64_t seed = 1,
                       const Budget& budget = Budget{});

/// Certificate that every product of the family stays bounded: a positive v
/// with K(w) v <= v for every member w, found by the monotone closure
/// U <- max(U, max_w K(w) U) from the all-ones vector. The closure either
/// stabilizes (its limit is the minimal such v above 1) or climbs past the
/// cap, in which case no certificate is reported.
struct SubinvariantResult {
  bool found = false;
  std::vector<double> v;
  int iterations = 0;
  double max_violation = 0.0;  // max over w, z of (K(w) v - v)_z at return
};

SubinvariantResult find_subinvariant_vector(const std::vector<Mat>& fam,
                                            double cap = 0.0,
                                            int max_iter = 10000);
SubinvariantResult find_subinvariant_vector(const KraftFamily& fam,
                                            double cap = 0.0,
                                            int max_iter = 10000);

/// Run of an SI encoder on paired input and side sequences of equal length.
EncodeTrace si_encode(const SIEncoder& e, int start_state,
                      std::span<const int> xs, std::span<const int> ws);

/// Exhaustive IL check in the side-information sense: a collision is two
/// distinct input words producing identical outputs and final state from the
/// designated initial state under the *same* side word. The witness carries
/// that side word.
ILVerdict check_il_si(const SIEncoder& e, int max_depth,
                      const Budget& budget = Budget{});

}  // namespace kraftlab
