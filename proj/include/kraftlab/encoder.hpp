#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kraftlab/budget.hpp"

namespace kraftlab {

/// Binary codeword. May be empty (the null string).
struct Codeword {
  std::string bits;  // characters '0' and '1'

  int length() const { return static_cast<int>(bits.size()); }
  bool operator==(const Codeword&) const = default;
};

/// Deterministic finite-state encoder: next-state map g and output map f over
/// states {0..s-1} and input symbols {0..alpha-1}. Both maps are total.
/// Transition tables are laid out state-major: index z * alpha + x.
struct Encoder {
  int num_states = 0;
  int alphabet_size = 0;
  int initial_state = 0;
  std::vector<Codeword> output;  // f(z, x)
  std::vector<int> next;         // g(z, x)
  std::vector<std::string> state_names;
  std::vector<std::string> symbol_names;

  const Codeword& out(int z, int x) const {
    return output[static_cast<std::size_t>(z) * alphabet_size + x];
  }
  int step(int z, int x) const {
    return next[static_cast<std::size_t>(z) * alphabet_size + x];
  }
  /// Longest single-transition codeword.
  int l_max() const;
  /// Internal consistency: table sizes, state ranges, binary codewords.
  void validate() const;
};

/// Full run of the encoder on an input word.
struct EncodeTrace {
  std::vector<int> states;        // visited states, length n + 1, front z1
  std::vector<Codeword> outputs;  // per-step codewords, length n
  std::string concatenated;       // the emitted bit string
  long long total_bits = 0;
  int final_state = 0;
};

EncodeTrace encode(const Encoder& e, int start_state, std::span<const int> xs);

/// Strong connectivity of the transition digraph (edges z -> g(z, x)).
bool is_irreducible(const Encoder& e);

/// Shortest input word driving the encoder from `from` to `to`; ties broken
/// toward the lexicographically smallest word. Empty word when from == to.
/// Throws DomainError if `to` is unreachable.
std::vector<int> shortest_path_input(const Encoder& e, int from, int to);

struct CyclicExtension {
  std::vector<int> extended;  // xs followed by the return word
  int added = 0;              // return word length, <= s - 1 when irreducible
};

/// Appends the shortest input word that returns the encoder to start_state,
/// making the state sequence cyclic. Requires the return path to exist
/// (always true for irreducible encoders).
CyclicExtension cyclic_extend(const Encoder& e, int start_state,
                              std::span<const int> xs);

/// Two same-length input words the initial state cannot distinguish:
/// identical output strings and identical final states.
struct CollisionWitness {
  int start_state = 0;  // the encoder's designated initial state
  std::vector<int> first;
  std::vector<int> second;
  int final_state = 0;
  std::string output_bits;
  /// Side word both inputs were read under; empty without side information.
  std::vector<int> si_word;
};

struct ILVerdict {
  /// Deepest input length fully enumerated.
  int checked_depth = 0;
  /// No collision up to checked_depth. A witness, once it exists at depth n,
  /// persists at every larger depth, so the verdict is monotone.
  bool il_up_to_depth = true;
  std::optional<CollisionWitness> witness;
  /// True when the string budget stopped enumeration before max_depth.
  bool budget_hit = false;
  std::uint64_t strings_enumerated = 0;
};

/// Exhaustive information-losslessness check to input length max_depth,
/// spending at most budget.max_strings enumerated words across all depths.
/// Runs from the designated initial state; a collision reachable from any
/// other live state surfaces here too, lengthened by the access path.
/// Words are scanned lexicographically per depth, so the witness is the
/// minimal-depth, lexicographically first collision, deterministically.
ILVerdict check_il(const Encoder& e, int max_depth,
                   const Budget& budget = Budget{});

/// Encoder that consumes k-blocks of a base alphabet through a prefix-tree
/// of states and emits codebook[block] on each k-th symbol. States are the
/// alpha-ary prefixes of length < k; blocks index the codebook in big-endian
/// symbol order.
Encoder build_block_encoder(int alphabet_size, int k,
                            const std::vector<Codeword>& codebook);

}  // namespace kraftlab
