#include "gen.hpp"

#include <algorithm>

namespace kraftlab::testgen {

std::vector<std::string> random_prefix_code(std::mt19937_64& rng, int size,
                                            int max_pad) {
  std::vector<std::string> leaves{std::string()};
  for (int i = 1; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
    std::size_t at = pick(rng);
    std::string w = leaves[at];
    leaves[at] = w + "0";
    leaves.push_back(w + "1");
  }
  if (max_pad > 0) {
    // Appending to members of an antichain keeps it an antichain.
    std::uniform_int_distribution<int> pad(0, max_pad);
    for (std::string& w : leaves) w.append(pad(rng), '0');
  }
  std::shuffle(leaves.begin(), leaves.end(), rng);
  return leaves;
}

Encoder random_prefix_encoder(std::mt19937_64& rng, const GenOptions& opt) {
  Encoder e;
  e.num_states = opt.num_states;
  e.alphabet_size = opt.alphabet_size;
  e.initial_state = 0;
  std::size_t cells =
      static_cast<std::size_t>(opt.num_states) * opt.alphabet_size;
  e.output.resize(cells);
  e.next.resize(cells);
  std::uniform_int_distribution<int> state(0, opt.num_states - 1);
  std::uniform_int_distribution<int> symbol(0, opt.alphabet_size - 1);
  for (int z = 0; z < opt.num_states; ++z) {
    std::vector<std::string> code =
        random_prefix_code(rng, opt.alphabet_size, opt.max_pad);
    for (int x = 0; x < opt.alphabet_size; ++x) {
      std::size_t cell = static_cast<std::size_t>(z) * opt.alphabet_size + x;
      e.output[cell] = Codeword{code[x]};
      e.next[cell] = state(rng);
    }
    if (opt.force_irreducible) {
      std::size_t cell =
          static_cast<std::size_t>(z) * opt.alphabet_size + symbol(rng);
      e.next[cell] = (z + 1) % opt.num_states;
    }
  }
  for (int z = 0; z < opt.num_states; ++z)
    e.state_names.push_back("z" + std::to_string(z));
  for (int x = 0; x < opt.alphabet_size; ++x)
    e.symbol_names.push_back("x" + std::to_string(x));
  e.validate();
  return e;
}

std::vector<int> random_sequence(std::mt19937_64& rng, int alphabet_size,
                                 int n) {
  std::uniform_int_distribution<int> symbol(0, alphabet_size - 1);
  std::vector<int> xs(n);
  for (int& x : xs) x = symbol(rng);
  return xs;
}

SIEncoder random_si_prefix_encoder(std::mt19937_64& rng, int num_states,
                                   int alphabet_size, int si_alphabet_size,
                                   int max_pad) {
  SIEncoder e;
  e.num_states = num_states;
  e.alphabet_size = alphabet_size;
  e.si_alphabet_size = si_alphabet_size;
  e.initial_state = 0;
  std::size_t cells = static_cast<std::size_t>(num_states) * alphabet_size *
                      si_alphabet_size;
  e.output.resize(cells);
  e.next.resize(cells);
  std::uniform_int_distribution<int> state(0, num_states - 1);
  for (int z = 0; z < num_states; ++z)
    for (int w = 0; w < si_alphabet_size; ++w) {
      std::vector<std::string> code =
          random_prefix_code(rng, alphabet_size, max_pad);
      for (int x = 0; x < alphabet_size; ++x) {
        std::size_t cell = e.cell(z, x, w);
        e.output[cell] = Codeword{code[x]};
        e.next[cell] = state(rng);
      }
    }
  for (int z = 0; z < num_states; ++z)
    e.state_names.push_back("z" + std::to_string(z));
  for (int x = 0; x < alphabet_size; ++x)
    e.symbol_names.push_back("x" + std::to_string(x));
  for (int w = 0; w < si_alphabet_size; ++w)
    e.si_symbol_names.push_back("w" + std::to_string(w));
  e.validate();
  return e;
}

}  // namespace kraftlab::testgen
