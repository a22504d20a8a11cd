#include <doctest.h>

#include <vector>

#include "kraftlab/encoder.hpp"
#include "kraftlab/errors.hpp"
#include "kraftlab/io.hpp"

using namespace kraftlab;

namespace {

Encoder load(const char* name) {
  return parse_encoder(load_json(std::string(KRAFTLAB_DATA_DIR) + "/" + name));
}

// Three states S, O, I; S emits nothing on 0 and "11" on 1.
Encoder block2() { return load("example1.json"); }

}  // namespace

TEST_CASE("encode traces") {
  Encoder e = block2();
  std::vector<int> ones{1, 1};
  EncodeTrace t = encode(e, e.initial_state, ones);
  CHECK(t.concatenated == "111");
  CHECK(t.total_bits == 3);
  CHECK(t.final_state == 0);
  CHECK(t.states == std::vector<int>{0, 2, 0});

  std::vector<int> zeros{0, 0};
  t = encode(e, e.initial_state, zeros);
  CHECK(t.concatenated == "0");
  CHECK(t.total_bits == 1);
  CHECK(t.final_state == 0);
  CHECK(t.outputs[0].bits.empty());

  CHECK(e.l_max() == 2);
}

TEST_CASE("irreducibility and shortest paths") {
  Encoder e = block2();
  CHECK(is_irreducible(e));
  CHECK(shortest_path_input(e, 0, 0).empty());
  CHECK(shortest_path_input(e, 0, 1) == std::vector<int>{0});
  CHECK(shortest_path_input(e, 0, 2) == std::vector<int>{1});
  CHECK(shortest_path_input(e, 1, 0) == std::vector<int>{0});
  for (int a = 0; a < e.num_states; ++a)
    for (int b = 0; b < e.num_states; ++b)
      CHECK(static_cast<int>(shortest_path_input(e, a, b).size()) <=
            e.num_states - 1);

  // Sink state 1 never returns to 0.
  Encoder r = e;
  for (int x = 0; x < r.alphabet_size; ++x)
    r.next[static_cast<std::size_t>(1) * r.alphabet_size + x] = 1;
  CHECK_FALSE(is_irreducible(r));
  CHECK_THROWS_AS(shortest_path_input(r, 1, 0), DomainError);
}

TEST_CASE("cyclic extension returns to the start state") {
  Encoder e = block2();
  std::vector<int> xs{0};
  CyclicExtension ext = cyclic_extend(e, 0, xs);
  CHECK(ext.added == 1);
  CHECK(ext.extended == std::vector<int>{0, 0});
  EncodeTrace t = encode(e, 0, ext.extended);
  CHECK(t.final_state == 0);

  std::vector<int> whole{0, 1};
  ext = cyclic_extend(e, 0, whole);
  CHECK(ext.added == 0);
}

TEST_CASE("check_il clears a UD encoder") {
  Encoder e = block2();
  ILVerdict v = check_il(e, 6);
  CHECK(v.il_up_to_depth);
  CHECK(v.checked_depth == 6);
  CHECK_FALSE(v.witness.has_value());
  CHECK_FALSE(v.budget_hit);
}

TEST_CASE("check_il finds a depth-1 collision") {
  Encoder e;
  e.num_states = 1;
  e.alphabet_size = 2;
  e.output = {Codeword{""}, Codeword{""}};
  e.next = {0, 0};
  e.state_names = {"q"};
  e.symbol_names = {"0", "1"};
  ILVerdict v = check_il(e, 4);
  REQUIRE(v.witness.has_value());
  CHECK(v.checked_depth == 1);
  CHECK_FALSE(v.il_up_to_depth);
  CHECK(v.witness->first == std::vector<int>{0});
  CHECK(v.witness->second == std::vector<int>{1});
  CHECK(v.witness->output_bits.empty());
}

TEST_CASE("check_il finds the minimal-depth collision after a mutation") {
  Encoder e = block2();
  // Redirect f(O, 1) to "0": inputs 00 and 01 both emit "0" and end in S.
  e.output[static_cast<std::size_t>(1) * e.alphabet_size + 1] = Codeword{"0"};
  ILVerdict v = check_il(e, 6);
  REQUIRE(v.witness.has_value());
  CHECK(v.checked_depth == 2);
  CHECK(v.witness->start_state == 0);
  CHECK(v.witness->first == std::vector<int>{0, 0});
  CHECK(v.witness->second == std::vector<int>{0, 1});
  CHECK(v.witness->final_state == 0);
  CHECK(v.witness->output_bits == "0");
}

TEST_CASE("check_il on a unit spectral radius non-IL encoder") {
  Encoder e = load("nonil2.json");
  ILVerdict v = check_il(e, 5);
  REQUIRE(v.witness.has_value());
  CHECK(v.checked_depth == 2);
  CHECK(v.witness->first == std::vector<int>{0, 0});
  CHECK(v.witness->second == std::vector<int>{1, 0});
  CHECK(v.witness->output_bits == "00");
  CHECK(v.witness->final_state == 0);
}

TEST_CASE("check_il respects the string budget") {
  Encoder e = block2();
  Budget tiny;
  tiny.max_strings = 10;  // depth 1 costs 2, depth 2 costs 4, depth 3 costs 8
  ILVerdict v = check_il(e, 10, tiny);
  CHECK(v.budget_hit);
  CHECK(v.checked_depth == 2);
  CHECK(v.il_up_to_depth);
  CHECK(v.strings_enumerated == 6);
}

TEST_CASE("block encoder layout") {
  std::vector<Codeword> codebook{Codeword{"0"}, Codeword{"10"},
                                 Codeword{"110"}, Codeword{"111"}};
  Encoder b = build_block_encoder(2, 2, codebook);
  CHECK(b.num_states == 3);
  CHECK(b.state_names == std::vector<std::string>{"start", "0", "1"});
  CHECK(b.initial_state == 0);

  // No early emission: both first-symbol outputs are null.
  CHECK(b.out(0, 0).bits.empty());
  CHECK(b.out(0, 1).bits.empty());
  CHECK(b.out(1, 0).bits == "0");
  CHECK(b.out(1, 1).bits == "10");
  CHECK(b.out(2, 0).bits == "110");
  CHECK(b.out(2, 1).bits == "111");
  for (int x = 0; x < 2; ++x) {
    CHECK(b.step(1, x) == 0);
    CHECK(b.step(2, x) == 0);
  }

  std::vector<int> xs{1, 0, 0, 1};
  CHECK(encode(b, 0, xs).concatenated == "11010");

  // Prefix-free codebook keeps the block encoder collision free to 3k.
  ILVerdict v = check_il(b, 6);
  CHECK(v.il_up_to_depth);
  CHECK_FALSE(v.witness.has_value());

  CHECK_THROWS_AS(build_block_encoder(2, 2, {Codeword{"0"}}), DomainError);
}
