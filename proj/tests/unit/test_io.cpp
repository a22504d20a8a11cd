#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "kraftlab/errors.hpp"
#include "kraftlab/io.hpp"

using namespace kraftlab;

namespace {

std::string data(const char* name) {
  return std::string(KRAFTLAB_DATA_DIR) + "/" + name;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    path = std::string("kraftlab_io_test_") +
           std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".tmp";
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("encoder json round-trip preserves names") {
  Encoder e = parse_encoder(load_json(data("example1.json")));
  CHECK(e.state_names == std::vector<std::string>{"S", "O", "I"});
  CHECK(e.symbol_names == std::vector<std::string>{"0", "1"});
  Encoder back = parse_encoder(encoder_to_json(e));
  CHECK(back.num_states == e.num_states);
  CHECK(back.initial_state == e.initial_state);
  CHECK(back.output == e.output);
  CHECK(back.next == e.next);
  CHECK(back.state_names == e.state_names);
}

TEST_CASE("encoder parse errors name the offender") {
  nlohmann::json j = load_json(data("example1.json"));
  j["transitions"].erase(3);  // drop (O, 1)
  try {
    parse_encoder(j);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(std::string(err.what()) ==
          "encoder: missing transition for (O, 1)");
  }

  nlohmann::json dup = load_json(data("example1.json"));
  dup["transitions"].push_back(dup["transitions"][0]);
  CHECK_THROWS_WITH_AS(parse_encoder(dup),
                       "encoder: duplicate transition for (S, 0)", ParseError);

  nlohmann::json bad = load_json(data("example1.json"));
  bad["transitions"][0]["output"] = "012";
  CHECK_THROWS_AS(parse_encoder(bad), ParseError);

  nlohmann::json unk = load_json(data("example1.json"));
  unk["initial"] = "Q";
  CHECK_THROWS_WITH_AS(parse_encoder(unk), "encoder: unknown state \"Q\"",
                       ParseError);
}

TEST_CASE("si encoder requires full (state, symbol, si) coverage") {
  nlohmann::json j = load_json(data("si_pair.json"));
  SIEncoder e = parse_si_encoder(j);
  CHECK(e.si_alphabet_size == 2);
  j["transitions"].erase(7);
  CHECK_THROWS_WITH_AS(parse_si_encoder(j),
                       "si encoder: missing transition for (B, 1, v)",
                       ParseError);
}

TEST_CASE("matrix family parsing") {
  nlohmann::json j = load_json(data("family_eps.json"));
  MatFamily fam = parse_matrix_family(j);
  REQUIRE(fam.mats.size() == 2);
  CHECK(fam.labels == std::vector<std::string>{"A", "B"});
  CHECK(fam.mats[0](0, 1) == 10.0);
  CHECK(fam.mats[1](1, 0) == 10.0);

  j["matrices"][0][0][0] = -1.0;
  CHECK_THROWS_AS(parse_matrix_family(j), ParseError);
}

TEST_CASE("sequences load from json arrays or raw bytes") {
  TempFile json_seq("[0, 1, 1, 0]");
  CHECK(read_sequence(json_seq.path, 2) == std::vector<int>{0, 1, 1, 0});

  TempFile json_bad("[0, 2]");
  CHECK_THROWS_AS(read_sequence(json_bad.path, 2), ParseError);

  TempFile raw(std::string("\x00\x01\x01", 3));
  CHECK(read_sequence(raw.path, 2) == std::vector<int>{0, 1, 1});

  TempFile empty("");
  CHECK_THROWS_AS(read_sequence(empty.path, 2), ParseError);
  CHECK_THROWS_AS(read_sequence("does_not_exist.bin", 2), ParseError);
}

TEST_CASE("symbol tokens resolve by index or name") {
  std::vector<std::string> names{"a", "b", "c"};
  CHECK(symbol_index(names, nlohmann::json(2), "symbol") == 2);
  CHECK(symbol_index(names, nlohmann::json("b"), "symbol") == 1);
  CHECK_THROWS_AS(symbol_index(names, nlohmann::json(3), "symbol"),
                  ParseError);
  CHECK_THROWS_AS(symbol_index(names, nlohmann::json("z"), "symbol"),
                  ParseError);
}
