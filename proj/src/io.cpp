#include "kraftlab/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "kraftlab/errors.hpp"
#include "kraftlab/report.hpp"

namespace kraftlab {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* name,
                            const char* ctx) {
  auto it = j.find(name);
  if (it == j.end())
    throw ParseError(std::string(ctx) + ": missing field \"" + name + "\"");
  return *it;
}

std::vector<std::string> parse_name_list(const nlohmann::json& j,
                                         const char* name, const char* ctx) {
  const nlohmann::json& arr = field(j, name, ctx);
  if (!arr.is_array() || arr.empty())
    throw ParseError(std::string(ctx) + ": \"" + name +
                     "\" must be a non-empty array");
  std::vector<std::string> names;
  std::map<std::string, int> seen;
  for (const nlohmann::json& item : arr) {
    if (!item.is_string())
      throw ParseError(std::string(ctx) + ": \"" + name +
                       "\" entries must be strings");
    std::string s = item.get<std::string>();
    if (!seen.emplace(s, 1).second)
      throw ParseError(std::string(ctx) + ": duplicate name \"" + s +
                       "\" in \"" + name + "\"");
    names.push_back(std::move(s));
  }
  return names;
}

int lookup(const std::map<std::string, int>& index, const nlohmann::json& j,
           const char* what, const char* ctx) {
  if (!j.is_string())
    throw ParseError(std::string(ctx) + ": " + what + " must be a string");
  std::string s = j.get<std::string>();
  auto it = index.find(s);
  if (it == index.end())
    throw ParseError(std::string(ctx) + ": unknown " + what + " \"" + s +
                     "\"");
  return it->second;
}

std::map<std::string, int> make_index(const std::vector<std::string>& names) {
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < names.size(); ++i)
    idx[names[i]] = static_cast<int>(i);
  return idx;
}

Codeword parse_codeword(const nlohmann::json& j, const char* ctx) {
  if (!j.is_string())
    throw ParseError(std::string(ctx) + ": output must be a binary string");
  Codeword c{j.get<std::string>()};
  for (char b : c.bits)
    if (b != '0' && b != '1')
      throw ParseError(std::string(ctx) + ": output \"" + c.bits +
                       "\" is not binary");
  return c;
}

}  // namespace

Encoder parse_encoder(const nlohmann::json& j) {
  const char* ctx = "encoder";
  if (!j.is_object()) throw ParseError("encoder: not a JSON object");
  Encoder e;
  e.symbol_names = parse_name_list(j, "alphabet", ctx);
  e.state_names = parse_name_list(j, "states", ctx);
  e.alphabet_size = static_cast<int>(e.symbol_names.size());
  e.num_states = static_cast<int>(e.state_names.size());
  std::map<std::string, int> states = make_index(e.state_names);
  std::map<std::string, int> symbols = make_index(e.symbol_names);
  e.initial_state = lookup(states, field(j, "initial", ctx), "state", ctx);

  std::size_t cells =
      static_cast<std::size_t>(e.num_states) * e.alphabet_size;
  e.output.resize(cells);
  e.next.resize(cells);
  std::vector<char> covered(cells, 0);
  const nlohmann::json& transitions = field(j, "transitions", ctx);
  if (!transitions.is_array())
    throw ParseError("encoder: \"transitions\" must be an array");
  for (const nlohmann::json& t : transitions) {
    if (!t.is_object())
      throw ParseError("encoder: transitions must be objects");
    int z = lookup(states, field(t, "state", "transition"), "state", ctx);
    int x = lookup(symbols, field(t, "symbol", "transition"), "symbol", ctx);
    std::size_t cell = static_cast<std::size_t>(z) * e.alphabet_size + x;
    if (covered[cell])
      throw ParseError("encoder: duplicate transition for (" +
                       e.state_names[z] + ", " + e.symbol_names[x] + ")");
    covered[cell] = 1;
    e.output[cell] = parse_codeword(field(t, "output", "transition"), ctx);
    e.next[cell] =
        lookup(states, field(t, "next", "transition"), "state", ctx);
  }
  for (int z = 0; z < e.num_states; ++z)
    for (int x = 0; x < e.alphabet_size; ++x)
      if (!covered[static_cast<std::size_t>(z) * e.alphabet_size + x])
        throw ParseError("encoder: missing transition for (" +
                         e.state_names[z] + ", " + e.symbol_names[x] + ")");
  e.validate();
  return e;
}

nlohmann::json encoder_to_json(const Encoder& e) {
  nlohmann::json transitions = nlohmann::json::array();
  for (int z = 0; z < e.num_states; ++z)
    for (int x = 0; x < e.alphabet_size; ++x)
      transitions.push_back({{"state", e.state_names[z]},
                             {"symbol", e.symbol_names[x]},
                             {"output", e.out(z, x).bits},
                             {"next", e.state_names[e.step(z, x)]}});
  return {{"alphabet", e.symbol_names},
          {"states", e.state_names},
          {"initial", e.state_names[e.initial_state]},
          {"transitions", transitions}};
}

SIEncoder parse_si_encoder(const nlohmann::json& j) {
  const char* ctx = "si encoder";
  if (!j.is_object()) throw ParseError("si encoder: not a JSON object");
  SIEncoder e;
  e.symbol_names = parse_name_list(j, "alphabet", ctx);
  e.si_symbol_names = parse_name_list(j, "si_alphabet", ctx);
  e.state_names = parse_name_list(j, "states", ctx);
  e.alphabet_size = static_cast<int>(e.symbol_names.size());
  e.si_alphabet_size = static_cast<int>(e.si_symbol_names.size());
  e.num_states = static_cast<int>(e.state_names.size());
  std::map<std::string, int> states = make_index(e.state_names);
  std::map<std::string, int> symbols = make_index(e.symbol_names);
  std::map<std::string, int> side = make_index(e.si_symbol_names);
  e.initial_state = lookup(states, field(j, "initial", ctx), "state", ctx);

  std::size_t cells = static_cast<std::size_t>(e.num_states) *
                      e.alphabet_size * e.si_alphabet_size;
  e.output.resize(cells);
  e.next.resize(cells);
  std::vector<char> covered(cells, 0);
  const nlohmann::json& transitions = field(j, "transitions", ctx);
  if (!transitions.is_array())
    throw ParseError("si encoder: \"transitions\" must be an array");
  for (const nlohmann::json& t : transitions) {
    int z = lookup(states, field(t, "state", "transition"), "state", ctx);
    int x = lookup(symbols, field(t, "symbol", "transition"), "symbol", ctx);
    int w = lookup(side, field(t, "si", "transition"), "si symbol", ctx);
    std::size_t cell = e.cell(z, x, w);
    if (covered[cell])
      throw ParseError("si encoder: duplicate transition for (" +
                       e.state_names[z] + ", " + e.symbol_names[x] + ", " +
                       e.si_symbol_names[w] + ")");
    covered[cell] = 1;
    e.output[cell] = parse_codeword(field(t, "output", "transition"), ctx);
    e.next[cell] =
        lookup(states, field(t, "next", "transition"), "state", ctx);
  }
  for (int z = 0; z < e.num_states; ++z)
    for (int x = 0; x < e.alphabet_size; ++x)
      for (int w = 0; w < e.si_alphabet_size; ++w)
        if (!covered[e.cell(z, x, w)])
          throw ParseError("si encoder: missing transition for (" +
                           e.state_names[z] + ", " + e.symbol_names[x] +
                           ", " + e.si_symbol_names[w] + ")");
  e.validate();
  return e;
}

PredictorSpec parse_predictor(const nlohmann::json& j) {
  const char* ctx = "predictor";
  if (!j.is_object()) throw ParseError("predictor: not a JSON object");
  PredictorSpec p;
  p.symbol_names = parse_name_list(j, "alphabet", ctx);
  p.state_names = parse_name_list(j, "states", ctx);
  p.alphabet_size = static_cast<int>(p.symbol_names.size());
  p.num_states = static_cast<int>(p.state_names.size());
  std::map<std::string, int> states = make_index(p.state_names);
  std::map<std::string, int> symbols = make_index(p.symbol_names);
  p.initial_state = lookup(states, field(j, "initial", ctx), "state", ctx);
  p.initial_prediction =
      lookup(symbols, field(j, "initial_prediction", ctx), "symbol", ctx);

  std::size_t cells =
      static_cast<std::size_t>(p.num_states) * p.alphabet_size;
  p.predict.resize(cells);
  p.next.resize(cells);
  std::vector<char> covered(cells, 0);
  const nlohmann::json& transitions = field(j, "transitions", ctx);
  if (!transitions.is_array())
    throw ParseError("predictor: \"transitions\" must be an array");
  for (const nlohmann::json& t : transitions) {
    int z = lookup(states, field(t, "state", "transition"), "state", ctx);
    int x = lookup(symbols, field(t, "symbol", "transition"), "symbol", ctx);
    std::size_t cell = static_cast<std::size_t>(z) * p.alphabet_size + x;
    if (covered[cell])
      throw ParseError("predictor: duplicate transition for (" +
                       p.state_names[z] + ", " + p.symbol_names[x] + ")");
    covered[cell] = 1;
    p.predict[cell] =
        lookup(symbols, field(t, "predict", "transition"), "symbol", ctx);
    p.next[cell] =
        lookup(states, field(t, "next", "transition"), "state", ctx);
  }
  for (int z = 0; z < p.num_states; ++z)
    for (int x = 0; x < p.alphabet_size; ++x)
      if (!covered[static_cast<std::size_t>(z) * p.alphabet_size + x])
        throw ParseError("predictor: missing transition for (" +
                         p.state_names[z] + ", " + p.symbol_names[x] + ")");
  p.validate();
  return p;
}

namespace {

std::vector<double> parse_row(const nlohmann::json& row, std::size_t width,
                              const char* ctx) {
  if (!row.is_array() || row.size() != width)
    throw ParseError(std::string(ctx) + ": table rows must have " +
                     std::to_string(width) + " entries");
  std::vector<double> out;
  for (const nlohmann::json& v : row) {
    if (!v.is_number())
      throw ParseError(std::string(ctx) + ": table entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Distortion parse_distortion(const nlohmann::json& j) {
  const char* ctx = "distortion";
  if (!j.is_object()) throw ParseError("distortion: not a JSON object");
  Distortion d;
  d.source_names = parse_name_list(j, "alphabet", ctx);
  d.repro_names = j.contains("reproduction_alphabet")
                      ? parse_name_list(j, "reproduction_alphabet", ctx)
                      : d.source_names;
  d.source_size = static_cast<int>(d.source_names.size());
  d.repro_size = static_cast<int>(d.repro_names.size());
  const nlohmann::json& table = field(j, "table", ctx);
  if (!table.is_array() ||
      table.size() != static_cast<std::size_t>(d.source_size))
    throw ParseError("distortion: table must have one row per source symbol");
  for (const nlohmann::json& row : table) {
    std::vector<double> vals =
        parse_row(row, static_cast<std::size_t>(d.repro_size), ctx);
    d.d.insert(d.d.end(), vals.begin(), vals.end());
  }
  d.validate();
  return d;
}

LossFunction parse_loss(const nlohmann::json& j) {
  const char* ctx = "loss";
  if (!j.is_object()) throw ParseError("loss: not a JSON object");
  std::vector<std::string> names = parse_name_list(j, "alphabet", ctx);
  LossFunction loss;
  loss.alphabet_size = static_cast<int>(names.size());
  const nlohmann::json& table = field(j, "table", ctx);
  if (!table.is_array() || table.size() != names.size())
    throw ParseError("loss: table must have one row per symbol");
  for (const nlohmann::json& row : table) {
    std::vector<double> vals = parse_row(row, names.size(), ctx);
    loss.values.insert(loss.values.end(), vals.begin(), vals.end());
  }
  loss.validate();
  return loss;
}

Quantizer parse_quantizer(const nlohmann::json& j, const Distortion& d) {
  const char* ctx = "quantizer";
  if (!j.is_object()) throw ParseError("quantizer: not a JSON object");
  const nlohmann::json& ell_field = field(j, "ell", ctx);
  if (!ell_field.is_number_integer() || ell_field.get<int>() < 1)
    throw ParseError("quantizer: \"ell\" must be a positive integer");
  int ell = ell_field.get<int>();
  std::map<std::string, int> repro_idx = make_index(d.repro_names);

  auto parse_block = [&](const nlohmann::json& word) {
    if (!word.is_array() || word.size() != static_cast<std::size_t>(ell))
      throw ParseError("quantizer: blocks must be arrays of length " +
                       std::to_string(ell));
    std::vector<int> out;
    for (const nlohmann::json& sym : word)
      out.push_back(lookup(repro_idx, sym, "reproduction symbol", ctx));
    return out;
  };

  if (j.contains("codebook")) {
    const nlohmann::json& cb = j["codebook"];
    if (!cb.is_array() || cb.empty())
      throw ParseError("quantizer: \"codebook\" must be a non-empty array");
    std::vector<std::vector<int>> codebook;
    for (const nlohmann::json& word : cb) codebook.push_back(parse_block(word));
    Quantizer q = quantizer_nearest_codeword(d, ell, codebook);
    if (j.contains("D")) {
      double declared = j["D"].get<double>();
      if (declared + 1e-9 < q.D)
        throw ParseError("quantizer: declared D below the achieved level");
      q.D = declared;
    }
    return q;
  }

  const nlohmann::json& map = field(j, "map", ctx);
  if (!map.is_array())
    throw ParseError("quantizer: \"map\" must be an array of blocks");
  Quantizer q;
  q.ell = ell;
  q.source_size = d.source_size;
  q.repro_size = d.repro_size;
  std::uint64_t expect = 1;
  for (int i = 0; i < ell; ++i)
    expect *= static_cast<std::uint64_t>(d.source_size);
  if (map.size() != expect)
    throw ParseError("quantizer: map must list all " +
                     std::to_string(expect) + " source blocks");
  for (const nlohmann::json& word : map) {
    std::vector<int> block = parse_block(word);
    std::uint64_t rank = 0;
    for (int sym : block)
      rank = rank * static_cast<std::uint64_t>(d.repro_size) +
             static_cast<std::uint64_t>(sym);
    q.map.push_back(static_cast<std::int64_t>(rank));
  }
  q.D = j.contains("D") ? j["D"].get<double>() : -1.0;
  double achieved = -1.0;
  {
    Quantizer probe = q;
    probe.D = 0.0;  // validate() needs a finite D
    achieved = quantizer_max_distortion(probe, d);
  }
  if (q.D < 0.0)
    q.D = achieved;
  else if (q.D + 1e-9 < achieved)
    throw ParseError("quantizer: declared D below the achieved level");
  q.validate();
  return q;
}

MatFamily parse_matrix_family(const nlohmann::json& j) {
  const char* ctx = "matrix family";
  if (!j.is_object()) throw ParseError("matrix family: not a JSON object");
  const nlohmann::json& mats = field(j, "matrices", ctx);
  if (!mats.is_array() || mats.empty())
    throw ParseError("matrix family: \"matrices\" must be non-empty");
  MatFamily fam;
  int n = -1;
  for (const nlohmann::json& mj : mats) {
    if (!mj.is_array() || mj.empty())
      throw ParseError("matrix family: each matrix must be a non-empty "
                       "array of rows");
    if (n < 0) n = static_cast<int>(mj.size());
    if (static_cast<int>(mj.size()) != n)
      throw ParseError("matrix family: matrices must share one size");
    Mat m(n);
    for (int i = 0; i < n; ++i) {
      std::vector<double> row =
          parse_row(mj[i], static_cast<std::size_t>(n), ctx);
      for (int k = 0; k < n; ++k) {
        if (row[k] < 0.0)
          throw ParseError("matrix family: entries must be >= 0");
        m(i, k) = row[k];
      }
    }
    fam.mats.push_back(std::move(m));
  }
  if (j.contains("labels")) {
    fam.labels = parse_name_list(j, "labels", ctx);
    if (fam.labels.size() != fam.mats.size())
      throw ParseError("matrix family: one label per matrix");
  } else {
    for (std::size_t i = 0; i < fam.mats.size(); ++i)
      fam.labels.push_back(std::to_string(i));
  }
  return fam;
}

std::vector<int> read_sequence(const std::string& path, int alphabet_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open sequence file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  std::size_t first = content.find_first_not_of(" \t\r\n");
  std::vector<int> seq;
  if (first != std::string::npos && content[first] == '[') {
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("sequence file " + path + ": " + e.what());
    }
    for (const nlohmann::json& v : arr) {
      if (!v.is_number_integer())
        throw ParseError("sequence file " + path +
                         ": array entries must be integers");
      long long x = v.get<long long>();
      if (x < 0 || x >= alphabet_size)
        throw ParseError("sequence file " + path + ": symbol " +
                         std::to_string(x) + " outside alphabet of size " +
                         std::to_string(alphabet_size));
      seq.push_back(static_cast<int>(x));
    }
  } else {
    for (unsigned char b : content) {
      if (b >= alphabet_size)
        throw ParseError("sequence file " + path + ": byte " +
                         std::to_string(static_cast<int>(b)) +
                         " outside alphabet of size " +
                         std::to_string(alphabet_size));
      seq.push_back(static_cast<int>(b));
    }
  }
  if (seq.empty()) throw ParseError("sequence file " + path + " is empty");
  return seq;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string detect_kind(const nlohmann::json& j) {
  if (j.is_object()) {
    if (j.contains("matrices")) return "family";
    if (j.contains("si_alphabet")) return "si-encoder";
    if (j.contains("initial_prediction")) return "predictor";
    if (j.contains("map") || j.contains("codebook")) return "quantizer";
    if (j.contains("table")) return "loss";
    if (j.contains("transitions")) return "encoder";
  }
  throw ParseError("cannot infer the file kind from its fields");
}

namespace {

nlohmann::json name_list(const std::vector<int>& xs,
                         const std::vector<std::string>& names) {
  nlohmann::json a = nlohmann::json::array();
  for (int x : xs) a.push_back(names[static_cast<std::size_t>(x)]);
  return a;
}

nlohmann::json verdict_json(const ILVerdict& v,
                            const std::vector<std::string>& states,
                            const std::vector<std::string>& symbols,
                            const std::vector<std::string>* si_symbols) {
  nlohmann::json w = nullptr;
  if (v.witness) {
    w = nlohmann::json{{"start_state", states[v.witness->start_state]},
                       {"first", name_list(v.witness->first, symbols)},
                       {"second", name_list(v.witness->second, symbols)},
                       {"output", v.witness->output_bits},
                       {"final_state", states[v.witness->final_state]}};
    if (si_symbols && !v.witness->si_word.empty())
      w["si"] = name_list(v.witness->si_word, *si_symbols);
  }
  return nlohmann::json{{"checked_depth", v.checked_depth},
                        {"il_up_to_depth", v.il_up_to_depth},
                        {"budget_hit", v.budget_hit},
                        {"strings_enumerated", v.strings_enumerated},
                        {"witness", w}};
}

}  // namespace

nlohmann::json il_verdict_to_json(const ILVerdict& v, const Encoder& e) {
  return verdict_json(v, e.state_names, e.symbol_names, nullptr);
}

nlohmann::json il_verdict_to_json(const ILVerdict& v, const SIEncoder& e) {
  return verdict_json(v, e.state_names, e.symbol_names, &e.si_symbol_names);
}

nlohmann::json dyadic_matrix_to_json(const DyadicMatrix& k) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < k.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < k.size(); ++j) row.push_back(value_to_json(k.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

int symbol_index(const std::vector<std::string>& names,
                 const nlohmann::json& token, const char* what) {
  if (token.is_number_integer()) {
    long long v = token.get<long long>();
    if (v < 0 || v >= static_cast<long long>(names.size()))
      throw ParseError(std::string(what) + " index " + std::to_string(v) +
                       " out of range");
    return static_cast<int>(v);
  }
  if (token.is_string()) {
    std::string s = token.get<std::string>();
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == s) return static_cast<int>(i);
    throw ParseError(std::string(what) + " \"" + s + "\" not in alphabet");
  }
  throw ParseError(std::string(what) + " must be an index or a name");
}

}  // namespace kraftlab
