#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kraftlab/converse.hpp"
#include "kraftlab/encoder.hpp"
#include "kraftlab/linalg.hpp"
#include "kraftlab/lossy.hpp"
#include "kraftlab/si.hpp"

namespace kraftlab {

/// Encoder description:
///   {"alphabet": [...], "states": [...], "initial": "...",
///    "transitions": [{"state", "symbol", "output", "next"}, ...]}
/// Transitions must cover every (state, symbol) pair exactly once; outputs
/// are binary strings, possibly empty. Every parse error names the offender.
Encoder parse_encoder(const nlohmann::json& j);
nlohmann::json encoder_to_json(const Encoder& e);

/// Same schema plus "si_alphabet" and a per-transition "si" field; coverage
/// is over (state, symbol, si) triples.
SIEncoder parse_si_encoder(const nlohmann::json& j);

/// Predictor description: transitions carry "predict" instead of "output",
/// and the top level adds "initial_prediction".
PredictorSpec parse_predictor(const nlohmann::json& j);

/// Distortion: {"alphabet": [...], "reproduction_alphabet": [...]?,
/// "table": [[...], ...]} with rows indexed by source symbol. The
/// reproduction alphabet defaults to the source alphabet.
Distortion parse_distortion(const nlohmann::json& j);

/// Loss table for prediction: {"alphabet": [...], "table": [[...], ...]}.
LossFunction parse_loss(const nlohmann::json& j);

/// Quantizer, resolved against a distortion:
///   {"ell": k, "map": [[sym, ...], ...]}        explicit block map, entry
///                                               i is the reproduction word
///                                               of the rank-i source block
///   {"ell": k, "codebook": [[sym, ...], ...]}   nearest-codeword rule
/// "D" optionally pins the declared distortion level; with a map it
/// defaults to the worst achieved block distortion.
Quantizer parse_quantizer(const nlohmann::json& j, const Distortion& d);

/// Matrix family: {"labels": [...]?, "matrices": [[[...], ...], ...]}.
struct MatFamily {
  std::vector<Mat> mats;
  std::vector<std::string> labels;
};
MatFamily parse_matrix_family(const nlohmann::json& j);

/// Sequence file: JSON array of symbol indices when the first non-blank
/// byte is '[', otherwise raw bytes, each byte being one symbol index.
/// Every value must lie below alphabet_size.
std::vector<int> read_sequence(const std::string& path, int alphabet_size);

nlohmann::json load_json(const std::string& path);

/// Which schema a document follows, judged by its distinguishing fields:
/// "family", "si-encoder", "predictor", "quantizer", "loss", or "encoder".
/// Throws ParseError when none match.
std::string detect_kind(const nlohmann::json& j);

/// Collision verdict with states and symbols rendered by name. The witness
/// field is null when no collision was found.
nlohmann::json il_verdict_to_json(const ILVerdict& v, const Encoder& e);
nlohmann::json il_verdict_to_json(const ILVerdict& v, const SIEncoder& e);

/// Entries as {"m", "e"} objects, row-major.
nlohmann::json dyadic_matrix_to_json(const DyadicMatrix& k);

/// Symbol indices of a sequence against an encoder's symbol names, used by
/// JSON sequences holding names instead of indices.
int symbol_index(const std::vector<std::string>& names,
                 const nlohmann::json& token, const char* what);

}  // namespace kraftlab
