// Native half of the python package. Structured inputs and results cross
// the boundary as JSON text; the package wraps them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kraftlab/converse.hpp"
#include "kraftlab/encoder.hpp"
#include "kraftlab/errors.hpp"
#include "kraftlab/io.hpp"
#include "kraftlab/kraft.hpp"
#include "kraftlab/linalg.hpp"
#include "kraftlab/lossy.hpp"
#include "kraftlab/report.hpp"
#include "kraftlab/si.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using namespace kraftlab;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

Budget make_budget(std::uint64_t max_strings) {
  Budget b;
  if (max_strings > 0) b.max_strings = max_strings;
  return b;
}

json spectral_row(const std::string& label, const SpectralReport& r,
                  int dim) {
  return json{{"label", label},
              {"dim", dim},
              {"rho", format_double(r.rho)},
              {"method", spectral_method_name(r.method)},
              {"iterations", r.iterations},
              {"residual", format_double(r.residual)}};
}

std::string py_validate(const std::string& text,
                        const std::string& loss_text) {
  json j = parse_text(text);
  std::string kind = detect_kind(j);
  json rep;
  if (kind == "encoder") {
    Encoder e = parse_encoder(j);
    rep = json{{"kind", "encoder"},
               {"valid", true},
               {"states", e.num_states},
               {"alphabet", e.alphabet_size},
               {"l_max", e.l_max()},
               {"irreducible", is_irreducible(e)},
               {"initial", e.state_names[e.initial_state]}};
  } else if (kind == "si-encoder") {
    SIEncoder e = parse_si_encoder(j);
    rep = json{{"kind", "si-encoder"},
               {"valid", true},
               {"states", e.num_states},
               {"alphabet", e.alphabet_size},
               {"si_alphabet", e.si_alphabet_size},
               {"l_max", e.l_max()},
               {"initial", e.state_names[e.initial_state]}};
  } else if (kind == "predictor") {
    PredictorSpec p = parse_predictor(j);
    rep = json{{"kind", "predictor"},
               {"valid", true},
               {"states", p.num_states},
               {"alphabet", p.alphabet_size},
               {"initial", p.state_names[p.initial_state]},
               {"initial_prediction", p.symbol_names[p.initial_prediction]}};
  } else if (kind == "quantizer") {
    if (loss_text.empty())
      throw ParseError("quantizer validation needs a distortion");
    Distortion d = parse_distortion(parse_text(loss_text));
    Quantizer q = parse_quantizer(j, d);
    rep = json{{"kind", "quantizer"},
               {"valid", true},
               {"ell", q.ell},
               {"D", format_double(q.D)},
               {"source_blocks", q.source_blocks()},
               {"reproduction_blocks", q.repro_blocks()}};
  } else if (kind == "loss") {
    Distortion d = parse_distortion(j);
    rep = json{{"kind", "loss"},
               {"valid", true},
               {"source_alphabet", d.source_size},
               {"reproduction_alphabet", d.repro_size},
               {"balanced", d.balanced()},
               {"integral", d.integral()}};
  } else {
    MatFamily f = parse_matrix_family(j);
    rep = json{{"kind", "family"},
               {"valid", true},
               {"matrices", f.mats.size()},
               {"dim", f.mats.empty() ? 0 : f.mats[0].n}};
  }
  return rep.dump();
}

std::string py_kraft(const std::string& text) {
  Encoder e = parse_encoder(parse_text(text));
  DyadicMatrix k = kraft_matrix(e);
  json row_sums = json::array();
  for (const Dyadic& r : k.row_sums()) row_sums.push_back(value_to_json(r));
  json out{{"states", e.state_names},
           {"matrix", dyadic_matrix_to_json(k)},
           {"row_sums", row_sums},
           {"rho", format_double(spectral_radius(k).rho)},
           {"irreducible", is_irreducible(e)}};
  return out.dump();
}

std::string py_matrix_power(const std::string& text, int n) {
  if (n < 0) throw DomainError("matrix power needs n >= 0");
  Encoder e = parse_encoder(parse_text(text));
  DyadicMatrix k = kraft_matrix(e);
  return dyadic_matrix_to_json(
             matrix_power(k, static_cast<std::uint64_t>(n)))
      .dump();
}

std::string py_gki(const std::string& text, const std::vector<int>& ells,
                   std::uint64_t budget) {
  Encoder e = parse_encoder(parse_text(text));
  return gki_check(e, ells, make_budget(budget)).to_json().dump();
}

std::string py_il(const std::string& text, int depth, std::uint64_t budget) {
  json j = parse_text(text);
  json out;
  if (j.is_object() && j.contains("si_alphabet")) {
    SIEncoder e = parse_si_encoder(j);
    out = il_verdict_to_json(check_il_si(e, depth, make_budget(budget)), e);
    out["kind"] = "si-encoder";
  } else {
    Encoder e = parse_encoder(j);
    out = il_verdict_to_json(check_il(e, depth, make_budget(budget)), e);
    out["kind"] = "encoder";
  }
  return out.dump();
}

std::string py_spectral(const std::string& text, double tol) {
  json j = parse_text(text);
  std::string kind = detect_kind(j);
  json rows = json::array();
  if (kind == "encoder") {
    Encoder e = parse_encoder(j);
    DyadicMatrix k = kraft_matrix(e);
    rows.push_back(spectral_row("K", spectral_radius(k, tol), k.size()));
  } else if (kind == "si-encoder") {
    KraftFamily fam = kraft_family(parse_si_encoder(j));
    for (std::size_t i = 0; i < fam.size(); ++i)
      rows.push_back(spectral_row("K(" + fam.labels[i] + ")",
                                  spectral_radius(fam.mats[i], tol),
                                  fam.mats[i].size()));
  } else if (kind == "family") {
    MatFamily f = parse_matrix_family(j);
    for (std::size_t i = 0; i < f.mats.size(); ++i)
      rows.push_back(spectral_row(
          i < f.labels.size() ? f.labels[i] : std::to_string(i),
          spectral_radius(f.mats[i], tol), f.mats[i].n));
  } else {
    throw ParseError("spectral expects an encoder, si-encoder, or family");
  }
  return json{{"kind", kind}, {"matrices", rows}}.dump();
}

std::string py_jsr(const std::string& text, int depth, std::uint64_t seed,
                   std::uint64_t budget) {
  json j = parse_text(text);
  std::string kind = detect_kind(j);
  JSRBracket br;
  SubinvariantResult sub;
  std::vector<std::string> labels;
  if (kind == "family") {
    MatFamily f = parse_matrix_family(j);
    for (std::size_t i = 0; i < f.mats.size(); ++i)
      labels.push_back(i < f.labels.size() ? f.labels[i]
                                           : std::to_string(i));
    br = jsr_bracket(f.mats, depth, seed, make_budget(budget));
    sub = find_subinvariant_vector(f.mats);
  } else if (kind == "si-encoder") {
    KraftFamily fam = kraft_family(parse_si_encoder(j));
    labels = fam.labels;
    br = jsr_bracket(fam, depth, seed, make_budget(budget));
    sub = find_subinvariant_vector(fam);
  } else {
    throw ParseError("jsr expects a matrix family or an si-encoder");
  }
  json word = json::array();
  for (int i : br.lower_word)
    word.push_back(labels[static_cast<std::size_t>(i)]);
  json subj{{"found", sub.found},
            {"iterations", sub.iterations},
            {"max_violation", format_double(sub.max_violation)}};
  if (sub.found) {
    json v = json::array();
    for (double x : sub.v) v.push_back(format_double(x));
    subj["v"] = v;
  }
  json out{{"lower", format_double(br.lower)},
           {"upper", format_double(br.upper)},
           {"lower_word", word},
           {"upper_depth", br.upper_depth},
           {"exhaustive_depth", br.exhaustive_depth},
           {"sampled", br.sampled},
           {"sample_count", br.sample_count},
           {"growth_certified", br.lower > 1.0},
           {"subinvariant", subj}};
  return out.dump();
}

std::string py_encode(const std::string& text, const std::vector<int>& xs,
                      int start) {
  Encoder e = parse_encoder(parse_text(text));
  int z1 = start < 0 ? e.initial_state : start;
  EncodeTrace t = encode(e, z1, xs);
  json states = json::array();
  for (int z : t.states)
    states.push_back(e.state_names[static_cast<std::size_t>(z)]);
  json out{{"output", t.concatenated},
           {"bits", t.total_bits},
           {"final_state", e.state_names[static_cast<std::size_t>(
                               t.final_state)]},
           {"states", states}};
  return out.dump();
}

std::string py_rate_bound(const std::string& text, const std::vector<int>& xs,
                          const std::vector<int>& ells, int start) {
  Encoder e = parse_encoder(parse_text(text));
  int z1 = start < 0 ? e.initial_state : start;
  RateBoundReport r = individual_rate_bound(e, z1, xs, ells);
  json terms = json::array();
  for (const RateBoundTerm& t : r.terms)
    terms.push_back(json{{"ell", t.ell},
                         {"cond_entropy", format_double(t.cond_entropy)},
                         {"bound", format_double(t.bound)}});
  json out{{"rate", format_double(r.rate)},
           {"bound", format_double(r.bound)},
           {"holds", r.holds},
           {"best_ell", r.best_ell},
           {"n_original", r.n_original},
           {"n_extended", r.n_extended},
           {"terms", terms}};
  return out.dump();
}

std::string py_lz78(const std::vector<int>& xs) {
  Lz78Parse p = lz78_parse(xs);
  json spans = json::array();
  for (auto [start, len] : p.phrases)
    spans.push_back(json::array({start, len}));
  json out{{"n", xs.size()},
           {"c", p.c},
           {"phrases", p.phrases.size()},
           {"last_repeats", p.last_repeats},
           {"spans", spans}};
  return out.dump();
}

double py_delta(const std::string& loss_text, double rate_bits) {
  return delta_function(parse_loss(parse_text(loss_text)), rate_bits);
}

double py_delta_hamming(int alphabet_size, double rate_bits) {
  return delta_function(LossFunction::hamming(alphabet_size), rate_bits);
}

double py_phi(const std::string& dist_text, double D) {
  return phi_of_D(parse_distortion(parse_text(dist_text)), D);
}

std::uint64_t py_ball(const std::string& dist_text,
                      const std::vector<int>& word, double D,
                      std::uint64_t budget) {
  return ball_size(parse_distortion(parse_text(dist_text)), word, D,
                   make_budget(budget));
}

std::uint64_t py_b_ell(const std::string& dist_text, int ell, double D,
                       std::uint64_t budget) {
  return b_ell(parse_distortion(parse_text(dist_text)), ell, D,
               make_budget(budget));
}

std::string py_lossy(const std::string& quant_text,
                     const std::string& coder_text,
                     const std::string& dist_text, double D,
                     std::uint64_t budget) {
  Distortion d = dist_text.empty() ? Distortion::hamming(2)
                                   : parse_distortion(parse_text(dist_text));
  Quantizer q = parse_quantizer(parse_text(quant_text), d);
  if (D >= 0.0) q.D = D;
  Encoder coder = parse_encoder(parse_text(coder_text));
  return lossy_gki_check(q, coder, d, make_budget(budget)).to_json().dump();
}

std::string py_min_sum(const std::string& text, int ell,
                       std::uint64_t budget) {
  Encoder e = parse_encoder(parse_text(text));
  Dyadic sum = min_state_kraft_sum(e, ell, make_budget(budget));
  json out = value_to_json(sum);
  out["value"] = format_double(sum.to_double());
  return out.dump();
}

std::string py_predict(const std::string& pred_text,
                       const std::vector<int>& xs,
                       const std::string& loss_text, double theta, int k) {
  PredictorSpec p = parse_predictor(parse_text(pred_text));
  LossFunction loss = loss_text.empty()
                          ? LossFunction::hamming(p.alphabet_size)
                          : parse_loss(parse_text(loss_text));
  PredictorRun run = run_predictor(p, loss, xs);
  PredictiveCodeReport code = predictive_code_length(p, loss, theta, k, xs);
  json out{{"n", xs.size()},
           {"average_loss", format_double(run.average_loss)},
           {"total_loss", format_double(run.total_loss)},
           {"bits", code.bits},
           {"ideal_bits", format_double(code.ideal_bits)},
           {"upper_bound", format_double(code.upper_bound)},
           {"bound_holds", code.bound_holds},
           {"blocks", code.blocks}};
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_kraftlab, m) {
  m.doc() = "exact Kraft-matrix analysis for finite-state encoders";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const BudgetExceeded& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    } catch (const kraftlab::Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("validate", &py_validate, py::arg("text"), py::arg("loss") = "");
  m.def("kraft", &py_kraft, py::arg("text"));
  m.def("matrix_power", &py_matrix_power, py::arg("text"), py::arg("n"));
  m.def("gki", &py_gki, py::arg("text"),
        py::arg("ells") = std::vector<int>{1, 2, 4, 8},
        py::arg("budget") = std::uint64_t{0});
  m.def("il", &py_il, py::arg("text"), py::arg("depth") = 8,
        py::arg("budget") = std::uint64_t{0});
  m.def("spectral", &py_spectral, py::arg("text"), py::arg("tol") = 1e-9);
  m.def("jsr", &py_jsr, py::arg("text"), py::arg("depth") = 8,
        py::arg("seed") = std::uint64_t{1},
        py::arg("budget") = std::uint64_t{0});
  m.def("encode", &py_encode, py::arg("text"), py::arg("xs"),
        py::arg("start") = -1);
  m.def("rate_bound", &py_rate_bound, py::arg("text"), py::arg("xs"),
        py::arg("ells") = std::vector<int>{1, 2, 4, 8},
        py::arg("start") = -1);
  m.def("lz78", &py_lz78, py::arg("xs"));
  m.def("lz_rate_bound", &lz_rate_bound, py::arg("c"), py::arg("n"),
        py::arg("ell"), py::arg("states"), py::arg("l_max"),
        py::arg("epsilon"));
  m.def("default_epsilon", &default_epsilon, py::arg("n"));
  m.def("epsilon_label", []() { return std::string(default_epsilon_label()); });
  m.def("delta", &py_delta, py::arg("loss"), py::arg("rate_bits"));
  m.def("delta_hamming", &py_delta_hamming, py::arg("alphabet_size"),
        py::arg("rate_bits"));
  m.def("phi_of_d", &py_phi, py::arg("distortion"), py::arg("D"));
  m.def("ball_size", &py_ball, py::arg("distortion"), py::arg("word"),
        py::arg("D"), py::arg("budget") = std::uint64_t{0});
  m.def("b_ell", &py_b_ell, py::arg("distortion"), py::arg("ell"),
        py::arg("D"), py::arg("budget") = std::uint64_t{0});
  m.def("lossy", &py_lossy, py::arg("quantizer"), py::arg("coder"),
        py::arg("distortion") = "", py::arg("D") = -1.0,
        py::arg("budget") = std::uint64_t{0});
  m.def("zl_baseline", &zl_baseline, py::arg("states"), py::arg("alphabet"),
        py::arg("ell"));
  m.def("min_state_kraft_sum", &py_min_sum, py::arg("text"), py::arg("ell"),
        py::arg("budget") = std::uint64_t{0});
  m.def("predictive_code", &py_predict, py::arg("text"), py::arg("xs"),
        py::arg("loss") = "", py::arg("theta") = 1.0, py::arg("k") = 8);
}
