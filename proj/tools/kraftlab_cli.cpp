// kraftlab: exact Kraft-matrix analysis for finite-state encoders.
//
// Exit codes: 0 every checked inequality holds / verdict affirmative,
// 1 an inequality fails or a collision witness exists, 2 usage or parse
// error, 3 enumeration budget exceeded. JSON reports are byte-stable for
// identical invocations: keys are sorted, floats carry 12 significant
// digits, dyadics appear as {"m", "e"}.

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
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

using nlohmann::json;

namespace {

using namespace kraftlab;

struct GlobalOpts {
  std::string format;  // "", "json", or "text"; empty means TTY-dependent
  std::uint64_t seed = 1;
  int workers = 1;
  std::uint64_t budget = 0;
  bool budget_given = false;
};

bool emit_json(const GlobalOpts& g) {
  if (g.format == "json") return true;
  if (g.format == "text") return false;
  return isatty(fileno(stdout)) == 0;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string(what) + " is not an unsigned integer: " + s);
  }
}

// Flag beats the environment, the environment beats the default.
Budget resolve_budget(const GlobalOpts& g) {
  Budget b;
  if (g.budget_given) {
    b.max_strings = g.budget;
  } else if (const char* env = std::getenv("KRAFTLAB_BUDGET")) {
    b.max_strings = parse_u64(env, "KRAFTLAB_BUDGET");
  }
  return b;
}

void print_report(const GlobalOpts& g, const json& j,
                  const std::function<void()>& text) {
  if (emit_json(g))
    std::printf("%s\n", j.dump(2).c_str());
  else
    text();
}

const char* yn(bool b) { return b ? "yes" : "no"; }

// JSON arrays may hold indices or symbol names; raw files hold one symbol
// index per byte.
std::vector<int> load_symbol_sequence(const std::string& path,
                                      const std::vector<std::string>& names,
                                      int alphabet_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open sequence file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  std::size_t first = content.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || content[first] != '[')
    return read_sequence(path, alphabet_size);

  json arr;
  try {
    arr = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ParseError("sequence file " + path + ": " + e.what());
  }
  std::vector<int> seq;
  for (const json& tok : arr) {
    int x;
    if (names.empty()) {
      if (!tok.is_number_integer())
        throw ParseError("sequence file " + path +
                         ": array entries must be integers");
      long long v = tok.get<long long>();
      if (v < 0 || v >= alphabet_size)
        throw ParseError("sequence file " + path + ": symbol " +
                         std::to_string(v) + " outside alphabet of size " +
                         std::to_string(alphabet_size));
      x = static_cast<int>(v);
    } else {
      x = symbol_index(names, tok, "sequence symbol");
    }
    seq.push_back(x);
  }
  if (seq.empty()) throw ParseError("sequence file " + path + " is empty");
  return seq;
}

int find_state(const Encoder& e, const std::string& name) {
  for (std::size_t i = 0; i < e.state_names.size(); ++i)
    if (e.state_names[i] == name) return static_cast<int>(i);
  throw ParseError("unknown state \"" + name + "\"");
}

void print_il_text(const ILVerdict& v, const json& ilj) {
  if (v.witness) {
    const json& w = ilj["witness"];
    std::printf(
        "il: collision at depth %d from %s: %s vs %s -> output \"%s\", "
        "final %s\n",
        v.checked_depth, w["start_state"].get<std::string>().c_str(),
        w["first"].dump().c_str(), w["second"].dump().c_str(),
        w["output"].get<std::string>().c_str(),
        w["final_state"].get<std::string>().c_str());
  } else if (v.budget_hit) {
    std::printf("il: budget exhausted at depth %d (%llu words), no verdict\n",
                v.checked_depth,
                static_cast<unsigned long long>(v.strings_enumerated));
  } else {
    std::printf("il: no collision to depth %d (%llu words)\n",
                v.checked_depth,
                static_cast<unsigned long long>(v.strings_enumerated));
  }
}

void print_records_text(const GKIReport& rep) {
  std::printf("%-44s %-4s %-16s %-16s %-6s %s\n", "record", "ell", "lhs",
              "rhs", "regime", "holds");
  for (const InequalityRecord& r : rep.records) {
    std::string ell = r.ell ? std::to_string(*r.ell) : "-";
    std::string lhs = format_double(value_to_double(r.lhs));
    std::string rhs = format_double(value_to_double(r.rhs));
    std::printf("%-44s %-4s %-16s %-16s %-6s %s\n", r.name.c_str(),
                ell.c_str(), lhs.c_str(), rhs.c_str(), r.regime.c_str(),
                yn(r.holds));
  }
}

bool power_within(std::uint64_t base, int exp, std::uint64_t cap,
                  std::uint64_t& out) {
  out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > cap / base) return false;
    out *= base;
  }
  return out <= cap;
}

json encoder_summary(const Encoder& e, bool irreducible) {
  return json{{"states", e.num_states},
              {"alphabet", e.alphabet_size},
              {"l_max", e.l_max()},
              {"irreducible", irreducible},
              {"initial", e.state_names[e.initial_state]}};
}

int cmd_validate(const GlobalOpts& g, const std::string& path,
                 std::string kind, const std::string& loss_path) {
  json j = load_json(path);
  if (kind == "auto") kind = detect_kind(j);
  json rep;
  std::string line;

  if (kind == "encoder") {
    Encoder e = parse_encoder(j);
    bool irr = is_irreducible(e);
    rep = encoder_summary(e, irr);
    rep["kind"] = "encoder";
    rep["valid"] = true;
    line = "valid encoder: s=" + std::to_string(e.num_states) +
           " alpha=" + std::to_string(e.alphabet_size) +
           " L_max=" + std::to_string(e.l_max()) +
           " irreducible=" + (irr ? "true" : "false") +
           " initial=" + e.state_names[e.initial_state];
  } else if (kind == "si-encoder") {
    SIEncoder e = parse_si_encoder(j);
    rep = json{{"kind", "si-encoder"},
               {"valid", true},
               {"states", e.num_states},
               {"alphabet", e.alphabet_size},
               {"si_alphabet", e.si_alphabet_size},
               {"l_max", e.l_max()},
               {"initial", e.state_names[e.initial_state]}};
    line = "valid si-encoder: s=" + std::to_string(e.num_states) +
           " alpha=" + std::to_string(e.alphabet_size) +
           " si_alpha=" + std::to_string(e.si_alphabet_size) +
           " L_max=" + std::to_string(e.l_max());
  } else if (kind == "predictor") {
    PredictorSpec p = parse_predictor(j);
    rep = json{{"kind", "predictor"},
               {"valid", true},
               {"states", p.num_states},
               {"alphabet", p.alphabet_size},
               {"initial", p.state_names[p.initial_state]},
               {"initial_prediction", p.symbol_names[p.initial_prediction]}};
    line = "valid predictor: states=" + std::to_string(p.num_states) +
           " alphabet=" + std::to_string(p.alphabet_size);
  } else if (kind == "quantizer") {
    if (loss_path.empty())
      throw ParseError("quantizer validation needs --loss <distortion file>");
    Distortion d = parse_distortion(load_json(loss_path));
    Quantizer q = parse_quantizer(j, d);
    rep = json{{"kind", "quantizer"},
               {"valid", true},
               {"ell", q.ell},
               {"D", format_double(q.D)},
               {"source_blocks", q.source_blocks()},
               {"reproduction_blocks", q.repro_blocks()}};
    line = "valid quantizer: ell=" + std::to_string(q.ell) +
           " D=" + format_double(q.D) +
           " blocks=" + std::to_string(q.source_blocks());
  } else if (kind == "loss") {
    Distortion d = parse_distortion(j);
    rep = json{{"kind", "loss"},
               {"valid", true},
               {"source_alphabet", d.source_size},
               {"reproduction_alphabet", d.repro_size},
               {"balanced", d.balanced()},
               {"integral", d.integral()}};
    line = "valid loss: alphabet=" + std::to_string(d.source_size) + "x" +
           std::to_string(d.repro_size) +
           " balanced=" + (d.balanced() ? "true" : "false");
  } else if (kind == "family") {
    MatFamily f = parse_matrix_family(j);
    int dim = f.mats.empty() ? 0 : f.mats[0].n;
    rep = json{{"kind", "family"},
               {"valid", true},
               {"matrices", f.mats.size()},
               {"dim", dim}};
    line = "valid family: " + std::to_string(f.mats.size()) +
           " matrices, dim " + std::to_string(dim);
  } else {
    throw ParseError("unknown kind " + kind);
  }

  print_report(g, rep, [&] { std::printf("%s\n", line.c_str()); });
  return 0;
}

int cmd_gki(const GlobalOpts& g, const std::string& path,
            const std::vector<int>& ells, int il_depth) {
  Encoder e = parse_encoder(load_json(path));
  Budget budget = resolve_budget(g);
  bool irr = is_irreducible(e);

  GKIReport rep = gki_check(e, ells, budget);
  ILVerdict il = check_il(e, il_depth, budget);

  json zl = json::array();
  for (int ell : ells) {
    double base = zl_baseline(e.num_states, e.alphabet_size, ell);
    json row{{"ell", ell}, {"baseline", format_double(base)}};
    std::uint64_t words = 0;
    if (power_within(static_cast<std::uint64_t>(e.alphabet_size), ell,
                     budget.max_strings, words)) {
      Dyadic sum = min_state_kraft_sum(e, ell, budget);
      row["min_state_kraft_sum"] = value_to_json(sum);
      row["below_baseline"] = sum.to_double() < base;
    } else {
      row["skipped"] = "budget";
    }
    zl.push_back(row);
  }

  bool holds = rep.all_hold() && !il.witness.has_value();
  json out{{"encoder", encoder_summary(e, irr)},
           {"gki", rep.to_json()},
           {"il", il_verdict_to_json(il, e)},
           {"zl_baseline", zl},
           {"all_hold", holds}};

  print_report(g, out, [&] {
    std::printf("encoder: states=%d alphabet=%d L_max=%d irreducible=%s\n",
                e.num_states, e.alphabet_size, e.l_max(), yn(irr));
    const json& sp = rep.context["spectral"];
    std::printf("spectral: rho=%s method=%s iterations=%d residual=%s\n",
                sp["rho"].get<std::string>().c_str(),
                sp["method"].get<std::string>().c_str(),
                sp["iterations"].get<int>(),
                sp["residual"].get<std::string>().c_str());
    print_records_text(rep);
    print_il_text(il, out["il"]);
    for (const json& row : zl) {
      if (row.contains("skipped")) {
        std::printf("zl: ell=%d baseline=%s skipped (budget)\n",
                    row["ell"].get<int>(),
                    row["baseline"].get<std::string>().c_str());
      } else {
        Dyadic sum(0);
        std::printf("zl: ell=%d min_sum=%s baseline=%s below=%s\n",
                    row["ell"].get<int>(),
                    (row["min_state_kraft_sum"]["m"].get<std::string>() +
                     "/2^" +
                     std::to_string(row["min_state_kraft_sum"]["e"].get<long long>()))
                        .c_str(),
                    row["baseline"].get<std::string>().c_str(),
                    yn(row["below_baseline"].get<bool>()));
      }
    }
    std::printf("verdict: %s\n", holds ? "holds" : "fails");
  });

  if (!holds) return 1;
  if (il.budget_hit) return 3;
  return 0;
}

int cmd_il_check(const GlobalOpts& g, const std::string& path, int depth) {
  json j = load_json(path);
  Budget budget = resolve_budget(g);
  ILVerdict v;
  json out;
  if (j.contains("si_alphabet")) {
    SIEncoder e = parse_si_encoder(j);
    v = check_il_si(e, depth, budget);
    out = il_verdict_to_json(v, e);
    out["kind"] = "si-encoder";
  } else {
    Encoder e = parse_encoder(j);
    v = check_il(e, depth, budget);
    out = il_verdict_to_json(v, e);
    out["kind"] = "encoder";
  }
  print_report(g, out, [&] { print_il_text(v, out); });
  if (v.witness) return 1;
  if (v.budget_hit) return 3;
  return 0;
}

int cmd_spectral(const GlobalOpts& g, const std::string& path, double tol) {
  json j = load_json(path);
  std::string kind = detect_kind(j);
  json rows = json::array();

  auto add_row = [&](const std::string& label, const SpectralReport& r,
                     int dim) {
    rows.push_back(json{{"label", label},
                        {"dim", dim},
                        {"rho", format_double(r.rho)},
                        {"method", spectral_method_name(r.method)},
                        {"iterations", r.iterations},
                        {"residual", format_double(r.residual)}});
  };

  if (kind == "encoder") {
    Encoder e = parse_encoder(j);
    DyadicMatrix k = kraft_matrix(e);
    add_row("K", spectral_radius(k, tol), k.size());
  } else if (kind == "si-encoder") {
    SIEncoder e = parse_si_encoder(j);
    KraftFamily fam = kraft_family(e);
    for (std::size_t i = 0; i < fam.size(); ++i)
      add_row("K(" + fam.labels[i] + ")", spectral_radius(fam.mats[i], tol),
              fam.mats[i].size());
  } else if (kind == "family") {
    MatFamily f = parse_matrix_family(j);
    for (std::size_t i = 0; i < f.mats.size(); ++i) {
      std::string label =
          i < f.labels.size() ? f.labels[i] : std::to_string(i);
      add_row(label, spectral_radius(f.mats[i], tol), f.mats[i].n);
    }
  } else {
    throw ParseError("spectral expects an encoder, si-encoder, or family");
  }

  json out{{"kind", kind}, {"matrices", rows}};
  print_report(g, out, [&] {
    for (const json& r : rows)
      std::printf("rho(%s) = %s  method=%s iterations=%d residual=%s\n",
                  r["label"].get<std::string>().c_str(),
                  r["rho"].get<std::string>().c_str(),
                  r["method"].get<std::string>().c_str(),
                  r["iterations"].get<int>(),
                  r["residual"].get<std::string>().c_str());
  });
  return 0;
}

int cmd_jsr(const GlobalOpts& g, const std::string& path, int depth) {
  json j = load_json(path);
  Budget budget = resolve_budget(g);
  std::string kind = detect_kind(j);

  JSRBracket br;
  SubinvariantResult sub;
  std::vector<std::string> labels;
  if (kind == "family") {
    MatFamily f = parse_matrix_family(j);
    for (std::size_t i = 0; i < f.mats.size(); ++i)
      labels.push_back(i < f.labels.size() ? f.labels[i] : std::to_string(i));
    br = jsr_bracket(f.mats, depth, g.seed, budget);
    sub = find_subinvariant_vector(f.mats);
  } else if (kind == "si-encoder") {
    SIEncoder e = parse_si_encoder(j);
    KraftFamily fam = kraft_family(e);
    labels = fam.labels;
    br = jsr_bracket(fam, depth, g.seed, budget);
    sub = find_subinvariant_vector(fam);
  } else {
    throw ParseError("jsr expects a matrix family or an si-encoder");
  }

  json word = json::array();
  for (int i : br.lower_word) word.push_back(labels[static_cast<size_t>(i)]);
  json subj{{"found", sub.found},
            {"iterations", sub.iterations},
            {"max_violation", format_double(sub.max_violation)}};
  if (sub.found) {
    json v = json::array();
    for (double x : sub.v) v.push_back(format_double(x));
    subj["v"] = v;
  }
  bool growth = br.lower > 1.0;
  json out{{"lower", format_double(br.lower)},
           {"upper", format_double(br.upper)},
           {"lower_word", word},
           {"upper_depth", br.upper_depth},
           {"exhaustive_depth", br.exhaustive_depth},
           {"sampled", br.sampled},
           {"sample_count", br.sample_count},
           {"growth_certified", growth},
           {"subinvariant", subj}};

  print_report(g, out, [&] {
    std::printf("jsr in [%s, %s], lower word %s (exhaustive to depth %d%s)\n",
                format_double(br.lower).c_str(),
                format_double(br.upper).c_str(), word.dump().c_str(),
                br.exhaustive_depth,
                br.sampled ? ", then sampled" : "");
    if (sub.found)
      std::printf("subinvariant vector found after %d iterations\n",
                  sub.iterations);
    else
      std::printf("no subinvariant vector (max violation %s)\n",
                  format_double(sub.max_violation).c_str());
    std::printf("verdict: %s\n",
                growth ? "products grow, not IL-compatible" : "no growth certified");
  });
  return growth ? 1 : 0;
}

int cmd_bounds(const GlobalOpts& g, const std::string& enc_path,
               const std::string& seq_path, const std::vector<int>& ells,
               const std::string& start) {
  Encoder e = parse_encoder(load_json(enc_path));
  std::vector<int> xs =
      load_symbol_sequence(seq_path, e.symbol_names, e.alphabet_size);
  int z1 = start.empty() ? e.initial_state : find_state(e, start);

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

  print_report(g, out, [&] {
    std::printf("rate %s bits/symbol over n=%lld (+%lld cyclic return)\n",
                format_double(r.rate).c_str(), r.n_original,
                r.n_extended - r.n_original);
    for (const RateBoundTerm& t : r.terms)
      std::printf("  ell=%d H=%s bound=%s\n", t.ell,
                  format_double(t.cond_entropy).c_str(),
                  format_double(t.bound).c_str());
    std::printf("best bound %s at ell=%d: %s\n",
                format_double(r.bound).c_str(), r.best_ell,
                r.holds ? "holds" : "VIOLATED");
  });
  return r.holds ? 0 : 1;
}

int cmd_lz(const GlobalOpts& g, const std::string& seq_path, int alpha,
           int num_states, int l_max, int ell, std::optional<double> eps_opt) {
  int cap = alpha > 0 ? alpha : 256;
  std::vector<int> xs = load_symbol_sequence(seq_path, {}, cap);
  Lz78Parse p = lz78_parse(xs);
  long long n = static_cast<long long>(xs.size());

  double eps;
  std::string eps_label;
  if (eps_opt) {
    eps = *eps_opt;
    eps_label = "user-supplied";
  } else {
    eps = default_epsilon(n);
    eps_label = default_epsilon_label();
  }
  double bound = lz_rate_bound(p.c, n, ell, num_states, l_max, eps);

  json out{{"n", n},
           {"c", p.c},
           {"phrases", p.phrases.size()},
           {"last_repeats", p.last_repeats},
           {"epsilon", format_double(eps)},
           {"epsilon_label", eps_label},
           {"ell", ell},
           {"states", num_states},
           {"l_max", l_max},
           {"rate_bound", format_double(bound)}};

  print_report(g, out, [&] {
    std::printf("n=%lld c=%lld phrases=%zu last_repeats=%s\n", n, p.c,
                p.phrases.size(), yn(p.last_repeats));
    std::printf("epsilon=%s (%s)\n", format_double(eps).c_str(),
                eps_label.c_str());
    std::printf("rate bound for %d-state L_max=%d encoders at ell=%d: %s\n",
                num_states, l_max, ell, format_double(bound).c_str());
  });
  return 0;
}

int cmd_predict(const GlobalOpts& g, const std::string& pred_path,
                const std::string& seq_path, const std::string& loss_path,
                double theta, int k) {
  PredictorSpec p = parse_predictor(load_json(pred_path));
  LossFunction loss = loss_path.empty()
                          ? LossFunction::hamming(p.alphabet_size)
                          : parse_loss(load_json(loss_path));
  if (loss.alphabet_size != p.alphabet_size)
    throw ParseError("loss alphabet size " +
                     std::to_string(loss.alphabet_size) +
                     " does not match the predictor's " +
                     std::to_string(p.alphabet_size));
  std::vector<int> xs =
      load_symbol_sequence(seq_path, p.symbol_names, p.alphabet_size);

  PredictorRun run = run_predictor(p, loss, xs);
  PredictiveCodeReport code = predictive_code_length(p, loss, theta, k, xs);
  double rate =
      static_cast<double>(code.bits) / static_cast<double>(xs.size());

  json out{{"predictor", json{{"states", p.num_states},
                              {"alphabet", p.alphabet_size}}},
           {"n", xs.size()},
           {"theta", format_double(theta)},
           {"k", k},
           {"average_loss", format_double(run.average_loss)},
           {"total_loss", format_double(run.total_loss)},
           {"code", json{{"bits", code.bits},
                         {"ideal_bits", format_double(code.ideal_bits)},
                         {"upper_bound", format_double(code.upper_bound)},
                         {"bound_holds", code.bound_holds},
                         {"blocks", code.blocks}}},
           {"rate", format_double(rate)}};
  // Delta diverges above log2(alphabet); report the finite endpoint there.
  double delta_rate =
      std::min(rate, std::log2(static_cast<double>(loss.alphabet_size)));
  if (loss.balanced()) {
    out["delta_rate"] = format_double(delta_rate);
    out["delta_at_rate"] = format_double(delta_function(loss, delta_rate));
  }

  print_report(g, out, [&] {
    std::printf("n=%zu average_loss=%s\n", xs.size(),
                format_double(run.average_loss).c_str());
    std::printf("code: bits=%lld ideal=%s upper=%s (%s), rate=%s\n",
                code.bits, format_double(code.ideal_bits).c_str(),
                format_double(code.upper_bound).c_str(),
                code.bound_holds ? "holds" : "VIOLATED",
                format_double(rate).c_str());
    if (out.contains("delta_at_rate"))
      std::printf("loss floor Delta(%s) = %s\n",
                  out["delta_rate"].get<std::string>().c_str(),
                  out["delta_at_rate"].get<std::string>().c_str());
  });
  return code.bound_holds ? 0 : 1;
}

int cmd_lossy(const GlobalOpts& g, const std::string& quant_path,
              const std::string& coder_path, const std::string& loss_path,
              std::optional<double> d_override) {
  Budget budget = resolve_budget(g);
  Distortion d = loss_path.empty() ? Distortion::hamming(2)
                                   : parse_distortion(load_json(loss_path));
  Quantizer q = parse_quantizer(load_json(quant_path), d);
  if (d_override) q.D = *d_override;
  Encoder coder = parse_encoder(load_json(coder_path));

  GKIReport rep = lossy_gki_check(q, coder, d, budget);
  bool holds = rep.all_hold();
  json out{{"report", rep.to_json()}, {"all_hold", holds}};

  print_report(g, out, [&] {
    const json& ctx = rep.context;
    std::printf("ell=%d D=%s ball_bound=%llu phi=%s\n", q.ell,
                ctx["D"].get<std::string>().c_str(),
                static_cast<unsigned long long>(
                    ctx["ball_bound"].get<std::uint64_t>()),
                ctx["phi"].get<std::string>().c_str());
    print_records_text(rep);
    std::printf("verdict: %s\n", holds ? "holds" : "fails");
  });
  return holds ? 0 : 1;
}

int cmd_baseline(const GlobalOpts& g, int num_states, int alpha,
                 const std::vector<int>& ells, const std::string& path) {
  Budget budget = resolve_budget(g);
  std::optional<Encoder> e;
  if (!path.empty()) {
    e = parse_encoder(load_json(path));
    num_states = e->num_states;
    alpha = e->alphabet_size;
  }

  json rows = json::array();
  for (int ell : ells) {
    double base = zl_baseline(num_states, alpha, ell);
    json row{{"ell", ell}, {"baseline", format_double(base)}};
    if (e) {
      std::uint64_t words = 0;
      if (power_within(static_cast<std::uint64_t>(alpha), ell,
                       budget.max_strings, words)) {
        Dyadic sum = min_state_kraft_sum(*e, ell, budget);
        row["min_state_kraft_sum"] = value_to_json(sum);
        row["below_baseline"] = sum.to_double() < base;
      } else {
        row["skipped"] = "budget";
      }
    }
    rows.push_back(row);
  }

  json out{{"states", num_states}, {"alphabet", alpha}, {"rows", rows}};
  print_report(g, out, [&] {
    std::printf("states=%d alphabet=%d\n", num_states, alpha);
    for (const json& row : rows) {
      if (row.contains("min_state_kraft_sum")) {
        std::printf("ell=%d baseline=%s min_sum=%s below=%s\n",
                    row["ell"].get<int>(),
                    row["baseline"].get<std::string>().c_str(),
                    format_double(
                        Dyadic::from_mantissa_exp(
                            mpz_class(row["min_state_kraft_sum"]["m"]
                                          .get<std::string>()),
                            row["min_state_kraft_sum"]["e"]
                                .get<std::uint64_t>())
                            .to_double())
                        .c_str(),
                    yn(row["below_baseline"].get<bool>()));
      } else if (row.contains("skipped")) {
        std::printf("ell=%d baseline=%s skipped (budget)\n",
                    row["ell"].get<int>(),
                    row["baseline"].get<std::string>().c_str());
      } else {
        std::printf("ell=%d baseline=%s\n", row["ell"].get<int>(),
                    row["baseline"].get<std::string>().c_str());
      }
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts g;
  CLI::App app{"exact Kraft-matrix analysis for finite-state encoders"};
  app.require_subcommand(1);
  app.add_option("--format", g.format, "report format (default: text on a TTY, json otherwise)")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", g.seed, "seed for sampled searches (default 1)");
  app.add_option("--workers", g.workers, "worker threads (reserved)")
      ->check(CLI::PositiveNumber);
  auto* budget_opt = app.add_option(
      "--budget", g.budget,
      "enumeration budget in strings (default 2^24, env KRAFTLAB_BUDGET)");

  std::string v_path, v_kind = "auto", v_loss;
  auto* validate = app.add_subcommand(
      "validate", "parse a file and report its parameters");
  validate->add_option("file", v_path, "input file")->required();
  validate->add_option("--kind", v_kind, "file kind (default: inferred)")
      ->check(CLI::IsMember({"auto", "encoder", "si-encoder", "predictor",
                             "quantizer", "loss", "family"}));
  validate->add_option("--loss", v_loss,
                       "distortion file, needed to resolve a quantizer");

  std::string g_path;
  std::vector<int> g_ells{1, 2, 4, 8};
  int g_depth = 8;
  auto* gki = app.add_subcommand(
      "gki", "run every generalized Kraft inequality on an encoder");
  gki->add_option("file", g_path, "encoder file")->required();
  gki->add_option("--lmax-powers", g_ells,
                  "block lengths for the power inequalities");
  gki->add_option("--il-depth", g_depth, "exhaustive collision-search depth");

  std::string i_path;
  int i_depth = 8;
  auto* il = app.add_subcommand(
      "il-check", "exhaustive collision search from the initial state");
  il->add_option("file", i_path, "encoder or si-encoder file")->required();
  il->add_option("--depth", i_depth, "maximum input length");

  std::string s_path;
  double s_tol = 1e-9;
  auto* spectral =
      app.add_subcommand("spectral", "spectral radius of Kraft matrices");
  spectral->add_option("file", s_path, "encoder, si-encoder, or family file")
      ->required();
  spectral->add_option("--tol", s_tol, "relative tolerance");

  std::string j_path;
  int j_depth = 8;
  auto* jsr = app.add_subcommand(
      "jsr", "joint-spectral-radius bracket and boundedness certificate");
  jsr->add_option("file", j_path, "matrix family or si-encoder file")
      ->required();
  jsr->add_option("--depth", j_depth, "deepest product length inspected");

  std::string b_enc, b_seq, b_start;
  std::vector<int> b_ells{1, 2, 4, 8};
  auto* bounds = app.add_subcommand(
      "bounds", "individual-sequence compression-rate floor");
  bounds->add_option("encoder", b_enc, "encoder file")->required();
  bounds->add_option("sequence", b_seq, "sequence file")->required();
  bounds->add_option("--ell", b_ells, "window lengths");
  bounds->add_option("--start", b_start, "start state (default: initial)");

  std::string l_seq;
  int l_alpha = 0, l_states = 1, l_lmax = 1, l_ell = 8;
  double l_eps = 0.0;
  auto* lz = app.add_subcommand(
      "lz", "incremental parse and the phrase-count rate floor");
  lz->add_option("sequence", l_seq, "sequence file")->required();
  lz->add_option("--alpha", l_alpha,
                 "alphabet size (default: 256 for raw bytes)");
  lz->add_option("--s", l_states, "encoder states the floor applies to");
  lz->add_option("--lmax", l_lmax, "encoder L_max the floor applies to");
  lz->add_option("--ell", l_ell, "window length in the deficit term");
  auto* lz_eps = lz->add_option("--epsilon", l_eps,
                                "vanishing term (default: heuristic model)");

  std::string p_pred, p_seq, p_loss;
  double p_theta = 1.0;
  int p_k = 8;
  auto* predict = app.add_subcommand(
      "predict", "run a predictor and bound its predictive code length");
  predict->add_option("predictor", p_pred, "predictor file")->required();
  predict->add_option("sequence", p_seq, "sequence file")->required();
  predict->add_option("--loss", p_loss, "loss file (default: Hamming)");
  predict->add_option("--theta", p_theta, "tilt temperature");
  predict->add_option("--k", p_k, "block length");

  std::string y_quant, y_coder, y_loss;
  double y_d = 0.0;
  auto* lossy = app.add_subcommand(
      "lossy", "Kraft chain for a quantize-then-code scheme");
  lossy->add_option("quantizer", y_quant, "quantizer file")->required();
  lossy->add_option("coder", y_coder, "reproduction coder file")->required();
  lossy->add_option("--loss", y_loss,
                    "distortion file (default: binary Hamming)");
  auto* lossy_d = lossy->add_option("--D", y_d, "distortion level override");

  std::string base_path;
  int base_s = 1, base_alpha = 2;
  std::vector<int> base_ells{1, 2, 4, 8};
  auto* baseline = app.add_subcommand(
      "baseline", "state-oblivious Kraft-sum baseline values");
  baseline->add_option("file", base_path,
                       "encoder file (adds the enumerated minimum sum)");
  baseline->add_option("--s", base_s, "state count");
  baseline->add_option("--alpha", base_alpha, "alphabet size");
  baseline->add_option("--ell", base_ells, "block lengths");

  for (CLI::App* sub : app.get_subcommands({}))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  g.budget_given = budget_opt->count() > 0;

  try {
    if (*validate) return cmd_validate(g, v_path, v_kind, v_loss);
    if (*gki) return cmd_gki(g, g_path, g_ells, g_depth);
    if (*il) return cmd_il_check(g, i_path, i_depth);
    if (*spectral) return cmd_spectral(g, s_path, s_tol);
    if (*jsr) return cmd_jsr(g, j_path, j_depth);
    if (*bounds) return cmd_bounds(g, b_enc, b_seq, b_ells, b_start);
    if (*lz)
      return cmd_lz(g, l_seq, l_alpha, l_states, l_lmax, l_ell,
                    lz_eps->count() ? std::optional<double>(l_eps)
                                    : std::nullopt);
    if (*predict)
      return cmd_predict(g, p_pred, p_seq, p_loss, p_theta, p_k);
    if (*lossy)
      return cmd_lossy(g, y_quant, y_coder, y_loss,
                       lossy_d->count() ? std::optional<double>(y_d)
                                        : std::nullopt);
    if (*baseline)
      return cmd_baseline(g, base_s, base_alpha, base_ells, base_path);
  } catch (const BudgetExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const kraftlab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
