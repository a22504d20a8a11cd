#include "kraftlab/si.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "kraftlab/errors.hpp"

namespace kraftlab {

int SIEncoder::l_max() const {
  int m = 0;
  for (const Codeword& c : output) m = std::max(m, c.length());
  return m;
}

void SIEncoder::validate() const {
  if (num_states <= 0) throw DomainError("SI encoder needs at least one state");
  if (alphabet_size <= 0 || si_alphabet_size <= 0)
    throw DomainError("SI encoder needs non-empty alphabets");
  std::size_t cells = static_cast<std::size_t>(num_states) * alphabet_size *
                      si_alphabet_size;
  if (output.size() != cells || next.size() != cells)
    throw DomainError("SI encoder transition tables are not total");
  if (initial_state < 0 || initial_state >= num_states)
    throw DomainError("SI encoder initial state out of range");
  for (int z : next)
    if (z < 0 || z >= num_states)
      throw DomainError("SI encoder next-state out of range");
  for (const Codeword& c : output)
    for (char b : c.bits)
      if (b != '0' && b != '1')
        throw DomainError("SI encoder output codewords must be binary");
}

KraftFamily kraft_family(const SIEncoder& e) {
  e.validate();
  KraftFamily fam;
  fam.mats.reserve(e.si_alphabet_size);
  for (int w = 0; w < e.si_alphabet_size; ++w) {
    DyadicMatrix k(e.num_states);
    for (int z = 0; z < e.num_states; ++z)
      for (int x = 0; x < e.alphabet_size; ++x)
        k.at(z, e.step(z, x, w)) += Dyadic::half_pow(
            static_cast<std::uint64_t>(e.out(z, x, w).length()));
    fam.mats.push_back(std::move(k));
    fam.labels.push_back(e.si_symbol_names.empty()
                             ? std::to_string(w)
                             : e.si_symbol_names[w]);
  }
  return fam;
}

DyadicMatrix family_product(const KraftFamily& fam, std::span<const int> word,
                            const Budget& budget) {
  if (fam.mats.empty()) throw DomainError("family_product: empty family");
  DyadicMatrix p = DyadicMatrix::identity(fam.states());
  for (int w : word) {
    if (w < 0 || w >= static_cast<int>(fam.size()))
      throw DomainError("family_product: side symbol out of range");
    p = p * fam.mats[w];
    if (p.max_bits() > budget.max_mantissa_bits)
      throw BudgetExceeded("family product exceeded the mantissa bit budget");
  }
  return p;
}

Mat family_product(const std::vector<Mat>& fam, std::span<const int> word) {
  if (fam.empty()) throw DomainError("family_product: empty family");
  int n = fam.front().n;
  Mat p(n);
  for (int i = 0; i < n; ++i) p(i, i) = 1.0;
  for (int w : word) {
    if (w < 0 || w >= static_cast<int>(fam.size()))
      throw DomainError("family_product: side symbol out of range");
    p = mat_mul(p, fam[w]);
  }
  return p;
}

namespace {

std::vector<Mat> to_mats(const KraftFamily& fam) {
  std::vector<Mat> out;
  out.reserve(fam.size());
  for (const DyadicMatrix& k : fam.mats) out.push_back(to_mat(k));
  return out;
}

}  // namespace

JSRBracket jsr_bracket(const std::vector<Mat>& fam, int max_depth,
                       std::uint64_t seed, const Budget& budget) {
  if (fam.empty()) throw DomainError("jsr_bracket: empty family");
  int n = fam.front().n;
  for (const Mat& m : fam)
    if (m.n != n) throw DomainError("jsr_bracket: mixed matrix sizes");
  std::uint64_t t = fam.size();
  JSRBracket bracket;
  bracket.lower = 0.0;
  bracket.upper = std::numeric_limits<double>::infinity();

  // Exhaustive sweep: level d holds every product of length d, built from
  // level d-1, in lex word order.
  std::vector<Mat> level{Mat(n)};
  for (int i = 0; i < n; ++i) level[0](i, i) = 1.0;
  std::vector<std::uint64_t> level_words{0};  // packed lex ranks, depth digits
  std::uint64_t visited = 0;
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::uint64_t next_size = level.size() * t;
    if (visited + next_size > budget.max_strings || next_size > (1u << 22))
      break;
    std::vector<Mat> next_level;
    std::vector<std::uint64_t> next_words;
    next_level.reserve(next_size);
    next_words.reserve(next_size);
    double worst_norm = 0.0;
    for (std::size_t i = 0; i < level.size(); ++i)
      for (std::uint64_t w = 0; w < t; ++w) {
        Mat prod = mat_mul(level[i], fam[w]);
        double nm = inf_norm(prod);
        worst_norm = std::max(worst_norm, nm);
        double rho = spectral_radius(prod).rho;
        double root = std::pow(rho, 1.0 / depth);
        std::uint64_t word = level_words[i] * t + w;
        if (root > bracket.lower) {
          bracket.lower = root;
          bracket.lower_word.assign(depth, 0);
          std::uint64_t rest = word;
          for (int j = depth - 1; j >= 0; --j) {
            bracket.lower_word[j] = static_cast<int>(rest % t);
            rest /= t;
          }
        }
        next_level.push_back(std::move(prod));
        next_words.push_back(word);
      }
    visited += next_size;
    double upper_d = std::pow(worst_norm, 1.0 / depth);
    if (upper_d < bracket.upper) {
      bracket.upper = upper_d;
      bracket.upper_depth = depth;
    }
    bracket.exhaustive_depth = depth;
    level = std::move(next_level);
    level_words = std::move(next_words);
  }

  if (bracket.exhaustive_depth < max_depth) {
    // Sampling sharpens only the lower bound.
    bracket.sampled = true;
    const int sample_depth = 64;
    const std::uint64_t samples = 10000;
    std::mt19937_64 rng(seed);
    std::vector<int> word(sample_depth);
    for (std::uint64_t i = 0; i < samples; ++i) {
      for (int j = 0; j < sample_depth; ++j)
        word[j] = static_cast<int>(rng() % t);
      Mat prod = family_product(fam, word);
      double rho = spectral_radius(prod).rho;
      double root = std::pow(rho, 1.0 / sample_depth);
      if (root > bracket.lower) {
        bracket.lower = root;
        bracket.lower_word = word;
      }
      ++bracket.sample_count;
    }
  }
  return bracket;
}

JSRBracket jsr_bracket(const KraftFamily& fam, int max_depth,
                       std::uint64_t seed, const Budget& budget) {
  return jsr_bracket(to_mats(fam), max_depth, seed, budget);
}

SubinvariantResult find_subinvariant_vector(const std::vector<Mat>& fam,
                                            double cap, int max_iter) {
  if (fam.empty())
    throw DomainError("find_subinvariant_vector: empty family");
  int n = fam.front().n;
  for (const Mat& m : fam)
    for (double x : m.a)
      if (x < 0.0 || !std::isfinite(x))
        throw DomainError(
            "find_subinvariant_vector: entries must be finite and >= 0");
  if (cap <= 0.0) {
    // Default ceiling mirrors the uniform bound on bounded products:
    // s * 2^((s-1) * ceil(-log2 of the smallest positive entry)).
    double min_pos = std::numeric_limits<double>::infinity();
    for (const Mat& m : fam)
      for (double x : m.a)
        if (x > 0.0) min_pos = std::min(min_pos, x);
    double lmax = std::isfinite(min_pos)
                      ? std::max(0.0, std::ceil(-std::log2(min_pos)))
                      : 0.0;
    cap = static_cast<double>(n) * std::exp2(static_cast<double>(n - 1) * lmax);
  }

  SubinvariantResult res;
  std::vector<double> u(n, 1.0);
  for (int it = 1; it <= max_iter; ++it) {
    res.iterations = it;
    std::vector<double> grown = u;
    for (const Mat& m : fam) {
      std::vector<double> mu = mat_vec(m, u);
      for (int i = 0; i < n; ++i) grown[i] = std::max(grown[i], mu[i]);
    }
    double rel_step = 0.0;
    for (int i = 0; i < n; ++i)
      rel_step = std::max(rel_step, (grown[i] - u[i]) / grown[i]);
    u = std::move(grown);
    for (double x : u)
      if (x > cap) return res;  // unbounded climb, no certificate
    if (rel_step <= 1e-13) {
      double viol = 0.0;
      for (const Mat& m : fam) {
        std::vector<double> mu = mat_vec(m, u);
        for (int i = 0; i < n; ++i) viol = std::max(viol, mu[i] - u[i]);
      }
      res.max_violation = viol;
      if (viol <= 1e-12) {
        res.found = true;
        res.v = std::move(u);
      }
      return res;
    }
  }
  return res;
}

SubinvariantResult find_subinvariant_vector(const KraftFamily& fam, double cap,
                                            int max_iter) {
  return find_subinvariant_vector(to_mats(fam), cap, max_iter);
}

EncodeTrace si_encode(const SIEncoder& e, int start_state,
                      std::span<const int> xs, std::span<const int> ws) {
  e.validate();
  if (xs.size() != ws.size())
    throw DomainError("si_encode: input and side sequences differ in length");
  if (start_state < 0 || start_state >= e.num_states)
    throw DomainError("si_encode: start state out of range");
  EncodeTrace t;
  t.states.reserve(xs.size() + 1);
  t.outputs.reserve(xs.size());
  int z = start_state;
  t.states.push_back(z);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    int x = xs[i], w = ws[i];
    if (x < 0 || x >= e.alphabet_size)
      throw DomainError("si_encode: input symbol out of range");
    if (w < 0 || w >= e.si_alphabet_size)
      throw DomainError("si_encode: side symbol out of range");
    const Codeword& c = e.out(z, x, w);
    t.outputs.push_back(c);
    t.concatenated += c.bits;
    t.total_bits += c.length();
    z = e.step(z, x, w);
    t.states.push_back(z);
  }
  t.final_state = z;
  return t;
}

ILVerdict check_il_si(const SIEncoder& e, int max_depth,
                      const Budget& budget) {
  e.validate();
  ILVerdict verdict;
  if (max_depth <= 0) return verdict;
  // Joint digits d = x * si_alphabet + w keep words over (input, side)
  // pairs in one lex rank; collisions are grouped by the side projection.
  // Like the plain check, the search runs from the initial state.
  std::uint64_t joint =
      static_cast<std::uint64_t>(e.alphabet_size) * e.si_alphabet_size;
  struct LevelEntry {
    int state;
    std::string out;
  };
  std::vector<LevelEntry> prev{LevelEntry{e.initial_state, std::string()}};
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::uint64_t level_words = prev.size() * joint;
    if (verdict.strings_enumerated + level_words > budget.max_strings) {
      verdict.budget_hit = true;
      return verdict;
    }
    std::vector<LevelEntry> level;
    level.reserve(level_words);
    for (const LevelEntry& entry : prev)
      for (int x = 0; x < e.alphabet_size; ++x)
        for (int w = 0; w < e.si_alphabet_size; ++w) {
          const Codeword& c = e.out(entry.state, x, w);
          level.push_back(
              LevelEntry{e.step(entry.state, x, w), entry.out + c.bits});
        }
    verdict.strings_enumerated += level.size();
    // Collision key: side word, final state, output bits.
    std::unordered_map<std::string, std::uint64_t> first_index;
    first_index.reserve(level.size() * 2);
    for (std::uint64_t idx = 0; idx < level.size(); ++idx) {
      std::uint64_t rest = idx;
      std::string key;
      key.reserve(depth + level[idx].out.size() + 8);
      std::vector<int> side(depth);
      for (int j = depth - 1; j >= 0; --j) {
        std::uint64_t d = rest % joint;
        rest /= joint;
        side[j] = static_cast<int>(d % e.si_alphabet_size);
      }
      for (int wsym : side) key += static_cast<char>('a' + wsym);
      key.push_back('#');
      key += level[idx].out;
      key.push_back('#');
      key += std::to_string(level[idx].state);
      auto [it, inserted] = first_index.emplace(std::move(key), idx);
      if (!inserted) {
        auto input_digits = [&](std::uint64_t rank) {
          std::vector<int> xs_word(depth);
          for (int j = depth - 1; j >= 0; --j) {
            xs_word[j] =
                static_cast<int>((rank % joint) / e.si_alphabet_size);
            rank /= joint;
          }
          return xs_word;
        };
        CollisionWitness wit;
        wit.start_state = e.initial_state;
        wit.first = input_digits(it->second);
        wit.second = input_digits(idx);
        wit.final_state = level[idx].state;
        wit.output_bits = level[idx].out;
        wit.si_word = std::move(side);
        verdict.witness = std::move(wit);
        verdict.il_up_to_depth = false;
        verdict.checked_depth = depth;
        return verdict;
      }
    }
    verdict.checked_depth = depth;
    prev = std::move(level);
  }
  return verdict;
}

}  // namespace kraftlab
