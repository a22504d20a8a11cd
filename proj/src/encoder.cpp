#include "kraftlab/encoder.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "kraftlab/errors.hpp"

namespace kraftlab {

int Encoder::l_max() const {
  int m = 0;
  for (const Codeword& c : output) m = std::max(m, c.length());
  return m;
}

void Encoder::validate() const {
  if (num_states <= 0) throw DomainError("encoder needs at least one state");
  if (alphabet_size <= 0)
    throw DomainError("encoder needs a non-empty input alphabet");
  std::size_t cells =
      static_cast<std::size_t>(num_states) * alphabet_size;
  if (output.size() != cells || next.size() != cells)
    throw DomainError("encoder transition tables are not total");
  if (initial_state < 0 || initial_state >= num_states)
    throw DomainError("encoder initial state out of range");
  for (int z : next)
    if (z < 0 || z >= num_states)
      throw DomainError("encoder next-state out of range");
  for (const Codeword& c : output)
    for (char b : c.bits)
      if (b != '0' && b != '1')
        throw DomainError("encoder output codewords must be binary");
}

EncodeTrace encode(const Encoder& e, int start_state,
                   std::span<const int> xs) {
  if (start_state < 0 || start_state >= e.num_states)
    throw DomainError("encode: start state out of range");
  EncodeTrace t;
  t.states.reserve(xs.size() + 1);
  t.outputs.reserve(xs.size());
  int z = start_state;
  t.states.push_back(z);
  for (int x : xs) {
    if (x < 0 || x >= e.alphabet_size)
      throw DomainError("encode: input symbol out of range");
    const Codeword& c = e.out(z, x);
    t.outputs.push_back(c);
    t.concatenated += c.bits;
    t.total_bits += c.length();
    z = e.step(z, x);
    t.states.push_back(z);
  }
  t.final_state = z;
  return t;
}

bool is_irreducible(const Encoder& e) {
  auto reach_all = [&e](auto neighbor_pass) {
    std::vector<char> seen(e.num_states, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
      int z = queue.front();
      queue.pop_front();
      neighbor_pass(z, [&](int w) {
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          queue.push_back(w);
        }
      });
    }
    return count == e.num_states;
  };
  auto forward = [&e](int z, auto visit) {
    for (int x = 0; x < e.alphabet_size; ++x) visit(e.step(z, x));
  };
  auto backward = [&e](int w, auto visit) {
    for (int z = 0; z < e.num_states; ++z)
      for (int x = 0; x < e.alphabet_size; ++x)
        if (e.step(z, x) == w) visit(z);
  };
  return reach_all(forward) && reach_all(backward);
}

std::vector<int> shortest_path_input(const Encoder& e, int from, int to) {
  if (from < 0 || from >= e.num_states || to < 0 || to >= e.num_states)
    throw DomainError("shortest_path_input: state out of range");
  if (from == to) return {};
  // BFS expanding symbols in ascending order visits states in order of
  // (path length, path lex rank), so the first arrival is the answer.
  std::vector<int> prev_state(e.num_states, -1);
  std::vector<int> prev_symbol(e.num_states, -1);
  std::vector<char> seen(e.num_states, 0);
  std::deque<int> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    int z = queue.front();
    queue.pop_front();
    for (int x = 0; x < e.alphabet_size; ++x) {
      int w = e.step(z, x);
      if (seen[w]) continue;
      seen[w] = 1;
      prev_state[w] = z;
      prev_symbol[w] = x;
      if (w == to) {
        std::vector<int> path;
        for (int cur = to; cur != from; cur = prev_state[cur])
          path.push_back(prev_symbol[cur]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  throw DomainError("shortest_path_input: target state unreachable");
}

CyclicExtension cyclic_extend(const Encoder& e, int start_state,
                              std::span<const int> xs) {
  EncodeTrace t = encode(e, start_state, xs);
  std::vector<int> back = shortest_path_input(e, t.final_state, start_state);
  CyclicExtension ext;
  ext.extended.assign(xs.begin(), xs.end());
  ext.extended.insert(ext.extended.end(), back.begin(), back.end());
  ext.added = static_cast<int>(back.size());
  return ext;
}

namespace {

struct LevelEntry {
  int state;
  std::string out;
};

// Big-endian base-alpha digits of idx, width n.
std::vector<int> unpack_word(std::uint64_t idx, int alpha, int n) {
  std::vector<int> w(n);
  for (int i = n - 1; i >= 0; --i) {
    w[i] = static_cast<int>(idx % alpha);
    idx /= alpha;
  }
  return w;
}

}  // namespace

ILVerdict check_il(const Encoder& e, int max_depth, const Budget& budget) {
  e.validate();
  ILVerdict verdict;
  if (max_depth <= 0) return verdict;
  std::uint64_t alpha = static_cast<std::uint64_t>(e.alphabet_size);
  // prev[idx] is the trace of the depth-(n-1) word with lex rank idx, run
  // from the initial state. Depths are explored outermost so the first
  // witness found has minimal depth.
  std::vector<LevelEntry> prev{LevelEntry{e.initial_state, std::string()}};
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::uint64_t level_words = prev.size() * alpha;
    if (verdict.strings_enumerated + level_words > budget.max_strings) {
      verdict.budget_hit = true;
      return verdict;
    }
    std::vector<LevelEntry> level;
    level.reserve(level_words);
    for (const LevelEntry& entry : prev) {
      for (int x = 0; x < e.alphabet_size; ++x) {
        const Codeword& c = e.out(entry.state, x);
        level.push_back(
            LevelEntry{e.step(entry.state, x), entry.out + c.bits});
      }
    }
    verdict.strings_enumerated += level.size();
    // Key: final state and full output string. Two words sharing both are
    // indistinguishable.
    std::unordered_map<std::string, std::uint64_t> first_index;
    first_index.reserve(level.size() * 2);
    for (std::uint64_t idx = 0; idx < level.size(); ++idx) {
      std::string key = level[idx].out;
      key.push_back('#');
      key += std::to_string(level[idx].state);
      auto [it, inserted] = first_index.emplace(std::move(key), idx);
      if (!inserted) {
        CollisionWitness w;
        w.start_state = e.initial_state;
        w.first = unpack_word(it->second, e.alphabet_size, depth);
        w.second = unpack_word(idx, e.alphabet_size, depth);
        w.final_state = level[idx].state;
        w.output_bits = level[idx].out;
        verdict.witness = std::move(w);
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

Encoder build_block_encoder(int alphabet_size, int k,
                            const std::vector<Codeword>& codebook) {
  if (alphabet_size <= 0 || k <= 0)
    throw DomainError("block encoder needs alphabet_size >= 1 and k >= 1");
  std::uint64_t blocks = 1;
  for (int i = 0; i < k; ++i) {
    blocks *= static_cast<std::uint64_t>(alphabet_size);
    if (blocks > (std::uint64_t{1} << 32))
      throw DomainError("block encoder: alphabet_size^k too large");
  }
  if (codebook.size() != blocks)
    throw DomainError("block encoder: codebook must have alphabet_size^k "
                      "entries");
  // States are alpha-ary prefixes of length < k, ordered by length then lex.
  // id(prefix of length d, value v) = (alpha^d - 1)/(alpha - 1) + v;
  // offset[d] counts the prefixes shorter than d.
  std::vector<std::uint64_t> offset(k + 1, 0);
  std::uint64_t pow = 1;
  for (int d = 1; d <= k; ++d) {
    offset[d] = offset[d - 1] + pow;
    pow *= static_cast<std::uint64_t>(alphabet_size);
  }
  std::uint64_t num_states = offset[k];
  Encoder e;
  e.num_states = static_cast<int>(num_states);
  e.alphabet_size = alphabet_size;
  e.initial_state = 0;
  e.output.resize(num_states * alphabet_size);
  e.next.resize(num_states * alphabet_size);
  e.state_names.resize(num_states);
  e.symbol_names.resize(alphabet_size);
  for (int x = 0; x < alphabet_size; ++x)
    e.symbol_names[x] = std::to_string(x);
  e.state_names[0] = "start";
  for (int d = 0; d < k; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= alphabet_size;
    for (std::uint64_t v = 0; v < count; ++v) {
      std::uint64_t id = offset[d] + v;
      if (d > 0) {
        std::string name;
        std::vector<int> digits = unpack_word(v, alphabet_size, d);
        for (int dig : digits) name += std::to_string(dig);
        e.state_names[id] = name;
      }
      for (int x = 0; x < alphabet_size; ++x) {
        std::size_t cell = id * alphabet_size + x;
        std::uint64_t extended = v * alphabet_size + x;
        if (d + 1 < k) {
          e.next[cell] = static_cast<int>(offset[d + 1] + extended);
        } else {
          e.output[cell] = codebook[extended];
          e.next[cell] = 0;
        }
      }
    }
  }
  e.validate();
  return e;
}

}  // namespace kraftlab
