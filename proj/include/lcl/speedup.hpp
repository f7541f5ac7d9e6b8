#ifndef LCL_SPEEDUP_HPP
#define LCL_SPEEDUP_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcl/engine.hpp"

namespace lcl {

// Algorithms on the infinite oriented delta-regular tree, given as tables
// over the packed random bits of their view. Position i of the view (in
// canonical order) occupies bits [i*b, (i+1)*b) of the table index.

struct NodeRule {
  int delta = 4;
  int t = 1;
  int b = 1;
  std::uint64_t c = 2;
  std::vector<std::uint32_t> table;
  std::string name;

  std::size_t positions() const { return oriented_ball_words(delta, t).size(); }
};

/// Edge algorithm; table[d-1] serves the edges of dimension d, with the view
/// rooted at the (d,+) endpoint.
struct EdgeRule {
  int delta = 4;
  int t = 0;
  int b = 1;
  std::uint64_t c = 2;
  std::vector<std::vector<std::uint32_t>> table;
  std::string name;

  std::size_t positions() const { return oriented_edge_words(delta, t, 1).size(); }
};

struct SpeedupConfig {
  int delta = 4;
  std::uint64_t c = 2;
  int t = 1;
  Rational f{1, 10};
  int b = 1;

  void validate() const {
    require(delta >= 2 && delta % 2 == 0, "delta must be even and at least 2");
    require(f > 0 && f < 1, "threshold f must lie in (0, 1)");
    require(b >= 1, "b must be positive");
    require(c >= 1, "palette must be nonempty");
  }

  nlohmann::ordered_json to_json() const {
    return {{"delta", delta}, {"c", c}, {"t", t}, {"f", to_string(f)}, {"b", b}};
  }
};

namespace detail {

inline void check_table_budget(std::size_t positions, int b) {
  if (positions * static_cast<std::size_t>(b) > static_cast<std::size_t>(kEnumerationBudgetBits))
    throw BudgetExceeded("rule table needs " + std::to_string(positions * b) + " bits, budget is " +
                         std::to_string(kEnumerationBudgetBits));
}

inline std::vector<std::uint32_t> unpack(std::uint64_t idx, std::size_t positions, int b) {
  std::vector<std::uint32_t> bits(positions);
  const std::uint64_t mask = (std::uint64_t{1} << b) - 1;
  for (std::size_t i = 0; i < positions; ++i) bits[i] = static_cast<std::uint32_t>((idx >> (i * b)) & mask);
  return bits;
}

/// Where the positions of an object's view come from, relative to a region
/// whose bits are known: either a known position or a completion slot.
class Layout {
 public:
  Layout(const std::vector<Word>& object_words, const Word& origin, const std::map<Word, int>& known, int b)
      : b_(b) {
    std::map<Word, int> slots;
    for (std::size_t pos = 0; pos < object_words.size(); ++pos) {
      const Word abs = word_concat(origin, object_words[pos]);
      if (auto it = known.find(abs); it != known.end()) {
        known_.emplace_back(static_cast<int>(pos), it->second);
      } else {
        auto [sit, fresh] = slots.emplace(abs, static_cast<int>(slots.size()));
        completion_.emplace_back(static_cast<int>(pos), sit->second);
      }
    }
    q_ = slots.size();
    check_table_budget(q_, b_);
    const std::uint64_t mask = (std::uint64_t{1} << b_) - 1;
    comp_part_.resize(std::size_t{1} << (b_ * q_));
    for (std::uint64_t j = 0; j < comp_part_.size(); ++j) {
      std::uint64_t x = 0;
      for (const auto& [pos, slot] : completion_) x |= ((j >> (slot * b_)) & mask) << (pos * b_);
      comp_part_[j] = x;
    }
  }

  std::size_t completion_size() const { return q_; }
  std::uint64_t completions() const { return comp_part_.size(); }

  std::uint64_t known_part(std::uint64_t known_bits) const {
    const std::uint64_t mask = (std::uint64_t{1} << b_) - 1;
    std::uint64_t x = 0;
    for (const auto& [pos, src] : known_) x |= ((known_bits >> (src * b_)) & mask) << (pos * b_);
    return x;
  }

  const std::vector<std::uint64_t>& completion_parts() const { return comp_part_; }

 private:
  int b_;
  std::size_t q_ = 0;
  std::vector<std::pair<int, int>> known_;
  std::vector<std::pair<int, int>> completion_;
  std::vector<std::uint64_t> comp_part_;
};

inline std::map<Word, int> index_words(const std::vector<Word>& words) {
  std::map<Word, int> m;
  for (std::size_t i = 0; i < words.size(); ++i) m.emplace(words[i], static_cast<int>(i));
  return m;
}

/// Origin word and dimension of the edge leaving the center with code x,
/// seen from its (d,+) endpoint.
inline Word edge_origin(int code) {
  return Direction::from_code(code).plus ? Word{} : Word{static_cast<std::uint16_t>(code)};
}

using u128 = unsigned __int128;

inline Rational ratio(u128 num, int num_shift_bits_total) {
  // num / 2^bits, built exactly.
  BigInt n = 0;
  for (int i = 127; i >= 0; --i) {
    n <<= 1;
    if ((num >> i) & 1) n += 1;
  }
  BigInt d = 1;
  d <<= num_shift_bits_total;
  return Rational(n, d);
}

inline void histogram(const std::vector<std::uint32_t>& table, const Layout& lay, std::uint64_t known_bits,
                      std::uint64_t c, std::vector<std::uint32_t>& counts) {
  require(c <= (1u << 16), "palette too large for a dense histogram");
  counts.assign(c, 0);
  const std::uint64_t base = lay.known_part(known_bits);
  for (auto part : lay.completion_parts()) ++counts[table[base | part]];
}

inline std::uint64_t count_color(const std::vector<std::uint32_t>& table, const Layout& lay, std::uint64_t known_bits,
                                 std::uint32_t color) {
  const std::uint64_t base = lay.known_part(known_bits);
  std::uint64_t n = 0;
  for (auto part : lay.completion_parts()) n += table[base | part] == color;
  return n;
}

/// Sorted outputs over all completions.
inline void sorted_outputs(const std::vector<std::uint32_t>& table, const Layout& lay, std::uint64_t known_bits,
                           std::vector<std::uint32_t>& out) {
  const std::uint64_t base = lay.known_part(known_bits);
  out.clear();
  for (auto part : lay.completion_parts()) out.push_back(table[base | part]);
  std::sort(out.begin(), out.end());
}

/// Number of pairs (j, k) with a[j] == b[k] for sorted a, b.
inline u128 equal_pairs(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  u128 n = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      const auto x = a[i];
      std::uint64_t ca = 0, cb = 0;
      while (i < a.size() && a[i] == x) ++i, ++ca;
      while (j < b.size() && b[j] == x) ++j, ++cb;
      n += static_cast<u128>(ca) * cb;
    }
  }
  return n;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rule factories
// ---------------------------------------------------------------------------

using BitsFn = std::function<Label(const std::vector<std::uint32_t>&)>;
using EdgeBitsFn = std::function<Label(int dim, const std::vector<std::uint32_t>&)>;

inline NodeRule make_node_rule(int delta, int t, int b, std::uint64_t c, std::string name, const BitsFn& fn) {
  require(delta >= 2 && delta % 2 == 0, "delta must be even");
  require(t >= 0 && b >= 1 && c >= 1, "invalid rule parameters");
  NodeRule r{delta, t, b, c, {}, std::move(name)};
  const std::size_t m = r.positions();
  detail::check_table_budget(m, b);
  r.table.resize(std::size_t{1} << (b * m));
  for (std::uint64_t idx = 0; idx < r.table.size(); ++idx) {
    const Label out = fn(detail::unpack(idx, m, b));
    require(out < c, "rule output outside palette");
    r.table[idx] = static_cast<std::uint32_t>(out);
  }
  return r;
}

inline EdgeRule make_edge_rule(int delta, int t, int b, std::uint64_t c, std::string name, const EdgeBitsFn& fn) {
  require(delta >= 2 && delta % 2 == 0, "delta must be even");
  require(t >= 0 && b >= 1 && c >= 1, "invalid rule parameters");
  EdgeRule r{delta, t, b, c, {}, std::move(name)};
  const std::size_t m = r.positions();
  detail::check_table_budget(m, b);
  r.table.resize(static_cast<std::size_t>(delta / 2));
  for (int d = 1; d <= delta / 2; ++d) {
    auto& tab = r.table[d - 1];
    tab.resize(std::size_t{1} << (b * m));
    for (std::uint64_t idx = 0; idx < tab.size(); ++idx) {
      const Label out = fn(d, detail::unpack(idx, m, b));
      require(out < c, "rule output outside palette");
      tab[idx] = static_cast<std::uint32_t>(out);
    }
  }
  return r;
}

inline NodeRule random_node_rule(int delta, int t, int b, std::uint64_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, c - 1);
  return make_node_rule(delta, t, b, c, "random-table-" + std::to_string(seed),
                        [&](const std::vector<std::uint32_t>&) { return pick(rng); });
}

inline EdgeRule random_edge_rule(int delta, int t, int b, std::uint64_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, c - 1);
  return make_edge_rule(delta, t, b, c, "random-table-" + std::to_string(seed),
                        [&](int, const std::vector<std::uint32_t>&) { return pick(rng); });
}

/// Output the first (lowest) bit of the center's bitstring.
inline NodeRule own_first_bit_rule(int delta, int t, int b) {
  return make_node_rule(delta, t, b, 2, "own-first-bit",
                        [](const std::vector<std::uint32_t>& bits) { return Label{bits[0] & 1u}; });
}

inline NodeRule constant_node_rule(int delta, int t, int b, std::uint64_t c, Label value) {
  return make_node_rule(delta, t, b, c, "constant", [value](const std::vector<std::uint32_t>&) { return value; });
}

/// Sum of all bitstrings in the view, modulo c.
inline NodeRule sum_mod_node_rule(int delta, int t, int b, std::uint64_t c) {
  return make_node_rule(delta, t, b, c, "sum-mod-c", [c](const std::vector<std::uint32_t>& bits) {
    std::uint64_t s = 0;
    for (auto x : bits) s += x;
    return Label{s % c};
  });
}

/// Parity of the lowest bits in the view.
inline NodeRule xor_node_rule(int delta, int t, int b) {
  return make_node_rule(delta, t, b, 2, "xor", [](const std::vector<std::uint32_t>& bits) {
    std::uint32_t x = 0;
    for (auto v : bits) x ^= v & 1u;
    return Label{x};
  });
}

/// 1 iff at least half of the lowest bits in the view are set.
inline NodeRule majority_node_rule(int delta, int t, int b) {
  return make_node_rule(delta, t, b, 2, "majority", [](const std::vector<std::uint32_t>& bits) {
    std::size_t ones = 0;
    for (auto v : bits) ones += v & 1u;
    return Label{2 * ones >= bits.size() ? 1u : 0u};
  });
}

/// Lowest bit of the (d,+) endpoint.
inline EdgeRule edge_first_bit_rule(int delta, int t, int b) {
  return make_edge_rule(delta, t, b, 2, "edge-first-bit",
                        [](int, const std::vector<std::uint32_t>& bits) { return Label{bits[0] & 1u}; });
}

/// Sum of the view's bitstrings plus the dimension, modulo c.
inline EdgeRule sum_mod_edge_rule(int delta, int t, int b, std::uint64_t c) {
  return make_edge_rule(delta, t, b, c, "edge-sum-mod-c", [c](int dim, const std::vector<std::uint32_t>& bits) {
    std::uint64_t s = static_cast<std::uint64_t>(dim);
    for (auto x : bits) s += x;
    return Label{s % c};
  });
}

inline EdgeRule constant_edge_rule(int delta, int t, int b, std::uint64_t c, Label value) {
  return make_edge_rule(delta, t, b, c, "constant",
                        [value](int, const std::vector<std::uint32_t>&) { return value; });
}

// ---------------------------------------------------------------------------
// Exact failure probabilities on the infinite oriented tree
// ---------------------------------------------------------------------------

/// Pr[all neighbors of v output A(v)]. Given the bits of B_t(v), the
/// neighbors' outputs are independent, so the probability is a sum over
/// B_t(v) of products of per-neighbor conditional probabilities.
inline Rational node_failure_probability(const NodeRule& A) {
  const auto words = oriented_ball_words(A.delta, A.t);
  const auto known = detail::index_words(words);
  std::vector<detail::Layout> nb;
  for (int x = 0; x < A.delta; ++x)
    nb.emplace_back(words, Word{static_cast<std::uint16_t>(x)}, known, A.b);
  const int outer_bits = static_cast<int>(words.size()) * A.b;
  const int inner_bits = static_cast<int>(nb[0].completion_size()) * A.b;
  require(outer_bits + A.delta * inner_bits <= 120, "probability denominator too large");
  detail::u128 total = 0;
  for (std::uint64_t K = 0; K < (std::uint64_t{1} << outer_bits); ++K) {
    const auto mine = A.table[K];
    detail::u128 prod = 1;
    for (const auto& lay : nb) {
      prod *= detail::count_color(A.table, lay, K, mine);
      if (prod == 0) break;
    }
    total += prod;
  }
  return detail::ratio(total, outer_bits + A.delta * inner_bits);
}

/// Pr[in every dimension the two edges of v carry equal outputs].
inline Rational edge_failure_probability(const EdgeRule& A) {
  const auto words = oriented_ball_words(A.delta, A.t);
  const auto known = detail::index_words(words);
  std::vector<detail::Layout> lays;
  for (int x = 0; x < A.delta; ++x)
    lays.emplace_back(oriented_edge_words(A.delta, A.t, Direction::from_code(x).dim), detail::edge_origin(x),
                      known, A.b);
  const int outer_bits = static_cast<int>(words.size()) * A.b;
  int inner_bits = 0;
  for (const auto& l : lays) inner_bits += static_cast<int>(l.completion_size()) * A.b;
  require(outer_bits + inner_bits <= 120, "probability denominator too large");
  detail::u128 total = 0;
  std::vector<std::uint32_t> op, om;
  for (std::uint64_t K = 0; K < (std::uint64_t{1} << outer_bits); ++K) {
    detail::u128 prod = 1;
    for (int d = 1; d <= A.delta / 2 && prod != 0; ++d) {
      const auto& tab = A.table[d - 1];
      detail::sorted_outputs(tab, lays[Direction{d, true}.code()], K, op);
      detail::sorted_outputs(tab, lays[Direction{d, false}.code()], K, om);
      prod *= detail::equal_pairs(op, om);
    }
    total += prod;
  }
  return detail::ratio(total, outer_bits + inner_bits);
}

// ---------------------------------------------------------------------------
// Node -> edge speedup
// ---------------------------------------------------------------------------

/// Conditional color counts of both endpoints given each (t-1)-round edge
/// view; independent of the threshold.
struct NodeToEdgeCounts {
  NodeRule source;
  std::uint64_t total = 0;                          // completions per endpoint
  std::vector<std::vector<std::uint32_t>> counts;   // [d-1][idx * 2c + side * c + color], side 0 = (d,+)
};

inline NodeToEdgeCounts node_to_edge_counts(const NodeRule& A) {
  require(A.t >= 1, "node to edge speedup needs t >= 1");
  NodeToEdgeCounts out;
  out.source = A;
  const auto ball = oriented_ball_words(A.delta, A.t);
  out.counts.resize(static_cast<std::size_t>(A.delta / 2));
  std::vector<std::uint32_t> hist;
  for (int d = 1; d <= A.delta / 2; ++d) {
    const auto ewords = oriented_edge_words(A.delta, A.t - 1, d);
    detail::check_table_budget(ewords.size(), A.b);
    const auto known = detail::index_words(ewords);
    const detail::Layout plus(ball, Word{}, known, A.b);
    const detail::Layout minus(ball, Word{static_cast<std::uint16_t>(Direction{d, true}.code())}, known, A.b);
    out.total = plus.completions();
    auto& cnt = out.counts[d - 1];
    const std::uint64_t views = std::uint64_t{1} << (A.b * ewords.size());
    cnt.assign(views * 2 * A.c, 0);
    for (std::uint64_t K = 0; K < views; ++K) {
      detail::histogram(A.table, plus, K, A.c, hist);
      std::copy(hist.begin(), hist.end(), cnt.begin() + static_cast<std::ptrdiff_t>(K * 2 * A.c));
      detail::histogram(A.table, minus, K, A.c, hist);
      std::copy(hist.begin(), hist.end(), cnt.begin() + static_cast<std::ptrdiff_t>(K * 2 * A.c + A.c));
    }
  }
  return out;
}

/// Smallest integer count that reaches f * total.
inline std::uint64_t frequency_threshold(const Rational& f, std::uint64_t total) {
  const Rational x = f * Rational(BigInt(total));
  BigInt q = numerator(x) / denominator(x);
  if (Rational(q) < x) q += 1;
  return q.convert_to<std::uint64_t>();
}

/// A'(e) = (F_plus, F_minus) packed as F_plus << c | F_minus, where F_w is
/// the set of colors i with Pr[A(w) = i | B_{t-1}(e)] >= f.
inline EdgeRule node_to_edge_speedup(const NodeToEdgeCounts& counts, const Rational& f) {
  const NodeRule& A = counts.source;
  require(f > 0 && f <= 1, "threshold f must lie in (0, 1]");
  require(2 * A.c <= 30, "derived palette too large");
  const std::uint64_t thr = frequency_threshold(f, counts.total);
  EdgeRule out{A.delta, A.t - 1, A.b, std::uint64_t{1} << (2 * A.c), {}, "speedup1(" + A.name + ")"};
  out.table.resize(counts.counts.size());
  for (std::size_t d = 0; d < counts.counts.size(); ++d) {
    const auto& cnt = counts.counts[d];
    const std::size_t views = cnt.size() / (2 * A.c);
    out.table[d].resize(views);
    for (std::size_t K = 0; K < views; ++K) {
      std::uint32_t plus = 0, minus = 0;
      for (std::uint64_t i = 0; i < A.c; ++i) {
        if (cnt[K * 2 * A.c + i] >= thr) plus |= 1u << i;
        if (cnt[K * 2 * A.c + A.c + i] >= thr) minus |= 1u << i;
      }
      out.table[d][K] = (plus << A.c) | minus;
    }
  }
  return out;
}

inline EdgeRule node_to_edge_speedup(const NodeRule& A, const Rational& f) {
  return node_to_edge_speedup(node_to_edge_counts(A), f);
}

/// Pr over B_t(v) that some incident edge's frequent set for v misses A(v).
inline Rational not_good_probability(const NodeRule& A, const EdgeRule& derived) {
  require(derived.t == A.t - 1 && derived.delta == A.delta, "derived rule does not match the source");
  const auto words = oriented_ball_words(A.delta, A.t);
  const auto known = detail::index_words(words);
  std::vector<detail::Layout> lays;
  for (int x = 0; x < A.delta; ++x)
    lays.emplace_back(oriented_edge_words(A.delta, A.t - 1, Direction::from_code(x).dim), detail::edge_origin(x),
                      known, A.b);
  const std::uint64_t mask = (std::uint64_t{1} << A.c) - 1;
  const int bits = static_cast<int>(words.size()) * A.b;
  std::uint64_t bad = 0;
  for (std::uint64_t K = 0; K < (std::uint64_t{1} << bits); ++K) {
    const auto mine = A.table[K];
    for (int x = 0; x < A.delta; ++x) {
      const auto dir = Direction::from_code(x);
      const auto out = derived.table[dir.dim - 1][lays[x].known_part(K)];
      const auto set = dir.plus ? (out >> A.c) & mask : out & mask;
      if (!((set >> mine) & 1)) {
        ++bad;
        break;
      }
    }
  }
  return detail::ratio(bad, bits);
}

// ---------------------------------------------------------------------------
// Edge -> node speedup
// ---------------------------------------------------------------------------

struct EdgeToNodeCounts {
  EdgeRule source;
  std::uint64_t total = 0;
  std::vector<std::uint32_t> counts;  // [idx * delta * c + code * c + color]
};

inline EdgeToNodeCounts edge_to_node_counts(const EdgeRule& A) {
  EdgeToNodeCounts out;
  out.source = A;
  const auto words = oriented_ball_words(A.delta, A.t);
  detail::check_table_budget(words.size(), A.b);
  const auto known = detail::index_words(words);
  std::vector<detail::Layout> lays;
  for (int x = 0; x < A.delta; ++x)
    lays.emplace_back(oriented_edge_words(A.delta, A.t, Direction::from_code(x).dim), detail::edge_origin(x),
                      known, A.b);
  out.total = lays[0].completions();
  const std::uint64_t views = std::uint64_t{1} << (A.b * words.size());
  const std::uint64_t stride = static_cast<std::uint64_t>(A.delta) * A.c;
  out.counts.assign(views * stride, 0);
  std::vector<std::uint32_t> hist;
  for (std::uint64_t K = 0; K < views; ++K)
    for (int x = 0; x < A.delta; ++x) {
      detail::histogram(A.table[Direction::from_code(x).dim - 1], lays[x], K, A.c, hist);
      std::copy(hist.begin(), hist.end(), out.counts.begin() + static_cast<std::ptrdiff_t>(K * stride + x * A.c));
    }
  return out;
}

/// A(v) = (F_0, ..., F_{delta-1}) over edge codes R, L, U, D, ..., packed
/// with F_x at bits [x*c, (x+1)*c), where F_x holds the colors i with
/// Pr[A'(e_x) = i | B_t(v)] >= f.
inline NodeRule edge_to_node_speedup(const EdgeToNodeCounts& counts, const Rational& f) {
  const EdgeRule& A = counts.source;
  require(f > 0 && f <= 1, "threshold f must lie in (0, 1]");
  require(static_cast<std::uint64_t>(A.delta) * A.c <= 30, "derived palette too large");
  const std::uint64_t thr = frequency_threshold(f, counts.total);
  const std::uint64_t stride = static_cast<std::uint64_t>(A.delta) * A.c;
  NodeRule out{A.delta, A.t, A.b, std::uint64_t{1} << stride, {}, "speedup2(" + A.name + ")"};
  const std::size_t views = counts.counts.size() / stride;
  out.table.resize(views);
  for (std::size_t K = 0; K < views; ++K) {
    std::uint32_t label = 0;
    for (std::uint64_t j = 0; j < stride; ++j)
      if (counts.counts[K * stride + j] >= thr) label |= 1u << j;
    out.table[K] = label;
  }
  return out;
}

inline NodeRule edge_to_node_speedup(const EdgeRule& A, const Rational& f) {
  return edge_to_node_speedup(edge_to_node_counts(A), f);
}

// ---------------------------------------------------------------------------
// Inequality checks
// ---------------------------------------------------------------------------

/// Direction 1: p >= (p' - delta*c*f) * f^delta.
/// Direction 2: p >= (p' - (delta-1)*c*f) * f^(delta-1).
inline Rational speedup_rhs(int direction, int delta, std::uint64_t c, const Rational& f, const Rational& p_prime) {
  const int k = direction == 1 ? delta : delta - 1;
  Rational fk = 1;
  for (int i = 0; i < k; ++i) fk *= f;
  return (p_prime - Rational(k) * Rational(BigInt(c)) * f) * fk;
}

/// f = p' / ((delta+1) c) for direction 1 and p' / (delta c) for direction 2.
inline Rational optimal_f(int direction, int delta, std::uint64_t c, const Rational& p_prime) {
  const int k = direction == 1 ? delta + 1 : delta;
  return p_prime / (Rational(k) * Rational(BigInt(c)));
}

/// 100 evenly spaced thresholds j/101 for j = 1..100.
inline std::vector<Rational> default_f_grid(int points = 100) {
  std::vector<Rational> g;
  for (int j = 1; j <= points; ++j) g.emplace_back(j, points + 1);
  return g;
}

struct GridPoint {
  Rational f, p_prime, rhs;
  std::optional<Rational> not_good;
  bool holds = false;
};

struct SpeedupReport {
  std::string construction;
  SpeedupConfig cfg;
  int direction = 1;
  Rational p;
  Rational p_prime;        // at cfg.f
  Rational rhs;            // at cfg.f
  bool holds_at_f = false;
  Rational f_opt;
  Rational p_prime_at_opt;
  bool holds_at_opt = true;
  std::optional<Rational> not_good_at_f;
  std::vector<GridPoint> grid;

  std::size_t violations() const {
    std::size_t v = holds_at_f ? 0 : 1;
    if (!holds_at_opt) ++v;
    for (const auto& g : grid) v += g.holds ? 0 : 1;
    return v;
  }
  bool inequality_holds() const { return violations() == 0; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["construction"] = construction;
    j["cfg"] = cfg.to_json();
    j["direction"] = direction;
    j["p"] = to_string(p);
    j["p_prime"] = to_string(p_prime);
    j["p_value"] = to_double(p);
    j["p_prime_value"] = to_double(p_prime);
    j["rhs"] = to_double(rhs);
    j["holds_at_f"] = holds_at_f;
    j["f_opt"] = to_string(f_opt);
    j["p_prime_at_opt"] = to_string(p_prime_at_opt);
    j["holds_at_opt"] = holds_at_opt;
    if (not_good_at_f) j["not_good"] = to_string(*not_good_at_f);
    auto grid_json = nlohmann::ordered_json::array();
    for (const auto& g : grid) {
      nlohmann::ordered_json e{{"f", to_string(g.f)}, {"p_prime", to_string(g.p_prime)},
                               {"rhs", to_double(g.rhs)}, {"holds", g.holds}};
      if (g.not_good) e["not_good"] = to_string(*g.not_good);
      grid_json.push_back(std::move(e));
    }
    j["f_grid_results"] = std::move(grid_json);
    j["inequality_holds"] = inequality_holds();
    return j;
  }
};

/// Exact check of direction 1 for a t-round node rule. The goodness
/// probability is measured at every threshold as well.
inline SpeedupReport verify_speedup_inequality(const NodeRule& A, const SpeedupConfig& cfg,
                                               const std::vector<Rational>& grid = default_f_grid()) {
  cfg.validate();
  require(cfg.delta == A.delta && cfg.c == A.c && cfg.t == A.t && cfg.b == A.b, "config does not match rule");
  SpeedupReport r;
  r.construction = "node-to-edge";
  r.cfg = cfg;
  r.direction = 1;
  r.p = node_failure_probability(A);
  const auto counts = node_to_edge_counts(A);
  auto eval = [&](const Rational& f, Rational& p_prime, Rational& rhs, std::optional<Rational>& not_good) {
    const EdgeRule derived = node_to_edge_speedup(counts, f);
    p_prime = edge_failure_probability(derived);
    rhs = speedup_rhs(1, A.delta, A.c, f, p_prime);
    not_good = not_good_probability(A, derived);
    return r.p >= rhs;
  };
  r.holds_at_f = eval(cfg.f, r.p_prime, r.rhs, r.not_good_at_f);
  r.f_opt = optimal_f(1, A.delta, A.c, r.p_prime);
  if (r.f_opt > 0) {
    Rational rhs;
    std::optional<Rational> ng;
    r.holds_at_opt = eval(r.f_opt, r.p_prime_at_opt, rhs, ng);
  }
  for (const auto& f : grid) {
    GridPoint g;
    g.f = f;
    g.holds = eval(f, g.p_prime, g.rhs, g.not_good);
    r.grid.push_back(std::move(g));
  }
  return r;
}

/// Exact check of direction 2 for a t-round edge rule.
inline SpeedupReport verify_speedup_inequality(const EdgeRule& A, const SpeedupConfig& cfg,
                                               const std::vector<Rational>& grid = default_f_grid()) {
  cfg.validate();
  require(cfg.delta == A.delta && cfg.c == A.c && cfg.t == A.t && cfg.b == A.b, "config does not match rule");
  SpeedupReport r;
  r.construction = "edge-to-node";
  r.cfg = cfg;
  r.direction = 2;
  r.p = edge_failure_probability(A);
  const auto counts = edge_to_node_counts(A);
  auto eval = [&](const Rational& f, Rational& p_prime, Rational& rhs) {
    p_prime = node_failure_probability(edge_to_node_speedup(counts, f));
    rhs = speedup_rhs(2, A.delta, A.c, f, p_prime);
    return r.p >= rhs;
  };
  r.holds_at_f = eval(cfg.f, r.p_prime, r.rhs);
  r.f_opt = optimal_f(2, A.delta, A.c, r.p_prime);
  if (r.f_opt > 0) {
    Rational rhs;
    r.holds_at_opt = eval(r.f_opt, r.p_prime_at_opt, rhs);
  }
  for (const auto& f : grid) {
    GridPoint g;
    g.f = f;
    g.holds = eval(f, g.p_prime, g.rhs);
    r.grid.push_back(std::move(g));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Engine adapters
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t pack_full_view(const View& view, const std::vector<Word>& words, int b) {
  const auto& entries = view.entries();
  if (entries.size() != words.size())
    throw TotalRuleViolation("view is not a full oriented ball", view.encoding());
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (entries[i].path != words[i]) throw TotalRuleViolation("view is not a full oriented ball", view.encoding());
    idx |= static_cast<std::uint64_t>(entries[i].bits) << (i * b);
  }
  return idx;
}

}  // namespace detail

inline LocalAlgorithm to_local_algorithm(const NodeRule& A) {
  auto words = oriented_ball_words(A.delta, A.t);
  LocalAlgorithm alg;
  alg.rounds = A.t;
  alg.kind = AlgorithmKind::Node;
  alg.palette = A.c;
  alg.name = A.name;
  alg.rule = [A, words = std::move(words)](const View& view) -> Label {
    return A.table[detail::pack_full_view(view, words, A.b)];
  };
  return alg;
}

inline LocalAlgorithm to_local_algorithm(const EdgeRule& A) {
  std::vector<std::vector<Word>> words;
  for (int d = 1; d <= A.delta / 2; ++d) words.push_back(oriented_edge_words(A.delta, A.t, d));
  LocalAlgorithm alg;
  alg.rounds = A.t;
  alg.kind = AlgorithmKind::Edge;
  alg.palette = A.c;
  alg.name = A.name;
  alg.rule = [A, words = std::move(words)](const View& view) -> Label {
    const int d = view.edge_dim();
    if (d < 1 || d > A.delta / 2) throw TotalRuleViolation("edge view without a dimension", view.encoding());
    return A.table[d - 1][detail::pack_full_view(view, words[d - 1], A.b)];
  };
  return alg;
}

// ---------------------------------------------------------------------------
// Palette recurrence
// ---------------------------------------------------------------------------

/// One backward step of the palette sizes: c_hat = 2^(2 c_t), then
/// c_{t-1} = 2^(delta * c_hat). Returns {c_hat, c_{t-1}}; throws when a
/// value would exceed 2^max_bits.
inline std::pair<BigInt, BigInt> palette_step(const BigInt& c_t, int delta, unsigned max_bits = 1u << 20) {
  auto pow2 = [max_bits](const BigInt& e) {
    if (e > max_bits) throw DomainError("palette size exceeds 2^" + std::to_string(max_bits));
    BigInt out = 1;
    out <<= e.convert_to<unsigned>();
    return out;
  };
  const BigInt c_hat = pow2(2 * c_t);
  const BigInt c_prev = pow2(delta * c_hat);
  return {c_hat, c_prev};
}

}  // namespace lcl

#endif  // LCL_SPEEDUP_HPP
