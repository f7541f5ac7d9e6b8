#ifndef LCL_VIEW_HPP
#define LCL_VIEW_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lcl/graph.hpp"

namespace lcl {

/// Per-node inputs of a run: b random bits, optional identifiers and optional
/// input labels.
struct Assignment {
  int b = 0;
  std::vector<std::uint64_t> bits;
  std::vector<std::uint64_t> ids;     // empty: anonymous
  std::vector<Label> inputs;          // empty: no input labels

  void validate(std::size_t n) const {
    require(b >= 0 && b <= 32, "bits per node must be in [0, 32]");
    require(bits.size() == n, "bit assignment size mismatch");
    const std::uint64_t limit = std::uint64_t{1} << b;
    for (auto x : bits) require(x < limit, "bitstring longer than b");
    if (!ids.empty()) {
      require(ids.size() == n, "id assignment size mismatch");
      std::vector<std::uint64_t> sorted = ids;
      std::sort(sorted.begin(), sorted.end());
      require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "ids must be injective");
      require(sorted.front() >= 1, "ids start at 1");
    }
    require(inputs.empty() || inputs.size() == n, "input label size mismatch");
  }

  static Assignment zeros(std::size_t n, int b) { return {b, std::vector<std::uint64_t>(n, 0), {}, {}}; }

  static Assignment with_index_ids(std::size_t n, int b = 0) {
    Assignment a = zeros(n, b);
    a.ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) a.ids[i] = i + 1;
    return a;
  }
};

using Word = std::vector<std::uint16_t>;

/// Canonical order of positions in a view: shorter paths first, then
/// lexicographic by step label.
inline bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

enum class CenterKind : std::uint8_t { Node, Edge };

/// Canonical encoding of a radius-t labeled neighborhood. Paths are
/// non-backtracking walks from the center (the universal-cover truncation,
/// which is the ball itself on trees). Steps are orientation codes on
/// oriented graphs and (port at parent, port at child) pairs otherwise.
class View {
 public:
  struct Entry {
    Word path;
    std::uint32_t parent_port = 0;  // port at the walk parent, 0 at the center
    std::uint32_t port = 0;         // port of the same edge at this node
    std::uint32_t degree = 0;
    std::uint64_t bits = 0;
    std::optional<std::uint64_t> id;
    std::optional<Label> input;
  };

  View() = default;
  View(int radius, CenterKind kind, int edge_dim, std::vector<Entry> entries)
      : radius_(radius), kind_(kind), edge_dim_(edge_dim), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& x, const Entry& y) { return word_less(x.path, y.path); });
  }

  int radius() const { return radius_; }
  CenterKind kind() const { return kind_; }
  /// Dimension of the center edge on oriented graphs, 0 otherwise.
  int edge_dim() const { return edge_dim_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& center() const { return entries_.front(); }

  std::string encoding() const {
    std::string s;
    auto put = [&s](std::uint64_t x, int bytes) {
      for (int i = 0; i < bytes; ++i) s.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
    };
    put(static_cast<std::uint64_t>(radius_), 2);
    put(static_cast<std::uint64_t>(kind_), 1);
    put(static_cast<std::uint64_t>(edge_dim_), 1);
    for (const auto& e : entries_) {
      put(e.path.size(), 2);
      for (auto step : e.path) put(step, 2);
      put(e.parent_port, 1);
      put(e.port, 1);
      put(e.degree, 2);
      put(e.bits, 8);
      put(e.id.has_value(), 1);
      if (e.id) put(*e.id, 8);
      put(e.input.has_value(), 1);
      if (e.input) put(*e.input, 8);
    }
    return s;
  }

  /// Concatenated random bits, position i occupying bits [i*b, (i+1)*b).
  std::uint64_t packed_bits(int b) const {
    require(static_cast<std::size_t>(b) * entries_.size() <= 64, "view too large to pack");
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) out |= entries_[i].bits << (i * b);
    return out;
  }

  friend bool operator==(const View& a, const View& b) { return a.encoding() == b.encoding(); }

 private:
  int radius_ = 0;
  CenterKind kind_ = CenterKind::Node;
  int edge_dim_ = 0;
  std::vector<Entry> entries_;
};

namespace detail {

inline std::uint16_t step_label(const PortedGraph& g, NodeId from, Port p) {
  const auto& h = g.half_edge(from, p);
  if (g.oriented()) return static_cast<std::uint16_t>(h.dir);
  return static_cast<std::uint16_t>(p * 64 + h.back);
}

/// Appends all non-backtracking walks of length <= depth starting at v
/// (having arrived through port `in`, or none), with `prefix` prepended.
inline void collect_walks(const PortedGraph& g, NodeId v, int in, int depth, Word& prefix,
                          const Assignment& a, std::vector<View::Entry>& out, Port parent_port = 0) {
  View::Entry e;
  e.path = prefix;
  e.parent_port = parent_port;
  e.port = in < 0 ? 0 : static_cast<std::uint32_t>(in);
  e.degree = static_cast<std::uint32_t>(g.degree(v));
  e.bits = a.bits.empty() ? 0 : a.bits[v];
  if (!a.ids.empty()) e.id = a.ids[v];
  if (!a.inputs.empty()) e.input = a.inputs[v];
  out.push_back(std::move(e));
  if (depth == 0) return;
  for (Port p = 0; p < g.degree(v); ++p) {
    if (static_cast<int>(p) == in) continue;
    prefix.push_back(step_label(g, v, p));
    collect_walks(g, g.neighbor(v, p), static_cast<int>(g.half_edge(v, p).back), depth - 1, prefix, a, out, p);
    prefix.pop_back();
  }
}

inline View edge_view_from(const PortedGraph& g, NodeId origin, Port p, int t, const Assignment& a) {
  std::vector<View::Entry> entries;
  Word prefix;
  // Walks from the origin that do not start across the center edge ...
  {
    View::Entry e;
    e.degree = static_cast<std::uint32_t>(g.degree(origin));
    e.bits = a.bits.empty() ? 0 : a.bits[origin];
    if (!a.ids.empty()) e.id = a.ids[origin];
    if (!a.inputs.empty()) e.input = a.inputs[origin];
    entries.push_back(std::move(e));
    if (t > 0)
      for (Port q = 0; q < g.degree(origin); ++q) {
        if (q == p) continue;
        prefix.assign(1, step_label(g, origin, q));
        collect_walks(g, g.neighbor(origin, q), static_cast<int>(g.half_edge(origin, q).back), t - 1, prefix,
                      a, entries, q);
      }
  }
  // ... plus the radius-t walks from the other endpoint.
  const auto& h = g.half_edge(origin, p);
  prefix.assign(1, step_label(g, origin, p));
  collect_walks(g, h.to, static_cast<int>(h.back), t, prefix, a, entries, p);
  const int dim = g.oriented() ? Direction::from_code(h.dir).dim : 0;
  return View(t, CenterKind::Edge, dim, std::move(entries));
}

}  // namespace detail

inline View extract_view(const PortedGraph& g, NodeId v, int t, const Assignment& a) {
  require(v < g.node_count(), "center node out of range");
  require(t >= 0, "radius must be non-negative");
  std::vector<View::Entry> entries;
  Word prefix;
  detail::collect_walks(g, v, -1, t, prefix, a, entries);
  return View(t, CenterKind::Node, 0, std::move(entries));
}

/// Edge view: union of the radius-t views of both endpoints, rooted at the
/// endpoint for which the edge carries a (d,+) label. Unoriented edges take
/// the smaller of the two rootings.
inline View extract_edge_view(const PortedGraph& g, EdgeId e, int t, const Assignment& a) {
  require(e < g.edge_count(), "edge out of range");
  require(t >= 0, "radius must be non-negative");
  const auto& es = g.edge(e);
  if (g.oriented()) {
    if (es.sign > 0) return detail::edge_view_from(g, es.u, es.port_u, t, a);
    return detail::edge_view_from(g, es.v, es.port_v, t, a);
  }
  View x = detail::edge_view_from(g, es.u, es.port_u, t, a);
  View y = detail::edge_view_from(g, es.v, es.port_v, t, a);
  return x.encoding() <= y.encoding() ? x : y;
}

// ---------------------------------------------------------------------------
// Ideal balls of the infinite oriented delta-regular tree
// ---------------------------------------------------------------------------

/// Positions of the radius-t ball around a node, as non-backtracking words
/// of orientation codes, in canonical order.
inline std::vector<Word> oriented_ball_words(int delta, int t) {
  std::vector<Word> out{Word{}};
  for (std::size_t head = 0; head < out.size(); ++head) {
    const Word w = out[head];
    if (static_cast<int>(w.size()) == t) continue;
    for (int c = 0; c < delta; ++c) {
      if (!w.empty() && c == inverse_code(w.back())) continue;
      Word x = w;
      x.push_back(static_cast<std::uint16_t>(c));
      out.push_back(std::move(x));
    }
  }
  std::sort(out.begin(), out.end(), word_less);
  return out;
}

/// Positions of the radius-t view of an edge of dimension `dim`, rooted at
/// its (dim,+) endpoint, in canonical order.
inline std::vector<Word> oriented_edge_words(int delta, int t, int dim) {
  const auto plus = static_cast<std::uint16_t>(Direction{dim, true}.code());
  std::vector<Word> out;
  for (const auto& w : oriented_ball_words(delta, t))
    if (w.empty() || w.front() != plus) out.push_back(w);
  for (const auto& w : oriented_ball_words(delta, t)) {
    if (!w.empty() && w.front() == inverse_code(plus)) continue;
    Word x{plus};
    x.insert(x.end(), w.begin(), w.end());
    out.push_back(std::move(x));
  }
  std::sort(out.begin(), out.end(), word_less);
  return out;
}

/// Reduced concatenation: appends `w` to `prefix`, cancelling immediate
/// backtracking.
inline Word word_concat(const Word& prefix, const Word& w) {
  Word out = prefix;
  for (auto step : w) {
    if (!out.empty() && out.back() == inverse_code(step))
      out.pop_back();
    else
      out.push_back(step);
  }
  return out;
}

}  // namespace lcl

#endif  // LCL_VIEW_HPP
