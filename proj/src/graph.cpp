#include "siep/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "siep/errors.hpp"

namespace siep {

FiniteGraph::FiniteGraph(Vertex n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw std::invalid_argument("FiniteGraph: negative vertex count");
  for (auto& e : edges) {
    if (e.i == e.j) throw std::invalid_argument("FiniteGraph: self-loop at " + std::to_string(e.i));
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n)
      throw std::invalid_argument("FiniteGraph: edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ") out of range");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

bool FiniteGraph::has_edge(Vertex i, Vertex j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

std::vector<Vertex> FiniteGraph::lower_neighbors(Vertex k) const {
  std::vector<Vertex> out;
  for (const auto& e : edges_)
    if (e.j == k) out.push_back(e.i);
  return out;
}

bool FiniteGraph::connected() const {
  if (n_ <= 1) return true;
  std::vector<Vertex> parent(static_cast<std::size_t>(n_));
  for (Vertex v = 0; v < n_; ++v) parent[static_cast<std::size_t>(v)] = v;
  auto find = [&](Vertex v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
    return v;
  };
  Vertex components = n_;
  for (const auto& e : edges_) {
    const Vertex a = find(e.i), b = find(e.j);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

const char* to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::path: return "path";
    case GraphFamily::star: return "star";
    case GraphFamily::complete: return "complete";
    case GraphFamily::empty: return "empty";
    case GraphFamily::random: return "random";
    case GraphFamily::file: return "file";
  }
  return "unknown";
}

std::optional<GraphFamily> parse_graph_family(const std::string& name) {
  for (auto f : {GraphFamily::path, GraphFamily::star, GraphFamily::complete, GraphFamily::empty,
                 GraphFamily::random})
    if (name == to_string(f)) return f;
  return std::nullopt;
}

LowerAdjacencyStream LowerAdjacencyStream::family(GraphFamily f, double p, std::uint64_t seed) {
  if (f == GraphFamily::file) throw std::invalid_argument("LowerAdjacencyStream: use records() for files");
  if (f == GraphFamily::random && !(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("LowerAdjacencyStream: probability must lie in [0,1]");
  LowerAdjacencyStream s;
  s.family_ = f;
  s.p_ = p;
  s.seed_ = seed;
  s.reset();
  return s;
}

LowerAdjacencyStream LowerAdjacencyStream::records(std::vector<std::vector<Vertex>> rows,
                                                   std::string header_tag) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (Vertex j : rows[k])
      if (j < 0 || j >= static_cast<Vertex>(k))
        throw std::invalid_argument("LADJ: vertex " + std::to_string(k) + " lists neighbor " +
                                    std::to_string(j) + " which is not lower");
    std::sort(rows[k].begin(), rows[k].end());
    rows[k].erase(std::unique(rows[k].begin(), rows[k].end()), rows[k].end());
  }
  LowerAdjacencyStream s;
  s.family_ = GraphFamily::file;
  s.rows_ = std::move(rows);
  s.tag_ = std::move(header_tag);
  s.reset();
  return s;
}

void LowerAdjacencyStream::reset() {
  cursor_ = 0;
  rng_.seed(seed_);
}

std::optional<std::vector<Vertex>> LowerAdjacencyStream::next() {
  const Vertex k = cursor_;
  std::vector<Vertex> out;
  switch (family_) {
    case GraphFamily::path:
      if (k > 0) out.push_back(k - 1);
      break;
    case GraphFamily::star:
      if (k > 0) out.push_back(0);
      break;
    case GraphFamily::complete:
      for (Vertex j = 0; j < k; ++j) out.push_back(j);
      break;
    case GraphFamily::empty:
      break;
    case GraphFamily::random:
      for (Vertex j = 0; j < k; ++j) {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        if (u < p_) out.push_back(j);
      }
      break;
    case GraphFamily::file:
      if (static_cast<std::size_t>(k) >= rows_.size()) return std::nullopt;
      out = rows_[static_cast<std::size_t>(k)];
      break;
  }
  ++cursor_;
  return out;
}

std::string LowerAdjacencyStream::header() const {
  std::ostringstream os;
  os << "ladj v1";
  if (family_ == GraphFamily::file) {
    if (!tag_.empty()) os << ' ' << tag_;
    return os.str();
  }
  os << " family=" << to_string(family_);
  if (family_ == GraphFamily::random) {
    os << " seed=" << seed_;
    std::ostringstream ps;
    ps.precision(17);
    ps << p_;
    os << " p=" << ps.str();
  }
  return os.str();
}

FiniteGraph induced_prefix(LowerAdjacencyStream& stream, Vertex n) {
  if (n < 1) throw std::invalid_argument("induced_prefix: n must be >= 1");
  stream.reset();
  std::vector<Edge> edges;
  for (Vertex k = 0; k < n; ++k) {
    auto row = stream.next();
    if (!row)
      throw SiepError(ErrorKind::StreamExhausted,
                      "graph stream ended after " + std::to_string(k) + " of " + std::to_string(n) + " vertices");
    for (Vertex j : *row) edges.push_back({j, k});
  }
  return FiniteGraph(n, std::move(edges));
}

PatternReport validate_pattern(const SymMatrixd& a, const FiniteGraph& g, double edge_floor) {
  if (a.order() != g.n()) throw std::invalid_argument("validate_pattern: order mismatch");
  if (!(edge_floor >= 0.0)) throw std::invalid_argument("validate_pattern: edge_floor must be >= 0");
  PatternReport report;
  for (Vertex i = 0; i < a.order(); ++i) {
    for (Vertex j = i + 1; j < a.order(); ++j) {
      const double v = a(i, j);
      if (g.has_edge(i, j)) {
        if (v == 0.0 || std::abs(v) < edge_floor)
          report.violations.push_back({i, j, ViolationKind::missing_edge_entry, v});
      } else if (v != 0.0 || std::signbit(v)) {
        report.violations.push_back({i, j, ViolationKind::nonzero_non_edge, v});
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

std::string describe(const PatternViolation& v) {
  std::ostringstream os;
  os.precision(17);
  os << (v.kind == ViolationKind::missing_edge_entry ? "edge entry below floor" : "nonzero non-edge entry")
     << " at (" << v.i << "," << v.j << ") = " << v.value;
  return os.str();
}

}  // namespace siep
