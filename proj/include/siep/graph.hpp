#ifndef SIEP_GRAPH_HPP
#define SIEP_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "siep/sym_matrix.hpp"

namespace siep {

using Vertex = Eigen::Index;

struct Edge {
  Vertex i;
  Vertex j;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Finite simple graph on vertices 0..n-1. Edges are stored with i < j,
/// sorted and unique.
class FiniteGraph {
 public:
  FiniteGraph() = default;
  /// Normalizes orientation and drops duplicates; throws on self-loops or
  /// out-of-range vertices.
  FiniteGraph(Vertex n, std::vector<Edge> edges);

  Vertex n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(Vertex i, Vertex j) const;
  /// Neighbors of k with smaller label, ascending.
  std::vector<Vertex> lower_neighbors(Vertex k) const;
  bool connected() const;

  friend bool operator==(const FiniteGraph&, const FiniteGraph&) = default;

 private:
  Vertex n_ = 0;
  std::vector<Edge> edges_;
};

enum class GraphFamily { path, star, complete, empty, random, file };

const char* to_string(GraphFamily f);
std::optional<GraphFamily> parse_graph_family(const std::string& name);

/// Streams, for k = 0, 1, 2, ..., the neighbors of vertex k with label < k.
/// Single consumer; `reset()` replays from vertex 0 and yields identical lists.
class LowerAdjacencyStream {
 public:
  static LowerAdjacencyStream family(GraphFamily f, double p = 0.5, std::uint64_t seed = 0);
  /// Explicit finite list of records (e.g. parsed from a LADJ file).
  static LowerAdjacencyStream records(std::vector<std::vector<Vertex>> rows, std::string header_tag = {});

  /// Next record, or nullopt when an explicit list is exhausted.
  std::optional<std::vector<Vertex>> next();
  void reset();

  GraphFamily source() const { return family_; }
  double probability() const { return p_; }
  std::uint64_t seed() const { return seed_; }
  /// `ladj v1 ...` header describing the source.
  std::string header() const;

 private:
  LowerAdjacencyStream() = default;

  GraphFamily family_ = GraphFamily::empty;
  double p_ = 0.5;
  std::uint64_t seed_ = 0;
  std::string tag_;
  std::vector<std::vector<Vertex>> rows_;
  Vertex cursor_ = 0;
  std::mt19937_64 rng_;
};

/// Graph induced on the first n vertices of the stream. Replays the stream
/// from the start.
FiniteGraph induced_prefix(LowerAdjacencyStream& stream, Vertex n);

enum class ViolationKind { missing_edge_entry, nonzero_non_edge };

struct PatternViolation {
  Vertex i;
  Vertex j;
  ViolationKind kind;
  double value;
};

struct PatternReport {
  bool ok = true;
  std::vector<PatternViolation> violations;
};

/// Every edge entry must satisfy |A_ij| >= edge_floor (and be nonzero); every
/// non-edge off-diagonal entry must be exactly 0.0.
PatternReport validate_pattern(const SymMatrixd& a, const FiniteGraph& g, double edge_floor);

std::string describe(const PatternViolation& v);

}  // namespace siep

#endif  // SIEP_GRAPH_HPP
