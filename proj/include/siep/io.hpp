#ifndef SIEP_IO_HPP
#define SIEP_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "siep/graph.hpp"
#include "siep/sym_matrix.hpp"

namespace siep::io {

/// Malformed input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& token);

// COO-SYM: first line n, then `i j value` with i <= j (0-based).
void write_coo_sym(std::ostream& os, const SymMatrixd& a);
SymMatrixd read_coo_sym(std::istream& is);
void save_coo_sym(const std::filesystem::path& path, const SymMatrixd& a);
SymMatrixd load_coo_sym(const std::filesystem::path& path);

// LADJ: `ladj v1 [key=value ...]` header, then one line of lower neighbours per
// vertex. A header naming a built-in family with no rows yields that family.
LowerAdjacencyStream read_ladj(std::istream& is);
LowerAdjacencyStream load_ladj(const std::filesystem::path& path);
void write_ladj(std::ostream& os, LowerAdjacencyStream& stream, Eigen::Index rows);

// Graph JSON: {"n": N, "edges": [[i, j], ...]}.
nlohmann::json graph_to_json(const FiniteGraph& g);
FiniteGraph graph_from_json(const nlohmann::json& j);
FiniteGraph load_graph_json(const std::filesystem::path& path);

/// Whitespace-separated decimals.
std::vector<double> read_spectrum(std::istream& is);
std::vector<double> load_spectrum(const std::filesystem::path& path);

void save_text(const std::filesystem::path& path, const std::string& text);
std::string load_text(const std::filesystem::path& path);

}  // namespace siep::io

#endif  // SIEP_IO_HPP
