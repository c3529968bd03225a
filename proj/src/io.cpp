#include "siep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace siep::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw ParseError("not a number: '" + token + "'");
  return v;
}

namespace {

long parse_index(const std::string& token) {
  long v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw ParseError("not an integer: '" + token + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> out;
  for (std::string tok; ls >> tok;) out.push_back(tok);
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

}  // namespace

void write_coo_sym(std::ostream& os, const SymMatrixd& a) {
  const Eigen::Index n = a.order();
  os << n << '\n';
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      if (a(i, j) != 0.0 || std::signbit(a(i, j))) os << i << ' ' << j << ' ' << format_double(a(i, j)) << '\n';
}

SymMatrixd read_coo_sym(std::istream& is) {
  std::string line;
  std::vector<std::string> header;
  while (header.empty() && std::getline(is, line)) header = split_ws(line);
  if (header.size() != 1) throw ParseError("COO-SYM: first line must hold the order");
  const long n = parse_index(header[0]);
  if (n < 1) throw ParseError("COO-SYM: order must be >= 1");
  MatrixX<double> m = MatrixX<double>::Zero(n, n);
  std::vector<bool> seen(static_cast<std::size_t>(n * n), false);
  long line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 3) throw ParseError("COO-SYM line " + std::to_string(line_no) + ": expected `i j value`");
    const long i = parse_index(tok[0]), j = parse_index(tok[1]);
    if (i < 0 || j >= n || i > j)
      throw ParseError("COO-SYM line " + std::to_string(line_no) + ": need 0 <= i <= j < n");
    const auto slot = static_cast<std::size_t>(i * n + j);
    if (seen[slot]) throw ParseError("COO-SYM line " + std::to_string(line_no) + ": duplicate entry");
    seen[slot] = true;
    const double v = parse_double(tok[2]);
    if (!std::isfinite(v)) throw ParseError("COO-SYM line " + std::to_string(line_no) + ": non-finite value");
    m(i, j) = m(j, i) = v;
  }
  return SymMatrixd(std::move(m));
}

void save_coo_sym(const std::filesystem::path& path, const SymMatrixd& a) {
  std::ostringstream os;
  write_coo_sym(os, a);
  save_text(path, os.str());
}

SymMatrixd load_coo_sym(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_coo_sym(in);
}

LowerAdjacencyStream read_ladj(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("LADJ: missing header");
  const auto head = split_ws(line);
  if (head.size() < 2 || head[0] != "ladj" || head[1] != "v1") throw ParseError("LADJ: header must start `ladj v1`");
  std::map<std::string, std::string> kv;
  std::string tag;
  for (std::size_t k = 2; k < head.size(); ++k) {
    const auto eq = head[k].find('=');
    if (eq == std::string::npos) throw ParseError("LADJ: header token '" + head[k] + "' is not key=value");
    kv[head[k].substr(0, eq)] = head[k].substr(eq + 1);
    tag += (tag.empty() ? "" : " ") + head[k];
  }

  std::vector<std::vector<Vertex>> rows;
  while (std::getline(is, line)) {
    std::vector<Vertex> row;
    for (const auto& tok : split_ws(line)) row.push_back(parse_index(tok));
    rows.push_back(std::move(row));
  }

  if (rows.empty() && kv.count("family")) {
    const auto fam = parse_graph_family(kv["family"]);
    if (!fam) throw ParseError("LADJ: unknown family '" + kv["family"] + "'");
    double p = 0.5;
    std::uint64_t seed = 0;
    if (kv.count("p")) p = parse_double(kv["p"]);
    if (kv.count("seed")) seed = std::stoull(kv["seed"]);
    return LowerAdjacencyStream::family(*fam, p, seed);
  }
  try {
    return LowerAdjacencyStream::records(std::move(rows), tag);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

LowerAdjacencyStream load_ladj(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_ladj(in);
}

void write_ladj(std::ostream& os, LowerAdjacencyStream& stream, Eigen::Index rows) {
  os << stream.header() << '\n';
  stream.reset();
  for (Eigen::Index k = 0; k < rows; ++k) {
    auto row = stream.next();
    if (!row) break;
    for (std::size_t t = 0; t < row->size(); ++t) os << (t ? " " : "") << (*row)[t];
    os << '\n';
  }
}

nlohmann::json graph_to_json(const FiniteGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.i, e.j});
  return {{"n", g.n()}, {"edges", edges}};
}

FiniteGraph graph_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<long>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("graph JSON: edge must be [i, j]");
      edges.push_back({e[0].get<long>(), e[1].get<long>()});
    }
    return FiniteGraph(n, std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
}

FiniteGraph load_graph_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return graph_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
}

std::vector<double> read_spectrum(std::istream& is) {
  std::vector<double> out;
  for (std::string tok; is >> tok;) out.push_back(parse_double(tok));
  return out;
}

std::vector<double> load_spectrum(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_spectrum(in);
}

void save_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string load_text(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace siep::io
