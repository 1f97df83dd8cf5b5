#include "infonav/io.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>
#include <vector>

namespace infonav {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"') field = field.substr(1, field.size() - 2);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

bool is_comment_or_blank(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

/// Interns labels in first-appearance order.
class LabelTable {
 public:
  Index intern(std::string_view label) {
    auto [it, inserted] = index_.try_emplace(std::string(label), static_cast<Index>(labels_.size()));
    if (inserted) labels_.emplace_back(label);
    return it->second;
  }
  std::vector<std::string> release() { return std::move(labels_); }

 private:
  std::unordered_map<std::string, Index> index_;
  std::vector<std::string> labels_;
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path.string() + "'");
  return in;
}

}  // namespace

EdgeListFormat parse_edge_list_format(std::string_view name) {
  if (name == "tsv") return EdgeListFormat::tsv;
  if (name == "csv") return EdgeListFormat::csv;
  throw InputError("unknown edge list format '" + std::string(name) + "'");
}

Graph parse_edge_list(std::istream& in, EdgeListFormat format, double default_weight, const std::string& source_name,
                      IngestStats* stats) {
  if (!(default_weight >= 0.0)) throw InputError("default weight must be nonnegative");
  LabelTable labels;
  std::vector<WeightedEdge<double>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    const auto fields = format == EdgeListFormat::csv ? split_commas(trim(line)) : split_whitespace(line);
    if (fields.size() < 2 || fields.size() > 3) throw ParseError(source_name, line_no, "expected src,dst[,weight]");
    if (fields[0].empty() || fields[1].empty()) throw ParseError(source_name, line_no, "empty node label");
    double weight = default_weight;
    if (fields.size() == 3) {
      const auto parsed = parse_double(fields[2]);
      if (!parsed) throw ParseError(source_name, line_no, "bad weight '" + std::string(fields[2]) + "'");
      weight = *parsed;
    }
    if (!(weight >= 0.0)) throw ParseError(source_name, line_no, "negative weight");
    if (fields[0] == fields[1])
      throw ParseError(source_name, line_no, "self-loop on node '" + std::string(fields[0]) + "'");
    const Index a = labels.intern(fields[0]);
    const Index b = labels.intern(fields[1]);
    edges.push_back({a, b, weight});
  }
  BuildStats build;
  Graph g = Graph::from_edges(labels.release(), edges, &build);
  if (stats) {
    stats->records = static_cast<Index>(edges.size());
    stats->dropped_isolated = build.dropped_isolated;
    stats->weighting_rule = "sum of record weights";
  }
  return g;
}

Graph load_edge_list(const std::filesystem::path& path, EdgeListFormat format, double default_weight,
                     IngestStats* stats) {
  auto in = open_input(path);
  return parse_edge_list(in, format, default_weight, path.string(), stats);
}

CapacityTable parse_capacity_table(std::istream& in, const std::string& source_name) {
  CapacityTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_commas(trim(line));
    if (fields.size() != 2 || fields[0].empty()) throw ParseError(source_name, line_no, "expected code,seats");
    const auto seats = parse_double(fields[1]);
    if (!seats || !(*seats > 0.0)) throw ParseError(source_name, line_no, "seat count must be a positive number");
    table[std::string(fields[0])] = *seats;
  }
  return table;
}

CapacityTable load_capacity_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_capacity_table(in, path.string());
}

Graph parse_openflights(std::istream& in, const CapacityTable* capacity, const std::string& source_name,
                        IngestStats* stats) {
  LabelTable labels;
  std::vector<WeightedEdge<double>> edges;
  Index rows = 0, malformed = 0, unknown = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (is_comment_or_blank(line)) continue;
    ++rows;
    const auto fields = split_commas(trim(line));
    if (fields.size() < 5) {
      ++malformed;
      continue;
    }
    const auto src = fields[2];
    const auto dst = fields[4];
    if (src.empty() || dst.empty() || src == "\\N" || dst == "\\N" || src == dst) {
      ++malformed;
      continue;
    }
    double weight = 1.0;
    if (capacity) {
      double seats = 0.0;
      int known = 0;
      if (fields.size() >= 9)
        for (auto code : split_whitespace(fields[8]))
          if (auto it = capacity->find(std::string(code)); it != capacity->end()) {
            seats += it->second;
            ++known;
          }
      if (known > 0)
        weight = seats / known;
      else
        ++unknown;
    }
    edges.push_back({labels.intern(src), labels.intern(dst), weight});
  }
  if (rows > 0 && static_cast<double>(malformed) > kMaxMalformedFraction * static_cast<double>(rows))
    throw InputError(fmt::format("{}: {} of {} route rows are malformed", source_name, malformed, rows));
  if (edges.empty()) throw InputError(source_name + ": no edges");

  BuildStats build;
  Graph g = Graph::from_edges(labels.release(), edges, &build);
  if (stats) {
    stats->records = static_cast<Index>(edges.size());
    stats->malformed_rows = malformed;
    stats->unknown_equipment = unknown;
    stats->dropped_isolated = build.dropped_isolated;
    stats->weighting_rule = capacity ? "sum over routes of mean equipment capacity (unknown codes count 1)"
                                     : "number of route records, both directions merged";
  }
  return g;
}

Graph load_openflights(const std::filesystem::path& routes, const std::optional<std::filesystem::path>& capacity,
                       IngestStats* stats) {
  std::optional<CapacityTable> table;
  if (capacity) table = load_capacity_table(*capacity);
  auto in = open_input(routes);
  return parse_openflights(in, table ? &*table : nullptr, routes.string(), stats);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  std::vector<std::tuple<std::string_view, std::string_view, double>> rows;
  for (const auto& e : g.edges()) {
    std::string_view a = g.label(e.source), b = g.label(e.target);
    if (b < a) std::swap(a, b);
    rows.emplace_back(a, b, e.weight);
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [a, b, w] : rows) out << fmt::format("{}\t{}\t{}\n", a, b, w);
}

std::string canonical_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InputError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace infonav
