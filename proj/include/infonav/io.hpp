#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "infonav/graph.hpp"

namespace infonav {

enum class EdgeListFormat {
  /// Whitespace-separated columns.
  tsv,
  /// Comma-separated columns.
  csv,
};

EdgeListFormat parse_edge_list_format(std::string_view name);

/// Counters collected while reading input files.
struct IngestStats {
  Index records = 0;
  Index malformed_rows = 0;
  Index unknown_equipment = 0;
  Index dropped_isolated = 0;
  std::string weighting_rule;
};

/// Edge list: one `src dst [weight]` record per line, '#' comments and
/// blank lines ignored. Duplicate records sum; labels are numbered in order
/// of first appearance. Self-loops and negative weights are ParseErrors.
Graph parse_edge_list(std::istream& in, EdgeListFormat format, double default_weight = 1.0,
                      const std::string& source_name = "<input>", IngestStats* stats = nullptr);

Graph load_edge_list(const std::filesystem::path& path, EdgeListFormat format, double default_weight = 1.0,
                     IngestStats* stats = nullptr);

/// Equipment code -> seats.
using CapacityTable = std::unordered_map<std::string, double>;

/// Two-column CSV `code,seats`; '#' comments allowed.
CapacityTable parse_capacity_table(std::istream& in, const std::string& source_name = "<capacity>");
CapacityTable load_capacity_table(const std::filesystem::path& path);

/// Maximum fraction of malformed OpenFlights rows tolerated before the
/// whole file is rejected.
inline constexpr double kMaxMalformedFraction = 0.10;

/// OpenFlights routes.dat (airline, airline id, source airport, source id,
/// destination airport, destination id, codeshare, stops, equipment).
///
/// Each route record adds one undirected unit of weight between its
/// airports, or the mean seat count of its known equipment codes when a
/// capacity table is given (records with no known code count 1). Malformed
/// rows are skipped and counted; more than 10% malformed is an InputError.
Graph parse_openflights(std::istream& in, const CapacityTable* capacity = nullptr,
                        const std::string& source_name = "<routes>", IngestStats* stats = nullptr);

Graph load_openflights(const std::filesystem::path& routes, const std::optional<std::filesystem::path>& capacity = {},
                       IngestStats* stats = nullptr);

/// Canonical edge list: `a<TAB>b<TAB>w` with a < b lexicographically, lines
/// sorted, weights in shortest round-trip form. Reading it back and writing
/// again reproduces the same bytes.
void write_edge_list(const Graph& g, std::ostream& out);
std::string canonical_edge_list(const Graph& g);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace infonav
