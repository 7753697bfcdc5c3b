#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kwnet/community.hpp"
#include "kwnet/cooccur.hpp"
#include "kwnet/report.hpp"

namespace kwnet {

/// Quotes a CSV field, doubling embedded quotes.
std::string csv_quote(std::string_view field);

/// Streaming RFC 4180 reader: quoted fields may hold commas, doubled quotes and
/// line breaks. Accepts LF and CRLF and skips a leading UTF-8 BOM.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in);

  /// Reads the next record. Returns false at end of input. Throws Error on an
  /// unterminated quoted field.
  bool next(std::vector<std::string>& fields);
  /// Line on which the last record returned by next() started (1-based).
  std::size_t record_line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
  bool started_ = false;
};

/// "source,target,weight", one row per pair i < j with positive weight.
void write_edge_csv(std::ostream& out, const KeywordGraph& graph);
/// "keyword,frequency,strength" in vertex order.
void write_vertex_csv(std::ostream& out, const KeywordGraph& graph);
/// Dense matrix: header "keyword" plus the quoted keywords, then one row per vertex.
void write_adjacency_csv(std::ostream& out, const KeywordGraph& graph);
/// "keyword,community".
void write_partition_csv(std::ostream& out, const KeywordGraph& graph, const Partition& partition);

/// Reads an edge CSV (and optional vertex CSV for isolated vertices and
/// frequencies) back into a graph. Vertices appear in vertex-CSV order, else
/// in order of first mention.
KeywordGraph read_edge_csv(std::istream& edges, std::istream* vertices = nullptr);
/// Reads "keyword,community" rows in the vertex order of `graph`.
Partition read_partition_csv(std::istream& in, const KeywordGraph& graph);

/// GEXF 1.2 document: undirected static graph, node id = keyword, node
/// attributes community (0) and strength (1), edge weights. Vertex order.
void write_gexf(std::ostream& out, const KeywordGraph& graph, const Partition& partition,
                std::string_view description = {});
void export_gexf(const KeywordGraph& graph, const Partition& partition,
                 const std::filesystem::path& path, std::string_view description = {});

struct GexfDocument {
  KeywordGraph graph;
  Partition partition;
};

/// Parses a document produced by write_gexf. Throws Error on malformed input.
GexfDocument read_gexf(std::istream& in);

/// Rows are report labels, columns the union of bucket labels in order, cells
/// the community count (blank when the bucket is absent), plus a "mean" column
/// over the nonblank cells. Throws ConfigError on mixed period kinds.
void write_heatmap_csv(std::ostream& out, std::span<const RunReport> reports);
void export_heatmap_csv(std::span<const RunReport> reports, const std::filesystem::path& path);

/// Lowercase, filesystem-safe version of a label.
std::string file_stem_for(std::string_view label);

}  // namespace kwnet
