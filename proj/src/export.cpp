#include "kwnet/export.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "kwnet/error.hpp"

namespace kwnet {
namespace {

// Quotes only when the field needs it.
std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  return csv_quote(field);
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::int64_t parse_integer(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error("invalid " + std::string(what) + ": \"" + std::string(text) + "\"");
  }
  return value;
}

std::string format_mean(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  std::string text(buffer, ptr);
  if (text.find_first_of(".e") == std::string::npos) text += ".0";
  return text;
}

void expect_header(const std::vector<std::string>& fields,
                   std::initializer_list<std::string_view> expected, std::string_view what) {
  if (fields.size() != expected.size() || !std::equal(fields.begin(), fields.end(), expected.begin())) {
    throw Error("unexpected " + std::string(what) + " CSV header");
  }
}

void check(std::ostream& out, std::string_view what) {
  if (!out) throw IoError("failed writing " + std::string(what));
}

}  // namespace

void write_edge_csv(std::ostream& out, const KeywordGraph& graph) {
  out << "source,target,weight\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j = i + 1; j < graph.size(); ++j) {
      if (const std::int64_t w = graph.weight(i, j); w > 0) {
        out << csv_quote(graph.keyword(i)) << ',' << csv_quote(graph.keyword(j)) << ',' << w << '\n';
      }
    }
  }
  check(out, "edge CSV");
}

void write_vertex_csv(std::ostream& out, const KeywordGraph& graph) {
  out << "keyword,frequency,strength\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    out << csv_quote(graph.keyword(i)) << ',' << graph.frequency(i) << ',' << graph.strength(i) << '\n';
  }
  check(out, "vertex CSV");
}

void write_adjacency_csv(std::ostream& out, const KeywordGraph& graph) {
  out << "keyword";
  for (const std::string& keyword : graph.keywords()) out << ',' << csv_quote(keyword);
  out << '\n';
  for (std::size_t i = 0; i < graph.size(); ++i) {
    out << csv_quote(graph.keyword(i));
    for (std::size_t j = 0; j < graph.size(); ++j) out << ',' << graph.weight(i, j);
    out << '\n';
  }
  check(out, "adjacency CSV");
}

void write_partition_csv(std::ostream& out, const KeywordGraph& graph, const Partition& partition) {
  if (partition.size() != graph.size()) throw GraphError("partition does not cover the graph");
  out << "keyword,community\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    out << csv_quote(graph.keyword(i)) << ',' << partition.label(i) << '\n';
  }
  check(out, "partition CSV");
}

KeywordGraph read_edge_csv(std::istream& edges, std::istream* vertices) {
  std::vector<std::string> keywords;
  std::vector<std::int64_t> frequencies;
  std::unordered_map<std::string, std::size_t> index;
  const auto intern = [&](const std::string& keyword) {
    auto [it, inserted] = index.try_emplace(keyword, keywords.size());
    if (inserted) {
      keywords.push_back(keyword);
      frequencies.push_back(0);
    }
    return it->second;
  };

  std::vector<std::string> fields;
  if (vertices) {
    CsvReader reader(*vertices);
    if (!reader.next(fields)) throw Error("empty vertex CSV");
    expect_header(fields, {"keyword", "frequency", "strength"}, "vertex");
    while (reader.next(fields)) {
      if (fields.size() != 3) throw Error("malformed vertex CSV row on line " + std::to_string(reader.record_line()));
      if (index.contains(fields[0])) throw Error("repeated vertex " + fields[0]);
      frequencies[intern(fields[0])] = parse_integer(fields[1], "frequency");
    }
  }

  struct Edge {
    std::size_t a, b;
    std::int64_t w;
  };
  std::vector<Edge> list;
  CsvReader reader(edges);
  if (!reader.next(fields)) throw Error("empty edge CSV");
  expect_header(fields, {"source", "target", "weight"}, "edge");
  while (reader.next(fields)) {
    if (fields.size() != 3) throw Error("malformed edge CSV row on line " + std::to_string(reader.record_line()));
    if (vertices && (!index.contains(fields[0]) || !index.contains(fields[1]))) {
      throw Error("edge references an unknown vertex on line " + std::to_string(reader.record_line()));
    }
    const std::size_t a = intern(fields[0]);
    const std::size_t b = intern(fields[1]);
    if (a == b) throw Error("self-loop on line " + std::to_string(reader.record_line()));
    list.push_back({a, b, parse_integer(fields[2], "weight")});
  }

  const std::size_t n = keywords.size();
  std::vector<std::int64_t> weights(n * n, 0);
  for (const Edge& e : list) {
    if (weights[e.a * n + e.b] != 0) throw Error("repeated edge " + keywords[e.a] + " - " + keywords[e.b]);
    weights[e.a * n + e.b] = e.w;
    weights[e.b * n + e.a] = e.w;
  }
  return KeywordGraph(std::move(keywords), std::move(weights), std::move(frequencies));
}

Partition read_partition_csv(std::istream& in, const KeywordGraph& graph) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> labels(graph.size(), kUnset);
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw Error("empty partition CSV");
  expect_header(fields, {"keyword", "community"}, "partition");
  while (reader.next(fields)) {
    if (fields.size() != 2) throw Error("malformed partition CSV row on line " + std::to_string(reader.record_line()));
    const auto vertex = graph.index_of(fields[0]);
    if (!vertex) throw Error("partition names unknown keyword " + fields[0]);
    const std::int64_t label = parse_integer(fields[1], "community");
    if (label < 0) throw Error("negative community label");
    labels[*vertex] = static_cast<std::size_t>(label);
  }
  if (std::find(labels.begin(), labels.end(), kUnset) != labels.end()) {
    throw Error("partition does not assign every keyword");
  }
  return Partition(labels);
}

void write_gexf(std::ostream& out, const KeywordGraph& graph, const Partition& partition,
                std::string_view description) {
  if (partition.size() != graph.size()) throw GraphError("partition does not cover the graph");
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n"
      << "  <meta>\n"
      << "    <creator>kwnet</creator>\n";
  if (!description.empty()) out << "    <description>" << xml_escape(description) << "</description>\n";
  out << "  </meta>\n"
      << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n"
      << "    <attributes class=\"node\">\n"
      << "      <attribute id=\"0\" title=\"community\" type=\"integer\"/>\n"
      << "      <attribute id=\"1\" title=\"strength\" type=\"integer\"/>\n"
      << "    </attributes>\n"
      << "    <nodes>\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const std::string id = xml_escape(graph.keyword(i));
    out << "      <node id=\"" << id << "\" label=\"" << id << "\">\n"
        << "        <attvalues>\n"
        << "          <attvalue for=\"0\" value=\"" << partition.label(i) << "\"/>\n"
        << "          <attvalue for=\"1\" value=\"" << graph.strength(i) << "\"/>\n"
        << "        </attvalues>\n"
        << "      </node>\n";
  }
  out << "    </nodes>\n"
      << "    <edges>\n";
  std::size_t edge_id = 0;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j = i + 1; j < graph.size(); ++j) {
      if (const std::int64_t w = graph.weight(i, j); w > 0) {
        out << "      <edge id=\"" << edge_id++ << "\" source=\"" << xml_escape(graph.keyword(i))
            << "\" target=\"" << xml_escape(graph.keyword(j)) << "\" weight=\"" << w << "\"/>\n";
      }
    }
  }
  out << "    </edges>\n"
      << "  </graph>\n"
      << "</gexf>\n";
  check(out, "GEXF");
}

void export_gexf(const KeywordGraph& graph, const Partition& partition,
                 const std::filesystem::path& path, std::string_view description) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_gexf(out, graph, partition, description);
}

GexfDocument read_gexf(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(std::string("malformed GEXF: ") + e.what());
  }
  try {
    const pt::ptree& graph_node = tree.get_child("gexf.graph");
    if (graph_node.get<std::string>("<xmlattr>.defaultedgetype", "undirected") != "undirected") {
      throw Error("only undirected GEXF graphs are supported");
    }
    std::string community_attr;
    std::string strength_attr;
    if (const auto attributes = graph_node.get_child_optional("attributes")) {
      for (const auto& [tag, attribute] : *attributes) {
        if (tag != "attribute") continue;
        const std::string title = attribute.get<std::string>("<xmlattr>.title");
        if (title == "community") community_attr = attribute.get<std::string>("<xmlattr>.id");
        if (title == "strength") strength_attr = attribute.get<std::string>("<xmlattr>.id");
      }
    }
    if (community_attr.empty()) throw Error("GEXF lacks a community attribute");

    std::vector<std::string> keywords;
    std::vector<std::size_t> labels;
    std::vector<std::int64_t> strengths;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& [tag, node] : graph_node.get_child("nodes")) {
      if (tag != "node") continue;
      const std::string id = node.get<std::string>("<xmlattr>.id");
      if (!index.emplace(id, keywords.size()).second) throw Error("repeated GEXF node " + id);
      keywords.push_back(id);
      std::optional<std::int64_t> community;
      std::optional<std::int64_t> strength;
      if (const auto values = node.get_child_optional("attvalues")) {
        for (const auto& [vtag, value] : *values) {
          if (vtag != "attvalue") continue;
          const std::string key = value.get<std::string>("<xmlattr>.for");
          const std::string text = value.get<std::string>("<xmlattr>.value");
          if (key == community_attr) community = parse_integer(text, "community");
          if (key == strength_attr) strength = parse_integer(text, "strength");
        }
      }
      if (!community || *community < 0) throw Error("GEXF node " + id + " lacks a community");
      labels.push_back(static_cast<std::size_t>(*community));
      strengths.push_back(strength.value_or(-1));
    }

    const std::size_t n = keywords.size();
    std::vector<std::int64_t> weights(n * n, 0);
    if (const auto edges = graph_node.get_child_optional("edges")) {
      for (const auto& [tag, edge] : *edges) {
        if (tag != "edge") continue;
        const auto a = index.find(edge.get<std::string>("<xmlattr>.source"));
        const auto b = index.find(edge.get<std::string>("<xmlattr>.target"));
        if (a == index.end() || b == index.end()) throw Error("GEXF edge references an unknown node");
        const std::int64_t w = parse_integer(edge.get<std::string>("<xmlattr>.weight", "1"), "weight");
        weights[a->second * n + b->second] += w;
        if (a->second != b->second) weights[b->second * n + a->second] += w;
      }
    }
    KeywordGraph graph(std::move(keywords), std::move(weights));
    for (std::size_t i = 0; i < n; ++i) {
      if (strengths[i] >= 0 && strengths[i] != graph.strength(i)) {
        throw Error("GEXF strength attribute disagrees with edge weights for " + graph.keyword(i));
      }
    }
    return {std::move(graph), Partition(labels)};
  } catch (const pt::ptree_error& e) {
    throw Error(std::string("malformed GEXF: ") + e.what());
  }
}

void write_heatmap_csv(std::ostream& out, std::span<const RunReport> reports) {
  for (const RunReport& report : reports) {
    if (report.period != reports.front().period) {
      throw ConfigError("heatmap reports mix month and quarter buckets");
    }
  }
  std::set<std::string> columns;
  for (const RunReport& report : reports) {
    for (const BucketResult& bucket : report.buckets) columns.insert(bucket.bucket.label());
  }
  out << "account";
  for (const std::string& column : columns) out << ',' << column;
  out << ",mean\n";
  for (const RunReport& report : reports) {
    std::map<std::string, std::size_t> cells;
    for (const BucketResult& bucket : report.buckets) cells[bucket.bucket.label()] = bucket.community_count;
    out << csv_field(report.label);
    double sum = 0.0;
    for (const std::string& column : columns) {
      out << ',';
      if (auto it = cells.find(column); it != cells.end()) {
        out << it->second;
        sum += static_cast<double>(it->second);
      }
    }
    out << ',';
    if (!cells.empty()) out << format_mean(sum / static_cast<double>(cells.size()));
    out << '\n';
  }
  check(out, "heatmap CSV");
}

void export_heatmap_csv(std::span<const RunReport> reports, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_heatmap_csv(out, reports);
}

std::string file_stem_for(std::string_view label) {
  std::string stem;
  for (char c : label) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '_' || c == '.') {
      stem.push_back(static_cast<char>(std::tolower(u)));
    } else {
      stem.push_back('_');
    }
  }
  if (stem.empty() || stem.front() == '.') stem.insert(stem.begin(), 'x');
  return stem;
}

}  // namespace kwnet
