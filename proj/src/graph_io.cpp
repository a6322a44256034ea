#include "gnutellab/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace gnutellab {
namespace {

const std::string kEmptyField = "-";

const std::string& encode_field(const std::string& s) { return s.empty() ? kEmptyField : s; }
std::string decode_field(const std::string& s) { return s == kEmptyField ? std::string{} : s; }

template <typename T>
T parse_unsigned(const std::string& token, const char* what, const std::string& source,
                 std::size_t line) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(source, line, std::string("invalid ") + what + " '" + token + "'");
  }
  return value;
}

}  // namespace

void write_graph(const OverlayGraph& graph, std::ostream& out) {
  out << "# gnutellab overlay graph: " << graph.node_count() << " nodes, " << graph.edge_count()
      << " edges\n";
  for (NodeId id : graph.nodes()) {
    const NodeInfo& info = graph.info(id);
    out << "node " << id << ' ' << encode_field(info.address) << ' ' << info.port << ' '
        << encode_field(info.domain) << ' ' << encode_field(info.as_label) << ' '
        << info.files_shared << ' ' << info.kbytes_shared << '\n';
  }
  for (const auto& [a, b] : graph.edges()) out << "edge " << a << ' ' << b << '\n';
}

OverlayGraph read_graph(std::istream& in, const std::string& source_name) {
  OverlayGraph graph;
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> tokens;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    tokens.clear();
    for (std::string tok; fields >> tok;) tokens.push_back(std::move(tok));
    if (tokens.empty()) continue;

    if (tokens[0] == "node") {
      if (tokens.size() != 8) {
        throw ParseError(source_name, line_no,
                         "node record needs 7 fields, got " + std::to_string(tokens.size() - 1));
      }
      const auto id = parse_unsigned<NodeId>(tokens[1], "node id", source_name, line_no);
      NodeInfo info;
      info.address = decode_field(tokens[2]);
      info.port = parse_unsigned<std::uint16_t>(tokens[3], "port", source_name, line_no);
      info.domain = decode_field(tokens[4]);
      info.as_label = decode_field(tokens[5]);
      info.files_shared = parse_unsigned<std::uint64_t>(tokens[6], "file count", source_name, line_no);
      info.kbytes_shared = parse_unsigned<std::uint64_t>(tokens[7], "kbytes", source_name, line_no);
      if (graph.contains(id)) {
        throw ParseError(source_name, line_no, "duplicate node id " + tokens[1]);
      }
      graph.insert_node(id, std::move(info));
    } else if (tokens[0] == "edge") {
      if (tokens.size() != 3) {
        throw ParseError(source_name, line_no,
                         "edge record needs 2 fields, got " + std::to_string(tokens.size() - 1));
      }
      const auto a = parse_unsigned<NodeId>(tokens[1], "node id", source_name, line_no);
      const auto b = parse_unsigned<NodeId>(tokens[2], "node id", source_name, line_no);
      for (NodeId end : {a, b}) {
        if (!graph.contains(end)) {
          throw ParseError(source_name, line_no,
                           "edge references undeclared node " + std::to_string(end));
        }
      }
      if (a == b) throw ParseError(source_name, line_no, "self-loop on node " + tokens[1]);
      if (!graph.add_edge(a, b)) {
        throw ParseError(source_name, line_no, "duplicate edge " + tokens[1] + " " + tokens[2]);
      }
    } else {
      throw ParseError(source_name, line_no, "unknown record type '" + tokens[0] + "'");
    }
  }
  return graph;
}

void save_graph(const OverlayGraph& graph, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_graph(graph, out);
  if (!out) throw IoError("write failed for " + path.string());
}

OverlayGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_graph(in, path.string());
}

}  // namespace gnutellab
