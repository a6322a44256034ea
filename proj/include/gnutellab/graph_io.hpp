#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gnutellab/graph.hpp"

namespace gnutellab {

// Line-oriented text format:
//
//   node <id> <address> <port> <domain> <as> <files> <kbytes>
//   edge <id1> <id2>
//
// `#` starts a comment. Empty string fields are written as `-` and read
// back as empty. An edge may only reference nodes declared above it.
void write_graph(const OverlayGraph& graph, std::ostream& out);
OverlayGraph read_graph(std::istream& in, const std::string& source_name = "<stream>");

void save_graph(const OverlayGraph& graph, const std::filesystem::path& path);
OverlayGraph load_graph(const std::filesystem::path& path);

}  // namespace gnutellab
