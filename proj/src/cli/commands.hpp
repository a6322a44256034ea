#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

namespace gnutellab::cli {

// Reads the pipeline CSVs found under `inputs` and writes report.csv to
// `out_dir`; the text table goes to `text`. Throws IoError naming every
// missing file.
void write_report(const std::vector<std::filesystem::path>& inputs,
                  const std::filesystem::path& out_dir, std::ostream& text);

}  // namespace gnutellab::cli
