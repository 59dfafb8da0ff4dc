//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/data.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nomenkit/error.h"

namespace nomenkit {

std::string load_data_file(std::string_view name) {
  if (const char *dir = std::getenv("NOMENKIT_DATA_DIR"); dir != nullptr && *dir != '\0') {
    const std::string path = std::string(dir) + "/" + std::string(name);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IoError", "cannot read data table " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
  for (std::size_t i = 0; i < detail::kEmbeddedFileCount; ++i) {
    if (detail::kEmbeddedFiles[i].name == name) return std::string(detail::kEmbeddedFiles[i].content);
  }
  throw Error("IoError", "no bundled data table named " + std::string(name));
}

}  // namespace nomenkit
