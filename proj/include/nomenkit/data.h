//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_DATA_H_
#define NOMENKIT_DATA_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace nomenkit {

namespace detail {
struct EmbeddedFile {
  const char *name;
  std::string_view content;
};
extern const EmbeddedFile kEmbeddedFiles[];
extern const std::size_t kEmbeddedFileCount;
}  // namespace detail

// Contents of a bundled data table such as "crippen_contributions.tsv".
// When NOMENKIT_DATA_DIR is set the file is read from that directory
// instead. Throws Error("IoError") if the table does not exist.
std::string load_data_file(std::string_view name);

}  // namespace nomenkit

#endif  // NOMENKIT_DATA_H_
