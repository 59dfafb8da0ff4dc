//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_ERROR_H_
#define NOMENKIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace nomenkit {

// Data or I/O failure reported to the user. `kind` is a stable identifier
// such as "MalformedRow", "DuplicateId", "InvalidConfig" or "IoError".
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string &message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string &kind() const { return kind_; }

private:
  std::string kind_;
};

}  // namespace nomenkit

#endif  // NOMENKIT_ERROR_H_
