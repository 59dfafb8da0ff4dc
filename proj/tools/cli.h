//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_TOOLS_CLI_H_
#define NOMENKIT_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace nomenkit::cli {

// Exit status: 0 success, 1 data error, 2 usage error. Errors are written to
// `err` as one JSON object on a single line.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

// Introspection for documentation tests.
std::vector<std::string> subcommands();
std::string help_text(const std::string &subcommand);
// (long flag, description) for every option of a subcommand.
std::vector<std::pair<std::string, std::string>> flags(const std::string &subcommand);

}  // namespace nomenkit::cli

#endif  // NOMENKIT_TOOLS_CLI_H_
