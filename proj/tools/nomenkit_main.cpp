//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>

#include "cli.h"

int main(int argc, char **argv) {
  return nomenkit::cli::run(argc, argv, std::cout, std::cerr);
}
