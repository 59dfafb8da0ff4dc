//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_CHEM_SMILES_H_
#define NOMENKIT_CHEM_SMILES_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "nomenkit/chem/graph.h"

namespace nomenkit {

enum class SmilesErrorKind {
  kEmptyInput,
  kUnclosedRing,
  kUnbalancedParenthesis,
  kUnknownElement,
  kValenceViolation,
  kSyntax,
};

std::string_view to_string(SmilesErrorKind kind);

class SmilesError : public std::runtime_error {
public:
  SmilesError(SmilesErrorKind kind, int offset, const std::string &detail);

  SmilesErrorKind kind() const { return kind_; }
  // Byte offset into the parsed text.
  int offset() const { return offset_; }

private:
  SmilesErrorKind kind_;
  int offset_;
};

// Parses a SMILES string into a hydrogen-complete Kekule graph. Aromatic
// (lower-case) input is kekulised; plain hydrogens written as atoms are
// folded into their neighbour's hydrogen count. Throws SmilesError.
MolecularGraph parse_smiles(std::string_view text);

// parse_smiles followed by ring and aromaticity perception.
MolecularGraph read_smiles(std::string_view text);

}  // namespace nomenkit

#endif  // NOMENKIT_CHEM_SMILES_H_
