//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_CHEM_SMARTS_H_
#define NOMENKIT_CHEM_SMARTS_H_

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nomenkit/chem/graph.h"

namespace nomenkit {

class SmartsError : public std::invalid_argument {
public:
  SmartsError(const std::string &pattern, std::size_t offset, const std::string &detail);
};

// Compiled substructure pattern. Supported: element symbols (aliphatic and
// aromatic), *, a, A, #n, H, D, X, v, R, r, x, charges, isotopes, recursive
// $(...), the operators ! & , ; and implicit and; bonds - = # : ~ @ / \ with
// the same operators; branches, ring closures and '.'.
//
// Targets must have had ring and aromaticity perception. Counts follow the
// usual conventions: H is the total hydrogen count including hydrogen
// neighbours, D the number of graph neighbours, X the total connection
// count, v the total bond-order valence (Kekule) plus hydrogens, R<n> the
// number of symmetrized rings containing the atom, r<n> the smallest of
// those ring sizes and x<n> the number of ring bonds.
class SmartsPattern {
public:
  explicit SmartsPattern(std::string_view smarts);
  ~SmartsPattern();
  SmartsPattern(SmartsPattern &&) noexcept;
  SmartsPattern &operator=(SmartsPattern &&) noexcept;

  const std::string &text() const;
  int atom_count() const;

  bool matches(const MolecularGraph &target) const;
  // True when some match maps pattern atom 0 onto `atom`.
  bool matches_at(const MolecularGraph &target, int atom) const;
  // All matches as target-atom lists indexed by pattern atom. With
  // `unique`, matches covering the same atom set are reported once.
  std::vector<std::vector<int>> find_all(const MolecularGraph &target, bool unique = true) const;

  // Local predicates used by the matcher, exposed so an independent search
  // can be checked against it.
  std::vector<std::pair<int, int>> bonds() const;
  bool atom_accepts(int pattern_atom, const MolecularGraph &target, int atom) const;
  bool bond_accepts(int pattern_bond, const MolecularGraph &target, int bond) const;

  struct Impl;

private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace nomenkit

#endif  // NOMENKIT_CHEM_SMARTS_H_
