//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_DESCRIPTORS_H_
#define NOMENKIT_DESCRIPTORS_H_

#include <memory>
#include <string>
#include <vector>

#include "nomenkit/chem/graph.h"
#include "nomenkit/chem/smarts.h"

namespace nomenkit {

struct SubstructurePattern {
  std::string name;
  std::shared_ptr<const SmartsPattern> pattern;
};

// Bundled forbidden functional groups, in table order.
const std::vector<SubstructurePattern> &default_forbidden_patterns();

// Element symbols accepted by the default whitelist.
const std::vector<std::string> &default_element_whitelist();

struct DescriptorSet {
  double mw = 0.0;
  // fsp3 is sp3_carbons / carbons (0 without carbon); the counts are kept
  // so thresholds can be compared exactly.
  int carbons = 0;
  int sp3_carbons = 0;
  double fsp3 = 0.0;
  int heavy_atoms = 0;
  int n_rings = 0;
  int n_aromatic_rings = 0;
  int n_phenyl_rings = 0;
  int n_rotatable = 0;
  int net_formal_charge = 0;
  double tpsa = 0.0;
  double clogp = 0.0;
  int hbd = 0;
  // Names of matched forbidden patterns, in pattern-list order.
  std::vector<std::string> forbidden_groups;
  // Distinct element symbols present (hydrogen included when any H exists).
  std::vector<std::string> elements;
  bool element_violation = false;
  bool multi_fragment = false;
  bool has_isotope = false;
  // Atoms that matched no cLogP type and took the default contribution.
  int untyped_atoms = 0;
};

struct DescriptorOptions {
  std::vector<std::string> element_whitelist = default_element_whitelist();
  std::vector<SubstructurePattern> forbidden = default_forbidden_patterns();
  // Count S and P polar contributions in TPSA.
  bool tpsa_include_s_and_p = false;
};

// Individual descriptors. The graph must come from read_smiles (rings and
// aromaticity perceived).
double molecular_weight(const MolecularGraph &graph);
double fraction_sp3(const MolecularGraph &graph);
struct RingCounts {
  int rings = 0;
  int aromatic = 0;
  int phenyl = 0;
};
RingCounts ring_counts(const MolecularGraph &graph);
int rotatable_bonds(const MolecularGraph &graph);
int hydrogen_bond_donors(const MolecularGraph &graph);
double tpsa(const MolecularGraph &graph, bool include_s_and_p = false);
// Crippen-Wildman cLogP. `untyped`, when given, receives the number of
// atoms that matched no type.
double clogp(const MolecularGraph &graph, int *untyped = nullptr);
bool match_pattern(const MolecularGraph &graph, const SubstructurePattern &pattern);

DescriptorSet compute_descriptors(const MolecularGraph &graph,
                                  const DescriptorOptions &options = DescriptorOptions());

}  // namespace nomenkit

#endif  // NOMENKIT_DESCRIPTORS_H_
