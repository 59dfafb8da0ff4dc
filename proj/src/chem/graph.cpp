//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/chem/graph.h"

#include <algorithm>
#include <utility>

#include "nomenkit/chem/element.h"

namespace nomenkit {

std::string_view Atom::symbol() const {
  return element_symbol(atomic_number);
}

MolecularGraph::MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  rebuild_topology();
}

void MolecularGraph::rebuild_topology() {
  adjacency_.assign(atoms_.size(), {});
  for (int b = 0; b < bond_count(); ++b) {
    adjacency_[bonds_[b].begin].push_back(b);
    adjacency_[bonds_[b].end].push_back(b);
  }

  fragment_ids_.assign(atoms_.size(), -1);
  fragment_count_ = 0;
  std::vector<int> stack;
  for (int start = 0; start < atom_count(); ++start) {
    if (fragment_ids_[start] >= 0) continue;
    const int id = fragment_count_++;
    fragment_ids_[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b : adjacency_[a]) {
        const int n = bonds_[b].other(a);
        if (fragment_ids_[n] < 0) {
          fragment_ids_[n] = id;
          stack.push_back(n);
        }
      }
    }
  }
}

int MolecularGraph::bond_between(int a, int b) const {
  for (int bi : bonds_of(a)) {
    if (bonds_[bi].other(a) == b) return bi;
  }
  return -1;
}

int MolecularGraph::bond_order_sum(int atom) const {
  int sum = 0;
  for (int b : bonds_of(atom)) sum += bonds_[b].kekule_order;
  return sum;
}

int MolecularGraph::smallest_ring_size(int atom) const {
  int best = 0;
  for (int r : atoms_[atom].rings) {
    const int size = static_cast<int>(rings_[r].size());
    if (best == 0 || size < best) best = size;
  }
  return best;
}

bool MolecularGraph::in_ring_of_size(int atom, int size) const {
  return std::any_of(atoms_[atom].rings.begin(), atoms_[atom].rings.end(),
                     [&](int r) { return static_cast<int>(rings_[r].size()) == size; });
}

MolecularGraph with_explicit_hydrogens(const MolecularGraph &graph) {
  std::vector<Atom> atoms = graph.atoms();
  std::vector<Bond> bonds = graph.bonds();
  const int heavy = graph.atom_count();
  for (int a = 0; a < heavy; ++a) {
    const int count = atoms[a].total_h();
    atoms[a].explicit_h = 0;
    atoms[a].implicit_h = 0;
    for (int k = 0; k < count; ++k) {
      Atom h;
      h.atomic_number = 1;
      h.hybridization = Hybridization::kOther;
      h.source_offset = atoms[a].source_offset;
      Bond bond;
      bond.begin = a;
      bond.end = static_cast<int>(atoms.size());
      atoms.push_back(std::move(h));
      bonds.push_back(bond);
    }
  }
  MolecularGraph out(std::move(atoms), std::move(bonds));
  out.rings_perceived_ = graph.rings_perceived_;
  out.aromaticity_perceived_ = graph.aromaticity_perceived_;
  out.rings_ = graph.rings_;
  out.ring_bonds_ = graph.ring_bonds_;
  out.ring_aromatic_ = graph.ring_aromatic_;
  out.sssr_size_ = graph.sssr_size_;
  return out;
}

}  // namespace nomenkit
