//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "nomenkit/chem/element.h"
#include "nomenkit/chem/graph.h"

namespace nomenkit {
namespace {

enum class Donor { kNone, kVacant, kOne, kTwo };

constexpr int kMaxFusedRings = 6;

bool aromatic_element(int z) {
  switch (z) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 15:
  case 16:
  case 33:
  case 34:
  case 52:
    return true;
  default:
    return false;
  }
}

// Electrons an atom can contribute to a conjugated ring, or -1.
int available_electrons(const MolecularGraph &g, int a) {
  const Atom &atom = g.atom(a);
  const int dv = default_valence(atom.atomic_number);
  if (dv <= 1) return -1;
  const int degree = g.degree(a) + atom.total_h();
  if (degree > 3) return -1;
  const int nlp = std::max(outer_electrons(atom.atomic_number) - dv - atom.formal_charge, 0);
  int res = (dv - degree) + nlp;
  if (res > 1 && g.bond_order_sum(a) - g.degree(a) > 1) res = 1;
  return res;
}

Donor donor_type(const MolecularGraph &g, int a) {
  const Atom &atom = g.atom(a);
  const int nelec = available_electrons(g, a);
  if (nelec < 0) return Donor::kNone;

  bool cyclic_multiple = false;
  int exocyclic_partner = -1;
  for (int b : g.bonds_of(a)) {
    const Bond &bond = g.bond(b);
    if (bond.kekule_order < 2) continue;
    if (bond.in_ring) {
      cyclic_multiple = true;
    } else if (exocyclic_partner < 0) {
      exocyclic_partner = bond.other(a);
    }
  }

  if (nelec == 0) {
    if (exocyclic_partner >= 0) return Donor::kVacant;
    if (cyclic_multiple) return Donor::kOne;
    return Donor::kNone;
  }
  if (nelec == 1) {
    if (exocyclic_partner >= 0) {
      return more_electronegative(g.atom(exocyclic_partner).atomic_number, atom.atomic_number)
                 ? Donor::kVacant
                 : Donor::kOne;
    }
    if (cyclic_multiple) return Donor::kOne;
    if (atom.formal_charge > 0) return Donor::kVacant;
    return Donor::kNone;
  }
  if (cyclic_multiple || exocyclic_partner >= 0) return Donor::kOne;
  return Donor::kTwo;
}

bool candidate_atom(const MolecularGraph &g, int a, Donor donor) {
  const Atom &atom = g.atom(a);
  if (donor == Donor::kNone || !aromatic_element(atom.atomic_number)) return false;
  const int total_valence = g.bond_order_sum(a) + atom.total_h();
  if (total_valence > outer_electrons(atom.atomic_number) - atom.formal_charge) return false;
  int multiple = 0;
  for (int b : g.bonds_of(a)) {
    if (g.bond(b).kekule_order >= 2) ++multiple;
  }
  return multiple <= 1;
}

bool huckel(const std::vector<int> &atoms, const std::vector<Donor> &donors) {
  int low = 0;
  int high = 0;
  for (int a : atoms) {
    switch (donors[a]) {
    case Donor::kOne:
      ++low;
      ++high;
      break;
    case Donor::kTwo:
      low += 2;
      high += 2;
      break;
    default:
      break;
    }
  }
  if (high >= 6) {
    for (int e = low; e <= high; ++e) {
      if ((e - 2) % 4 == 0) return true;
    }
    return false;
  }
  return high == 2;
}

}  // namespace

MolecularGraph perceive_aromaticity(MolecularGraph graph) {
  if (!graph.rings_perceived_) graph = perceive_rings(std::move(graph));
  const MolecularGraph &g = graph;
  const int n = g.atom_count();

  for (Bond &b : graph.bonds_) b.order = static_cast<BondOrder>(b.kekule_order);
  for (Atom &a : graph.atoms_) a.aromatic = false;

  std::vector<Donor> donors(n, Donor::kNone);
  std::vector<bool> candidate(n, false);
  for (int a = 0; a < n; ++a) {
    donors[a] = donor_type(g, a);
    candidate[a] = candidate_atom(g, a, donors[a]);
  }

  std::vector<int> rings;
  for (int r = 0; r < static_cast<int>(g.rings().size()); ++r) {
    const auto &ring = g.rings()[r];
    if (std::all_of(ring.begin(), ring.end(), [&](int a) { return candidate[a]; })) {
      rings.push_back(r);
    }
  }

  // Fused systems: candidate rings sharing exactly one bond. Rings that
  // overlap on a longer path are treated as separate systems.
  auto share_bond = [&](int r1, int r2) {
    const auto &b1 = g.ring_bonds()[r1];
    const auto &b2 = g.ring_bonds()[r2];
    return std::count_if(b1.begin(), b1.end(), [&](int b) {
             return std::find(b2.begin(), b2.end(), b) != b2.end();
           }) == 1;
  };
  std::vector<int> system(rings.size(), -1);
  int systems = 0;
  for (std::size_t i = 0; i < rings.size(); ++i) {
    if (system[i] >= 0) continue;
    system[i] = systems;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < rings.size(); ++j) {
        if (system[j] < 0 && share_bond(rings[k], rings[j])) {
          system[j] = systems;
          stack.push_back(j);
        }
      }
    }
    ++systems;
  }

  std::vector<bool> aromatic_bond(g.bond_count(), false);
  std::vector<bool> aromatic_atom(n, false);
  for (int s = 0; s < systems; ++s) {
    std::vector<int> members;
    for (std::size_t i = 0; i < rings.size(); ++i) {
      if (system[i] == s) members.push_back(rings[i]);
    }
    std::set<int> system_bonds;
    for (int r : members) system_bonds.insert(g.ring_bonds()[r].begin(), g.ring_bonds()[r].end());
    auto all_done = [&] {
      return std::all_of(system_bonds.begin(), system_bonds.end(),
                         [&](int b) { return aromatic_bond[b]; });
    };

    const int limit = std::min(static_cast<int>(members.size()), kMaxFusedRings);
    for (int size = 1; size <= limit && !all_done(); ++size) {
      std::vector<int> pick;
      std::function<void(std::size_t)> choose = [&](std::size_t from) {
        if (static_cast<int>(pick.size()) == size) {
          std::vector<int> combo;
          for (int i : pick) combo.push_back(members[i]);
          // Combination must itself be connected through shared bonds.
          std::vector<bool> reached(combo.size(), false);
          reached[0] = true;
          for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t x = 0; x < combo.size(); ++x) {
              if (!reached[x]) continue;
              for (std::size_t y = 0; y < combo.size(); ++y) {
                if (!reached[y] && share_bond(combo[x], combo[y])) reached[y] = grew = true;
              }
            }
          }
          if (std::find(reached.begin(), reached.end(), false) != reached.end()) return;
          std::map<int, int> bond_uses;
          std::set<int> bonds;
          std::set<int> atoms;
          for (int r : combo) {
            for (int b : g.ring_bonds()[r]) ++bond_uses[b];
            bonds.insert(g.ring_bonds()[r].begin(), g.ring_bonds()[r].end());
            atoms.insert(g.rings()[r].begin(), g.rings()[r].end());
          }
          std::map<int, int> atom_uses;
          for (int r : combo) {
            for (int a : g.rings()[r]) {
              if (++atom_uses[a] > 2) return;
            }
          }
          if (std::all_of(bonds.begin(), bonds.end(), [&](int b) { return aromatic_bond[b]; })) return;
          if (!huckel(std::vector<int>(atoms.begin(), atoms.end()), donors)) return;
          // Bonds shared inside the combination stay localised.
          for (auto [b, uses] : bond_uses) {
            if (uses == 1) aromatic_bond[b] = true;
          }
          for (int a : atoms) aromatic_atom[a] = true;
          return;
        }
        for (std::size_t i = from; i < members.size(); ++i) {
          pick.push_back(static_cast<int>(i));
          choose(i + 1);
          pick.pop_back();
        }
      };
      choose(0);
    }
  }

  for (int b = 0; b < g.bond_count(); ++b) {
    if (aromatic_bond[b]) graph.bonds_[b].order = BondOrder::kAromatic;
  }
  for (int a = 0; a < n; ++a) graph.atoms_[a].aromatic = aromatic_atom[a];
  graph.ring_aromatic_.assign(g.symmetrized_rings().size(), 0);
  for (int r = 0; r < static_cast<int>(g.symmetrized_rings().size()); ++r) {
    const auto &bonds = g.symmetrized_ring_bonds()[r];
    graph.ring_aromatic_[r] =
        std::all_of(bonds.begin(), bonds.end(), [&](int b) { return aromatic_bond[b]; });
  }

  for (int a = 0; a < n; ++a) {
    Atom &atom = graph.atoms_[a];
    int doubles = 0;
    int triples = 0;
    for (int b : g.bonds_of(a)) {
      if (g.bond(b).kekule_order == 2) ++doubles;
      if (g.bond(b).kekule_order == 3) ++triples;
    }
    if (atom.atomic_number <= 1) {
      atom.hybridization = Hybridization::kOther;
    } else if (atom.aromatic) {
      atom.hybridization = Hybridization::kSp2;
    } else if (triples > 0 || doubles > 1) {
      atom.hybridization = Hybridization::kSp;
    } else if (doubles == 1) {
      atom.hybridization = Hybridization::kSp2;
    } else if (atom.atomic_number == 6 && g.degree(a) + atom.total_h() != 4) {
      // Carbocations and carbanions.
      atom.hybridization = Hybridization::kSp2;
    } else {
      atom.hybridization = Hybridization::kSp3;
    }
  }

  graph.aromaticity_perceived_ = true;
  return graph;
}

}  // namespace nomenkit
