//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_CHEM_GRAPH_H_
#define NOMENKIT_CHEM_GRAPH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace nomenkit {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

enum class Hybridization : std::uint8_t { kSp3, kSp2, kSp, kOther };

// Stereo annotations are retained from the input but read by nothing.
enum class Chirality : std::uint8_t { kNone, kCounterClockwise, kClockwise, kOther };
enum class BondDirection : std::uint8_t { kNone, kUp, kDown };

struct Atom {
  int atomic_number = 0;
  int formal_charge = 0;
  std::optional<int> isotope;
  int explicit_h = 0;
  int implicit_h = 0;
  bool aromatic = false;
  // Lower-case (aromatic) symbol in the input text.
  bool written_aromatic = false;
  bool bracket = false;
  Chirality chirality = Chirality::kNone;
  Hybridization hybridization = Hybridization::kOther;
  // Indices into MolecularGraph::symmetrized_rings().
  std::vector<int> rings;
  // Byte offset of the atom in the source text.
  int source_offset = 0;

  int total_h() const { return explicit_h + implicit_h; }
  std::string_view symbol() const;
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;
  // Localised (Kekule) order, 1..3. Equals `order` for non-aromatic bonds.
  int kekule_order = 1;
  bool in_ring = false;
  BondDirection direction = BondDirection::kNone;

  int other(int atom) const { return atom == begin ? end : begin; }
  bool is_aromatic() const { return order == BondOrder::kAromatic; }
};

// Atom/bond graph with perception results. Instances are immutable once
// returned by the perception functions; each stage returns a new value.
class MolecularGraph {
public:
  MolecularGraph() = default;
  MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  const Atom &atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond &bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }

  // Bond indices incident on `atom`, in insertion order.
  std::span<const int> bonds_of(int atom) const {
    return adjacency_[static_cast<std::size_t>(atom)];
  }
  int degree(int atom) const { return static_cast<int>(bonds_of(atom).size()); }
  // Index of the bond joining a and b, or -1.
  int bond_between(int a, int b) const;
  // Sum of Kekule bond orders.
  int bond_order_sum(int atom) const;

  int fragment_count() const { return fragment_count_; }
  // Connected-component id per atom, numbered by first atom.
  const std::vector<int> &fragment_ids() const { return fragment_ids_; }

  bool rings_perceived() const { return rings_perceived_; }
  bool aromaticity_perceived() const { return aromaticity_perceived_; }
  // SSSR as atom cycles (adjacent entries bonded, last closes to first).
  std::span<const std::vector<int>> rings() const { return {rings_.data(), sssr_size_}; }
  std::span<const std::vector<int>> ring_bonds() const { return {ring_bonds_.data(), sssr_size_}; }
  // Aromatic flag per SSSR ring: every ring bond aromatic.
  std::span<const std::uint8_t> ring_aromatic() const { return {ring_aromatic_.data(), sssr_size_}; }

  // SSSR followed by the extra smallest cycles that could replace an SSSR
  // member of the same size (symmetric ring set). Atom::rings indexes this
  // list; ring-count descriptors read it.
  const std::vector<std::vector<int>> &symmetrized_rings() const { return rings_; }
  const std::vector<std::vector<int>> &symmetrized_ring_bonds() const { return ring_bonds_; }
  const std::vector<std::uint8_t> &symmetrized_ring_aromatic() const { return ring_aromatic_; }

  // Smallest SSSR ring containing the atom, 0 when acyclic.
  int smallest_ring_size(int atom) const;
  bool in_ring_of_size(int atom, int size) const;

private:
  friend MolecularGraph perceive_rings(MolecularGraph graph);
  friend MolecularGraph perceive_aromaticity(MolecularGraph graph);
  friend MolecularGraph with_explicit_hydrogens(const MolecularGraph &graph);

  void rebuild_topology();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> fragment_ids_;
  int fragment_count_ = 0;

  bool rings_perceived_ = false;
  bool aromaticity_perceived_ = false;
  std::vector<std::vector<int>> rings_;
  std::vector<std::vector<int>> ring_bonds_;
  std::vector<std::uint8_t> ring_aromatic_;
  std::size_t sssr_size_ = 0;
};

// Smallest set of smallest rings. Fills rings(), symmetrized_rings(),
// Atom::rings and Bond::in_ring. Ties between equally small cycles resolve
// to the lexicographically smallest sorted atom-index set.
MolecularGraph perceive_rings(MolecularGraph graph);

// Hueckel perception over the Kekule structure; requires perceive_rings.
// Also assigns hybridisation.
MolecularGraph perceive_aromaticity(MolecularGraph graph);

// Copy in which every hydrogen is a graph atom bonded to its parent. Heavy
// atom indices are preserved; hydrogens follow in parent order. Ring and
// aromaticity perception results carry over.
MolecularGraph with_explicit_hydrogens(const MolecularGraph &graph);

}  // namespace nomenkit

#endif  // NOMENKIT_CHEM_GRAPH_H_
