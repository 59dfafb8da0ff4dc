//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <fstream>
#include <string>

#include "nomenkit/chem/smiles.h"
#include "test_util.h"

namespace nomenkit {
namespace {

using testing::read_fixture_rows;

TEST(Perception, AromaticAtomsMatchReference) {
  const auto rows = read_fixture_rows("descriptor_oracle.tsv");
  ASSERT_EQ(rows.size(), 1000u);
  int mismatches = 0;
  for (const auto &row : rows) {
    const MolecularGraph g = read_smiles(row[0]);
    std::string flags;
    for (const Atom &a : g.atoms()) flags += a.aromatic ? '1' : '0';
    if (flags != row[13]) {
      ++mismatches;
      ADD_FAILURE() << row[0] << "\n  got      " << flags << "\n  expected " << row[13];
    }
  }
  EXPECT_EQ(mismatches, 0);
}

// Ring count equals the cyclomatic number for every molecule of the corpus;
// each ring is a simple cycle of bonded atoms.
TEST(Perception, RingCountIsCyclomaticNumber) {
  std::ifstream in(testing::fixture_path("ring_corpus.smi"));
  std::string smiles;
  int checked = 0;
  while (std::getline(in, smiles)) {
    if (smiles.empty()) continue;
    const MolecularGraph g = read_smiles(smiles);
    const int expected = g.bond_count() - g.atom_count() + g.fragment_count();
    ASSERT_EQ(static_cast<int>(g.rings().size()), expected) << smiles;
    for (const auto &ring : g.rings()) {
      for (std::size_t i = 0; i < ring.size(); ++i) {
        ASSERT_GE(g.bond_between(ring[i], ring[(i + 1) % ring.size()]), 0) << smiles;
      }
    }
    ++checked;
  }
  EXPECT_EQ(checked, 10000);
}

// Hydrogen-completed graphs: the valence sum over all atoms counts every
// bond twice. Parsing twice gives the same graph.
TEST(Perception, HandshakeAndDeterminism) {
  std::ifstream in(testing::fixture_path("ring_corpus.smi"));
  std::string smiles;
  int line = 0;
  while (std::getline(in, smiles) && line++ < 2000) {
    const MolecularGraph g = read_smiles(smiles);
    const MolecularGraph full = with_explicit_hydrogens(g);
    long total = 0;
    for (int a = 0; a < full.atom_count(); ++a) total += full.bond_order_sum(a) + full.atom(a).total_h();
    ASSERT_EQ(total % 2, 0) << smiles;
    const MolecularGraph again = read_smiles(smiles);
    ASSERT_EQ(again.atom_count(), g.atom_count());
    ASSERT_EQ(again.bond_count(), g.bond_count());
    for (int a = 0; a < g.atom_count(); ++a) {
      ASSERT_EQ(again.atom(a).implicit_h, g.atom(a).implicit_h);
      ASSERT_EQ(again.atom(a).aromatic, g.atom(a).aromatic);
      ASSERT_EQ(again.atom(a).rings, g.atom(a).rings);
    }
    for (int b = 0; b < g.bond_count(); ++b) {
      ASSERT_EQ(again.bond(b).begin, g.bond(b).begin);
      ASSERT_EQ(again.bond(b).end, g.bond(b).end);
      ASSERT_EQ(again.bond(b).order, g.bond(b).order);
    }
  }
}

TEST(Perception, SymmetrizedRingsExtendTheSssr) {
  // Cubane: 5 SSSR faces plus the sixth equivalent face.
  const MolecularGraph cubane = read_smiles("C12C3C4C1C5C2C3C45");
  EXPECT_EQ(cubane.rings().size(), 5u);
  EXPECT_EQ(cubane.symmetrized_rings().size(), 6u);
  // Adamantane: 3 SSSR rings, 4 equivalent chair rings.
  const MolecularGraph adamantane = read_smiles("C1C2CC3CC1CC(C2)C3");
  EXPECT_EQ(adamantane.rings().size(), 3u);
  EXPECT_EQ(adamantane.symmetrized_rings().size(), 4u);
  const MolecularGraph naphthalene = read_smiles("c1ccc2ccccc2c1");
  EXPECT_EQ(naphthalene.symmetrized_rings().size(), 2u);
}

TEST(Perception, BicyclooctaneHasTwoSmallestRings) {
  const MolecularGraph g = read_smiles("C1CC2CCC1CC2");
  ASSERT_EQ(g.rings().size(), 2u);
  EXPECT_EQ(g.rings()[0].size(), 6u);
  EXPECT_EQ(g.rings()[1].size(), 6u);
}

TEST(Perception, CubaneHasFiveFourRings) {
  const MolecularGraph g = read_smiles("C12C3C4C1C5C2C3C45");
  ASSERT_EQ(g.rings().size(), 5u);
  for (const auto &ring : g.rings()) EXPECT_EQ(ring.size(), 4u);
}

TEST(Perception, RingMembershipFlags) {
  const MolecularGraph g = read_smiles("CC1CC1");
  EXPECT_FALSE(g.bond(0).in_ring);
  EXPECT_TRUE(g.bond(1).in_ring);
  EXPECT_EQ(g.smallest_ring_size(0), 0);
  EXPECT_EQ(g.smallest_ring_size(1), 3);
}

TEST(Perception, Hybridization) {
  const MolecularGraph g = read_smiles("CC=CC#Cc1ccccc1");
  EXPECT_EQ(g.atom(0).hybridization, Hybridization::kSp3);
  EXPECT_EQ(g.atom(1).hybridization, Hybridization::kSp2);
  EXPECT_EQ(g.atom(3).hybridization, Hybridization::kSp);
  EXPECT_EQ(g.atom(5).hybridization, Hybridization::kSp2);
}

}  // namespace
}  // namespace nomenkit
