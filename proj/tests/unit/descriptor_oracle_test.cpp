//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "nomenkit/chem/smiles.h"
#include "nomenkit/descriptors.h"
#include "test_util.h"

namespace nomenkit {
namespace {

using testing::read_fixture_rows;

// Per-row agreement with reference values. Integer descriptors and cLogP
// are reported individually; aggregate thresholds live in the acceptance
// binary.
TEST(DescriptorOracle, RowAgreement) {
  const auto rows = read_fixture_rows("descriptor_oracle.tsv");
  ASSERT_EQ(rows.size(), 1000u);
  int int_mismatch = 0, clogp_miss = 0, tpsa_miss = 0, mw_miss = 0, pattern_miss = 0;
  for (const auto &row : rows) {
    const MolecularGraph g = read_smiles(row[0]);
    const DescriptorSet d = compute_descriptors(g);
    const int expected_int[] = {std::stoi(row[1]), std::stoi(row[3]), std::stoi(row[4]), std::stoi(row[5]),
                                std::stoi(row[6]), std::stoi(row[7]), std::stoi(row[8]), std::stoi(row[9]),
                                std::stoi(row[10])};
    const int got_int[] = {d.heavy_atoms, d.carbons, d.sp3_carbons, d.n_rings, d.n_aromatic_rings,
                           d.n_phenyl_rings, d.n_rotatable, d.hbd, d.net_formal_charge};
    const char *names[] = {"heavy", "carbons", "sp3", "rings", "arom", "phenyl", "rot", "hbd", "charge"};
    for (int i = 0; i < 9; ++i) {
      if (expected_int[i] != got_int[i]) {
        ++int_mismatch;
        ADD_FAILURE() << row[0] << " " << names[i] << " got " << got_int[i] << " expected " << expected_int[i];
      }
    }
    if (std::abs(d.mw - std::stod(row[2])) > 0.01) {
      ++mw_miss;
      ADD_FAILURE() << row[0] << " mw " << d.mw << " vs " << row[2];
    }
    if (std::abs(d.tpsa - std::stod(row[11])) > 0.5) {
      ++tpsa_miss;
      ADD_FAILURE() << row[0] << " tpsa " << d.tpsa << " vs " << row[11];
    }
    if (std::abs(d.clogp - std::stod(row[12])) > 0.05) {
      ++clogp_miss;
      ADD_FAILURE() << row[0] << " clogp " << d.clogp << " vs " << row[12];
    }
    std::string bits;
    for (const auto &p : default_forbidden_patterns()) bits += match_pattern(g, p) ? '1' : '0';
    if (bits != row[14]) {
      ++pattern_miss;
      ADD_FAILURE() << row[0] << " patterns " << bits << " vs " << row[14];
    }
  }
  EXPECT_EQ(int_mismatch + mw_miss + tpsa_miss + clogp_miss + pattern_miss, 0);
}

}  // namespace
}  // namespace nomenkit
