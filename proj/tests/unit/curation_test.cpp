//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>
#include <zlib.h>

#include "nomenkit/curation.h"
#include "nomenkit/error.h"
#include "nomenkit/io.h"
#include "test_util.h"

namespace nomenkit {
namespace {

using testing::TempDir;
using testing::fixture_path;
using testing::read_file;
using testing::write_file;

std::vector<MoleculeRecord> join(const std::string &smiles, const std::string &names, CurationStats &stats) {
  TempDir dir;
  write_file(dir / "s.tsv", smiles);
  write_file(dir / "n.tsv", names);
  std::vector<MoleculeRecord> out;
  ingest_join(dir / "s.tsv", dir / "n.tsv", [&](const MoleculeRecord &r) { out.push_back(r); }, stats);
  return out;
}

TEST(Ingest, InnerJoinOnId) {
  CurationStats stats;
  const auto out = join("1\tC\n2\tCC\n", "2\tethane\n3\tx\n", stats);
  EXPECT_EQ(out, (std::vector<MoleculeRecord>{{2, "CC", "ethane"}}));
  EXPECT_EQ(stats.rows_joined, 1u);
  EXPECT_EQ(stats.rows_read(), 4u);
}

TEST(Ingest, EmptyNameFile) {
  CurationStats stats;
  EXPECT_TRUE(join("1\tC\n2\tCC\n", "", stats).empty());
  EXPECT_EQ(stats.rows_joined, 0u);
}

TEST(Ingest, MalformedLinesAreCountedAndSkipped) {
  CurationStats stats;
  const auto out = join("7\t\n8\tCCO\nx\tC\n9\n10\tC\tC\n", "8\tethanol\n", stats);
  EXPECT_EQ(out, (std::vector<MoleculeRecord>{{8, "CCO", "ethanol"}}));
  EXPECT_EQ(stats.malformed_lines, 4u);
}

TEST(Ingest, UnsortedInputComesOutAscending) {
  CurationStats stats;
  CurationOptions options;
  // Tiny budget: every line becomes its own sort run.
  options.memory_budget_bytes = 1;
  const auto out = join("5\tE\n3\tC\n9\tI\n1\tA\n3\tdup\n", "9\ti\n1\ta\n5\te\n3\tc\n", stats);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].id, 1);
  EXPECT_EQ(out[1], (MoleculeRecord{3, "C", "c"}));
  EXPECT_EQ(out[3].id, 9);
  EXPECT_EQ(stats.duplicate_id_lines, 1u);
}

TEST(Ingest, ReadsGzipInput) {
  TempDir dir;
  const std::string gz = (dir / "s.tsv.gz").string();
  gzFile f = gzopen(gz.c_str(), "wb");
  const std::string text = "4\tCCO\n2\tCC\n";
  gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  gzclose(f);
  write_file(dir / "n.tsv", "2\tethane\n4\tethanol\n");
  CurationStats stats;
  std::vector<MoleculeRecord> out;
  ingest_join(gz, dir / "n.tsv", [&](const MoleculeRecord &r) { out.push_back(r); }, stats);
  EXPECT_EQ(out, (std::vector<MoleculeRecord>{{2, "CC", "ethane"}, {4, "CCO", "ethanol"}}));
}

TEST(Ingest, MissingFileThrows) {
  CurationStats stats;
  try {
    ingest_join("/nonexistent/a.tsv", "/nonexistent/b.tsv", [](const MoleculeRecord &) {}, stats);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), "MissingFile");
  }
}

TEST(Dedup, SmilesCollisionKeepsLowestId) {
  CurationStats stats;
  const auto out = deduplicate({{2, "C", "carbane"}, {1, "C", "methane"}}, stats);
  EXPECT_EQ(out, (std::vector<MoleculeRecord>{{1, "C", "methane"}}));
  EXPECT_EQ(stats.dropped_duplicate_smiles, 1u);
}

TEST(Dedup, NameCollisionKeepsLowestId) {
  CurationStats stats;
  const auto out = deduplicate({{1, "C", "methane"}, {2, "[CH4]", "methane"}}, stats);
  EXPECT_EQ(out, (std::vector<MoleculeRecord>{{1, "C", "methane"}}));
  EXPECT_EQ(stats.dropped_duplicate_iupac, 1u);
}

TEST(Dedup, DisjointFieldsAllKept) {
  CurationStats stats;
  const std::vector<MoleculeRecord> in{{1, "C", "methane"}, {2, "CC", "ethane"}, {3, "CCC", "propane"}};
  EXPECT_EQ(deduplicate(in, stats), in);
}

TEST(Dedup, ManyBucketsMatchOneBucket) {
  std::vector<MoleculeRecord> in;
  for (int i = 0; i < 500; ++i) {
    in.push_back({i, "S" + std::to_string(i % 97), "N" + std::to_string((i * 7) % 131)});
  }
  CurationStats a, b;
  CurationOptions small;
  small.memory_budget_bytes = 1;
  const auto big_out = deduplicate(in, a);
  const auto small_out = deduplicate(in, b, small);
  EXPECT_EQ(big_out, small_out);
  EXPECT_EQ(a.dropped_duplicate_smiles, b.dropped_duplicate_smiles);
  EXPECT_EQ(a.dropped_duplicate_iupac, b.dropped_duplicate_iupac);
  std::set<std::string> s, n;
  for (const auto &r : big_out) {
    EXPECT_TRUE(s.insert(r.smiles).second);
    EXPECT_TRUE(n.insert(r.iupac).second);
  }
}

TEST(Curate, RecordVerdicts) {
  const FilterConfig cfg;
  const DescriptorOptions opts = cfg.descriptor_options();
  const RecordVerdict caffeine = evaluate_record("CN1C=NC2=C1C(=O)N(C(=O)N2C)C", cfg, opts);
  EXPECT_TRUE(caffeine.parsed);
  EXPECT_EQ(caffeine.filters.reasons, (std::vector<std::string>{"n_rotatable", "hbd"}));
  const RecordVerdict silane = evaluate_record("CC[Si]", cfg, opts);
  ASSERT_TRUE(silane.parsed);
  EXPECT_EQ(silane.filters.reasons.front(), "elements");
  EXPECT_FALSE(evaluate_record("C1CC", cfg, opts).parsed);
}

class CurationGolden : public ::testing::Test {
protected:
  std::filesystem::path smiles() const { return fixture_path("curation/smiles.tsv"); }
  std::filesystem::path names() const { return fixture_path("curation/iupac.tsv"); }
  TempDir dir_;
};

TEST_F(CurationGolden, ReproducesExpectedParentAndStats) {
  const auto parent = dir_ / "parent.tsv";
  const CurationStats stats = run_curation(smiles(), names(), parent);
  EXPECT_EQ(read_file(parent), read_file(fixture_path("curation/expected_parent.tsv")));
  EXPECT_EQ(stats.to_text(), read_file(fixture_path("curation/expected_stats.txt")));
  EXPECT_EQ(read_file(curation_outputs(parent).stats), stats.to_text());
  EXPECT_TRUE(stats.conserved());
}

TEST_F(CurationGolden, WorkerCountDoesNotChangeArtifacts) {
  CurationOptions one, many;
  many.workers = 4;
  many.batch_size = 7;
  const auto a = dir_ / "a.tsv";
  const auto b = dir_ / "b.tsv";
  run_curation(smiles(), names(), a, one);
  run_curation(smiles(), names(), b, many);
  EXPECT_EQ(read_file(a), read_file(b));
  EXPECT_EQ(read_file(curation_outputs(a).stats), read_file(curation_outputs(b).stats));
  // Manifests differ only by the output file names.
  auto normalized = [](std::string text, const std::string &name) {
    for (auto pos = text.find(name); pos != std::string::npos; pos = text.find(name, pos)) text.replace(pos, name.size(), "x.tsv");
    return text;
  };
  EXPECT_EQ(normalized(read_file(curation_outputs(a).manifest), "a.tsv"),
            normalized(read_file(curation_outputs(b).manifest), "b.tsv"));
}

TEST_F(CurationGolden, CuratingTheParentAgainKeepsEverything) {
  const auto parent = dir_ / "parent.tsv";
  const CurationStats first = run_curation(smiles(), names(), parent);
  const auto again = dir_ / "again.tsv";
  const CurationStats second = run_curation_records(parent, again);
  EXPECT_EQ(second.rows_joined, first.retained);
  EXPECT_EQ(second.retained, first.retained);
  EXPECT_EQ(read_file(parent), read_file(again));
}

TEST_F(CurationGolden, ManifestRecordsInputsAndConfig) {
  const auto parent = dir_ / "parent.tsv";
  run_curation(smiles(), names(), parent);
  const std::string manifest = read_file(curation_outputs(parent).manifest);
  EXPECT_NE(manifest.find(sha256_file(smiles())), std::string::npos);
  EXPECT_NE(manifest.find(sha256_file(names())), std::string::npos);
  EXPECT_NE(manifest.find(sha256_file(parent)), std::string::npos);
  EXPECT_NE(manifest.find(sha256_hex(filter_config_json(FilterConfig()))), std::string::npos);
}

TEST(Curate, UnsortedRecordFileIsRejected) {
  TempDir dir;
  write_file(dir / "r.tsv", "2\tCC\tethane\n1\tC\tmethane\n");
  EXPECT_THROW(run_curation_records(dir / "r.tsv", dir / "out.tsv"), Error);
}

}  // namespace
}  // namespace nomenkit
