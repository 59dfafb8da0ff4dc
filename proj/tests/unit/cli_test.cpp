//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cstdio>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "cli.h"
#include "nomenkit/dataset.h"
#include "nomenkit/io.h"
#include "nomenkit/metrics.h"
#include "test_util.h"

namespace nomenkit {
namespace {

using testing::TempDir;
using testing::fixture_path;
using testing::read_file;
using testing::read_tsv;
using testing::write_file;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nomenkit");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string error_kind(const Result &r) {
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_TRUE(j.contains("message"));
  return j.at("error").get<std::string>();
}

TEST(CliHelp, EverySubcommandDocumentsEveryFlag) {
  const auto subs = cli::subcommands();
  EXPECT_EQ(subs, (std::vector<std::string>{"curate", "split", "sample", "build", "invert", "eval", "report"}));
  for (const auto &sub : subs) {
    const Result r = run_cli({sub, "--help"});
    EXPECT_EQ(r.status, 0) << sub;
    const std::string &help = r.out;
    EXPECT_EQ(help, cli::help_text(sub));
    for (const auto &[flag, description] : cli::flags(sub)) {
      EXPECT_FALSE(description.empty()) << sub << " " << flag;
      EXPECT_NE(help.find(flag + " "), std::string::npos) << sub << " " << flag;
      EXPECT_NE(help.find(description), std::string::npos) << sub << " " << flag;
    }
  }
}

TEST(CliErrors, UsageAndDataErrors) {
  TempDir dir;
  Result r = run_cli({});
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(error_kind(r), "UsageError");
  r = run_cli({"build", "--n", "3"});
  EXPECT_EQ(r.status, 2);
  r = run_cli({"frobnicate"});
  EXPECT_EQ(r.status, 2);
  r = run_cli({"curate", "--smiles", fixture_path("curation/smiles.tsv")});
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(error_kind(r), "UsageError");
  r = run_cli({"curate", "--smiles", fixture_path("curation/smiles.tsv"), "--iupac", fixture_path("curation/iupac.tsv"),
               "--records", fixture_path("curation/expected_parent.tsv")});
  EXPECT_EQ(r.status, 2);

  write_file(dir / "bad.tsv", "1\tonly two fields\n");
  r = run_cli({"eval", "--predictions", (dir / "bad.tsv").string(), "--out", (dir / "r.json").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(error_kind(r), "MalformedRow");
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

  write_file(dir / "cfg.json", R"({"mw": {"enabled": true, "min": 1, "max": 2, "bogus": 1}})");
  r = run_cli({"curate", "--records", fixture_path("curation/expected_parent.tsv"), "--config",
               (dir / "cfg.json").string(), "--out", (dir / "p.tsv").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(error_kind(r), "InvalidConfig");
}

TEST(CliPipeline, CurateBuildEvalReport) {
  TempDir dir;
  const std::string parent = (dir / "parent.tsv").string();
  Result r = run_cli({"curate", "--smiles", fixture_path("curation/smiles.tsv"), "--iupac",
                      fixture_path("curation/iupac.tsv"), "--config", "a2-defaults", "--out", parent});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(read_file(parent), read_file(fixture_path("curation/expected_parent.tsv")));
  EXPECT_NE(r.out.find("retained\t32"), std::string::npos);

  const std::string dataset = (dir / "d.json").string();
  r = run_cli({"build", "--parent", parent, "--n", "5", "--seed", "42", "--direction", "forward", "--out", dataset,
               "--pool", "test", "--prompts", (dir / "p.txt").string(), "--references",
               (dir / "refs.tsv").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(read_dataset(dataset).size(), 5u);

  // Perfect predictions built from the reference file.
  std::string predictions;
  for (const auto &row : read_tsv(dir / "refs.tsv")) predictions += row[0] + "\t" + row[1] + "\t" + row[1] + "\n";
  write_file(dir / "pred.tsv", predictions);
  const std::string report = (dir / "report.json").string();
  r = run_cli({"eval", "--predictions", (dir / "pred.tsv").string(), "--out", report, "--label", "perfect"});
  ASSERT_EQ(r.status, 0) << r.err;
  const EvalReport summary = read_summary(report);
  EXPECT_DOUBLE_EQ(summary.pct_exact, 100.0);
  EXPECT_DOUBLE_EQ(summary.mean_edit_similarity, 1.0);
  EXPECT_DOUBLE_EQ(summary.mean_bleu, 1.0);
  EXPECT_TRUE(std::filesystem::exists(report + ".manifest.json"));

  r = run_cli({"eval", "--predictions", fixture_path("metrics/example_predictions.tsv"), "--out",
               (dir / "examples.json").string(), "--label", "examples", "--workers", "3"});
  ASSERT_EQ(r.status, 0) << r.err;
  write_file(dir / "sweep.json", R"([{"label": "perfect", "model": "oracle", "cohort_size": 10, "epochs": 3},
                                     {"label": "examples", "model": "examples", "cohort_size": 13, "epochs": 1}])");
  const std::string table = (dir / "table.tsv").string();
  r = run_cli({"report", "--summary", report, "--summary", (dir / "examples.json").string(), "--sweep",
               (dir / "sweep.json").string(), "--out", table});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = read_tsv(table);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"oracle", "10", "3", "perfect", "5", "100.00", "1.00", "1.00"}));
  EXPECT_EQ(rows[2][0], "examples");
  EXPECT_EQ(rows[2][5], "7.69");

  write_file(dir / "sweep2.json", R"([{"label": "other"}])");
  r = run_cli({"report", "--summary", report, "--sweep", (dir / "sweep2.json").string(), "--out", table});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(error_kind(r), "MissingSweepEntry");
}

TEST(CliPipeline, SplitSampleAndInvert) {
  TempDir dir;
  const std::string parent = fixture_path("dataset/parent.tsv");
  Result r = run_cli({"split", "--parent", parent, "--out-dir", dir.path().string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "finetune\t16\ntest\t4\n");
  EXPECT_TRUE(std::filesystem::exists(dir / "split.manifest.json"));

  const std::string cohort = (dir / "cohort.tsv").string();
  r = run_cli({"sample", "--pool", (dir / "finetune_pool.tsv").string(), "--n", "3", "--seed", "42", "--out",
               cohort});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto records = read_records(cohort);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].id, 7521);

  const std::string forward = (dir / "f.json").string();
  r = run_cli({"build", "--parent", parent, "--n", "10", "--out", forward});
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string inverted = (dir / "i.json").string();
  r = run_cli({"invert", "--dataset", forward, "--fraction", "0.5", "--seed", "7", "--out", inverted});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(read_file(inverted), read_file(fixture_path("dataset/golden_inverted_n10_f050_seed7.json")));
  const auto m = DatasetManifest::from_json(read_file(manifest_path(inverted)));
  EXPECT_DOUBLE_EQ(m.inversion_fraction, 0.5);
  EXPECT_EQ(m.inversion_seed, 7u);

  r = run_cli({"invert", "--dataset", inverted, "--fraction", "0.5", "--out", (dir / "x.json").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(error_kind(r), "NotForward");
}

TEST(CliPipeline, ManifestRegeneratesDataset) {
  TempDir dir;
  const std::string parent = fixture_path("dataset/parent.tsv");
  const std::string first = (dir / "a.json").string();
  Result r = run_cli({"build", "--parent", parent, "--n", "12", "--seed", "5", "--direction", "reverse",
                      "--invert-fraction", "0.25", "--invert-seed", "9", "--split-seed", "3", "--out", first});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto m = DatasetManifest::from_json(read_file(manifest_path(first)));
  EXPECT_EQ(m.parent_sha256, sha256_file(parent));
  const std::string second = (dir / "b.json").string();
  r = run_cli({"build", "--parent", parent, "--n", std::to_string(m.cohort_size), "--seed",
               std::to_string(m.cohort_seed), "--direction", std::string(direction_name(m.direction)),
               "--invert-fraction", "0.25", "--invert-seed", std::to_string(m.inversion_seed), "--split-seed",
               std::to_string(m.split_seed), "--pool", m.pool, "--out", second, "--workers", "8"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(read_file(first), read_file(second));
  EXPECT_EQ(sha256_file(second), m.dataset_sha256);
}

TEST(CliBinary, ExitCodesFromTheExecutable) {
  auto status_of = [](const std::string &args) {
    const std::string cmd = std::string(NOMENKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status_of("--help"), 0);
  EXPECT_EQ(status_of("--version"), 0);
  EXPECT_EQ(status_of("build"), 2);
  EXPECT_EQ(status_of("eval --predictions " + fixture_path("curation/smiles.tsv") + " --out /tmp/nomenkit_x.json"),
            1);
}

}  // namespace
}  // namespace nomenkit
