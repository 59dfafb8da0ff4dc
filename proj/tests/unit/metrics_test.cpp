//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "../common/edit_oracle.h"
#include "nomenkit/error.h"
#include "nomenkit/metrics.h"
#include "test_util.h"

namespace nomenkit {
namespace {

using testing::TempDir;
using testing::fixture_path;
using testing::read_file;
using testing::read_tsv;
using testing::write_file;

const std::string kReference = "N-[(5-methyl-1,3-thiazol-2-yl)methyl]piperidine-4-sulfonamide";

TEST(ExactMatch, TrimAndCase) {
  EXPECT_TRUE(exact_match("1-[2-(azetidin-3-yl)ethyl]piperidin-4-ol", "1-[2-(azetidin-3-yl)ethyl]piperidin-4-ol"));
  EXPECT_TRUE(exact_match("a ", "a"));
  EXPECT_TRUE(exact_match("\t a\n", "a"));
  EXPECT_FALSE(exact_match("A", "a"));
  EXPECT_FALSE(exact_match("a b", "ab"));
}

TEST(EditSimilarity, Examples) {
  EXPECT_DOUBLE_EQ(normalized_edit_similarity(kReference, kReference), 1.0);
  EXPECT_DOUBLE_EQ(normalized_edit_similarity("", ""), 1.0);
  EXPECT_DOUBLE_EQ(normalized_edit_similarity("", "abc"), 0.0);
  EXPECT_DOUBLE_EQ(normalized_edit_similarity("abc", ""), 0.0);
  EXPECT_EQ(round_half_up(normalized_edit_similarity(
                              "N-[(4-methyl-1,3-thiazol-2-yl)methyl]piperidine-4-sulfonamide", kReference),
                          2),
            "0.98");
  EXPECT_EQ(round_half_up(normalized_edit_similarity(
                              "N-[(4-methyl-1,3-thiazol-5-yl)methyl]piperidine-1-sulfonamide", kReference),
                          2),
            "0.95");
  EXPECT_DOUBLE_EQ(normalized_edit_similarity("kitten", "sitting"), 1.0 - 3.0 / 7.0);
}

TEST(EditSimilarity, CountsScalarValuesNotBytes) {
  // One substitution of a two-byte character.
  EXPECT_DOUBLE_EQ(normalized_edit_similarity("\xce\xb1-x", "\xce\xb2-x"), 1.0 - 1.0 / 3.0);
  EXPECT_EQ(decode_utf8("\xce\xb1"), std::u32string(1, U'α'));
  EXPECT_EQ(decode_utf8("\xff" "a"), (std::u32string{0xFFFD, U'a'}));
  EXPECT_EQ(decode_utf8("\xf0\x9f\x98\x80"), std::u32string(1, char32_t{0x1F600}));
}

std::u32string random_string(std::mt19937_64 &rng, std::size_t len, char32_t alphabet) {
  std::u32string s(len, 0);
  std::uniform_int_distribution<std::uint32_t> pick(0, alphabet - 1);
  for (auto &c : s) {
    const std::uint32_t v = pick(rng);
    // Mix ASCII and non-ASCII scalars.
    c = v % 3 == 0 ? char32_t{0x3B1 + v} : char32_t{'a' + v % 26};
  }
  return s;
}

TEST(Levenshtein, AgreesWithQuadraticOracle) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t max_len = trial < 2000 ? 40 : 300;
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    const char32_t alphabet = trial % 2 ? 4 : 30;
    const auto a = random_string(rng, len(rng), alphabet);
    auto b = random_string(rng, len(rng), alphabet);
    if (trial % 5 == 0 && !a.empty()) {
      // Near-duplicates exercise the long diagonal.
      b = a;
      b[trial % b.size()] = U'#';
    }
    ASSERT_EQ(levenshtein(a, b), testing::dp_levenshtein(a, b)) << "trial " << trial;
    ASSERT_EQ(levenshtein(b, a), levenshtein(a, b));
  }
}

TEST(Levenshtein, BlockBoundaries) {
  for (std::size_t n : {63, 64, 65, 127, 128, 129, 200}) {
    const std::u32string a(n, U'a');
    std::u32string b = a;
    b.back() = U'b';
    EXPECT_EQ(levenshtein(a, b), 1u) << n;
    EXPECT_EQ(levenshtein(a, a.substr(1)), 1u) << n;
    EXPECT_EQ(levenshtein(a, U""), n);
    EXPECT_EQ(levenshtein(a, std::u32string(n, U'z')), n);
  }
}

TEST(EditSimilarity, OneIffTrimmedEqual) {
  EXPECT_DOUBLE_EQ(normalized_edit_similarity(" ab ", "ab"), 1.0);
  EXPECT_LT(normalized_edit_similarity("ab", "abc"), 1.0);
  EXPECT_DOUBLE_EQ(normalized_edit_similarity("abc", "xbc"), normalized_edit_similarity("xbc", "abc"));
}

TEST(Chunk, Examples) {
  EXPECT_EQ(chunk_iupac("ethane"), (std::vector<std::string>{"ethane"}));
  EXPECT_EQ(chunk_iupac("piperidin-4-ol"), (std::vector<std::string>{"piperidin", "-", "4", "-", "ol"}));
  EXPECT_TRUE(chunk_iupac("").empty());
  EXPECT_EQ(chunk_iupac("N',3-dimethyl"),
            (std::vector<std::string>{"N", "'", ",", "3", "-", "dimethyl"}));
  EXPECT_EQ(chunk_iupac("[3,2-c]pyridin"),
            (std::vector<std::string>{"[", "3", ",", "2", "-", "c", "]", "pyridin"}));
  EXPECT_EQ(chunk_iupac("propanoic acid"), (std::vector<std::string>{"propanoic", "acid"}));
  EXPECT_EQ(chunk_iupac("2H1"), (std::vector<std::string>{"2", "H", "1"}));
}

double chunked_bleu(const std::string &p, const std::string &r, BleuOptions o = {}) {
  const auto a = chunk_iupac(p);
  const auto b = chunk_iupac(r);
  return bleu(a, b, o);
}

TEST(Bleu, Examples) {
  EXPECT_DOUBLE_EQ(chunked_bleu(kReference, kReference), 1.0);
  EXPECT_DOUBLE_EQ(chunked_bleu("ethane", "ethane"), 1.0);
  EXPECT_LT(chunked_bleu("methanol", "ethane"), 0.01);
  EXPECT_DOUBLE_EQ(chunked_bleu("", kReference), 0.0);
  const double one_sub =
      chunked_bleu("N-[(4-methyl-1,3-thiazol-2-yl)methyl]piperidine-4-sulfonamide", kReference);
  EXPECT_NEAR(one_sub, 0.84, 0.10);
}

TEST(Bleu, SmoothingKnob) {
  // No shared 4-gram, shared unigrams.
  const std::vector<std::string> c{"a", "b", "a", "c"};
  const std::vector<std::string> r{"a", "c", "a", "b"};
  EXPECT_GT(bleu(c, r), 0.0);
  EXPECT_DOUBLE_EQ(bleu(c, r, BleuOptions{false}), 0.0);
  // With every order matched, smoothing changes nothing.
  const std::vector<std::string> x{"p", "q", "r", "s", "t"};
  EXPECT_DOUBLE_EQ(bleu(x, x, BleuOptions{false}), 1.0);
}

TEST(Bleu, IdentityAndRelabeling) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<int> len(1, 30), tok(0, 5);
    std::vector<std::string> a(len(rng)), b(len(rng));
    for (auto &t : a) t = "t" + std::to_string(tok(rng));
    for (auto &t : b) t = "t" + std::to_string(tok(rng));
    ASSERT_DOUBLE_EQ(bleu(a, a), 1.0);
    auto relabel = [](std::vector<std::string> v) {
      for (auto &t : v) t = "relabelled-" + t + "-x";
      return v;
    };
    const auto ra = relabel(a), rb = relabel(b);
    ASSERT_DOUBLE_EQ(bleu(ra, rb), bleu(a, b));
    const double s = bleu(a, b);
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 1.0);
  }
}

TEST(Metrics, ExactImpliesPerfectScores) {
  for (const auto &row : read_tsv(fixture_path("metrics/example_predictions.tsv"))) {
    for (const auto &name : {row[1], row[2]}) {
      const std::string padded = "  " + name + " ";
      ASSERT_TRUE(exact_match(padded, name));
      EXPECT_DOUBLE_EQ(normalized_edit_similarity(padded, name), 1.0);
      EXPECT_DOUBLE_EQ(chunked_bleu(padded, name), 1.0);
    }
  }
}

TEST(Rounding, HalfUpOnDecimalForm) {
  EXPECT_EQ(round_half_up(0.845, 2), "0.85");
  EXPECT_EQ(round_half_up(0.844999, 2), "0.84");
  EXPECT_EQ(round_half_up(0.995, 2), "1.00");
  EXPECT_EQ(round_half_up(1.0, 2), "1.00");
  EXPECT_EQ(round_half_up(0.0, 2), "0.00");
  EXPECT_EQ(round_half_up(99.995, 2), "100.00");
  EXPECT_EQ(round_half_up(1e-9, 2), "0.00");
  EXPECT_EQ(round_half_up(-0.125, 2), "-0.13");
}

TEST(Predictions, LoaderErrors) {
  TempDir dir;
  auto load_kind = [&](const std::string &text) -> std::string {
    write_file(dir / "p.tsv", text);
    try {
      load_predictions(dir / "p.tsv");
    } catch (const Error &e) {
      return e.kind();
    }
    return "ok";
  };
  EXPECT_EQ(load_kind("1\tx\ty\n2\t\tz\n"), "ok");
  EXPECT_EQ(load_kind("1\tx\n"), "MalformedRow");
  EXPECT_EQ(load_kind("1\tx\ty\tz\n"), "MalformedRow");
  EXPECT_EQ(load_kind("1\tx\t\n"), "MalformedRow");
  EXPECT_EQ(load_kind("\tx\ty\n"), "MalformedRow");
  EXPECT_EQ(load_kind("1\tx\ty\n\n2\tx\ty\n"), "MalformedRow");
  EXPECT_EQ(load_kind("1\tx\ty\n1\tx\ty\n"), "DuplicateId");
  EXPECT_EQ(load_kind(""), "EmptyInput");
  EXPECT_EQ(load_kind("1\tx\ty\r\n"), "ok");
  try {
    load_predictions(dir / "missing.tsv");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), "MissingFile");
  }
}

TEST(Evaluate, PerfectAndEmptyPredictions) {
  std::vector<PredictionRecord> perfect, empty;
  for (int i = 0; i < 20; ++i) {
    const std::string name = "compound-" + std::to_string(i) + "-ol";
    perfect.push_back({std::to_string(i), name, name});
    empty.push_back({std::to_string(i), "", name});
  }
  const EvalReport a = evaluate(perfect);
  EXPECT_DOUBLE_EQ(a.pct_exact, 100.0);
  EXPECT_DOUBLE_EQ(a.mean_edit_similarity, 1.0);
  EXPECT_DOUBLE_EQ(a.mean_bleu, 1.0);
  const EvalReport b = evaluate(empty);
  EXPECT_DOUBLE_EQ(b.pct_exact, 0.0);
  EXPECT_DOUBLE_EQ(b.mean_edit_similarity, 0.0);
  EXPECT_DOUBLE_EQ(b.mean_bleu, 0.0);
}

TEST(Evaluate, PublishedExampleEditSimilarities) {
  const auto records = load_predictions(fixture_path("metrics/example_predictions.tsv"));
  const auto printed = read_tsv(fixture_path("metrics/example_scores.tsv"));
  const EvalReport report = evaluate(records);
  ASSERT_EQ(report.rows.size(), 13u);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    EXPECT_EQ(report.rows[i].id, printed[i + 1][0]);
    EXPECT_EQ(round_half_up(report.rows[i].edit_similarity, 2), printed[i + 1][1]) << report.rows[i].id;
  }
  EXPECT_EQ(report.exact_count, 1u);
  EXPECT_NEAR(report.rows[11].bleu, 0.84, 0.10);
}

TEST(Evaluate, PublishedExampleUnsmoothedZeros) {
  // Without smoothing, BLEU is zero exactly where the printed score is zero.
  const auto records = load_predictions(fixture_path("metrics/example_predictions.tsv"));
  const auto printed = read_tsv(fixture_path("metrics/example_scores.tsv"));
  EvalOptions opts;
  opts.bleu.smoothing = false;
  const EvalReport report = evaluate(records, opts);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    EXPECT_EQ(report.rows[i].bleu == 0.0, printed[i + 1][2] == "0.00") << report.rows[i].id;
  }
}

TEST(Evaluate, PermutationAndWorkerInvariance) {
  auto records = load_predictions(fixture_path("metrics/example_predictions.tsv"));
  const EvalReport base = evaluate(records);
  std::mt19937_64 rng(3);
  for (int w : {1, 2, 8}) {
    std::shuffle(records.begin(), records.end(), rng);
    EvalOptions opts;
    opts.workers = w;
    const EvalReport other = evaluate(records, opts);
    EXPECT_EQ(other.mean_edit_similarity, base.mean_edit_similarity);
    EXPECT_EQ(other.mean_bleu, base.mean_bleu);
    EXPECT_EQ(other.pct_exact, base.pct_exact);
  }
}

TEST(Evaluate, FileOutputs) {
  TempDir dir;
  const auto out = dir / "report.json";
  const EvalReport report = evaluate_file(fixture_path("metrics/example_predictions.tsv"), out);
  const EvalOutputs o = eval_outputs(out);
  const auto table = read_tsv(o.table);
  ASSERT_EQ(table.size(), 14u);
  EXPECT_EQ(table[0][0], "id");
  EXPECT_EQ(table[13][0], "ex-13");
  EXPECT_EQ(table[13][1], "1");
  EXPECT_EQ(table[12][4], "0.98");
  const EvalReport back = read_summary(o.summary);
  EXPECT_EQ(back.n, 13u);
  EXPECT_EQ(back.mean_bleu, report.mean_bleu);
  EXPECT_EQ(back.label, "example_predictions.tsv");
  EXPECT_NE(read_file(o.summary).find("\"Mean Normalized Edit Distance\""), std::string::npos);
}

}  // namespace
}  // namespace nomenkit
