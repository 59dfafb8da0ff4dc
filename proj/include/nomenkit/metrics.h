//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_METRICS_H_
#define NOMENKIT_METRICS_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nomenkit {

// Strips leading and trailing ASCII whitespace.
std::string_view trim(std::string_view text);

// Byte equality after trim; case-sensitive.
bool exact_match(std::string_view prediction, std::string_view reference);

// Unicode scalar values of a UTF-8 string. Each byte of an invalid sequence
// decodes to U+FFFD.
std::u32string decode_utf8(std::string_view text);

// Unit-cost Levenshtein distance (bit-parallel, blocks of 64 rows).
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

// 1 - levenshtein / max length, over the trimmed strings in scalar values.
// Two empty strings score 1.
double normalized_edit_similarity(std::string_view prediction, std::string_view reference);

// Splits a name at hyphen, comma, period, parentheses, square brackets and
// apostrophe (each kept as a token) and between digit and non-digit runs.
// Whitespace separates tokens and is dropped.
std::vector<std::string> chunk_iupac(std::string_view name);

struct BleuOptions {
  // Replaces a zero 2-, 3- or 4-gram precision with 1 / (2 * candidate length).
  // A zero unigram precision always gives 0.
  bool smoothing = true;
};

// Sentence BLEU over orders 1..4 with uniform weights and the standard
// brevity penalty. Orders longer than the candidate are left out of the
// geometric mean. An empty candidate scores 0.
double bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
            const BleuOptions &options = {});

struct PredictionRecord {
  std::string id;
  std::string prediction;
  std::string reference;

  bool operator==(const PredictionRecord &) const = default;
};

// `id<TAB>prediction<TAB>reference` per line. Throws MalformedRow (wrong field
// count, empty id or reference, blank line), DuplicateId, MissingFile,
// EmptyInput.
std::vector<PredictionRecord> load_predictions(const std::filesystem::path &path);

struct ExampleScore {
  std::string id;
  bool exact = false;
  double edit_similarity = 0.0;
  double bleu = 0.0;
};

struct EvalReport {
  std::string label;
  std::size_t n = 0;
  std::size_t exact_count = 0;
  double pct_exact = 0.0;
  double mean_edit_similarity = 0.0;
  double mean_bleu = 0.0;
  bool bleu_smoothing = true;
  std::vector<ExampleScore> rows;

  // JSON object with raw aggregates and their 2-decimal display values.
  std::string summary_json() const;
  // Header plus one `id, exact, edit_similarity, bleu` row per example.
  std::string table_tsv() const;
};

struct EvalOptions {
  BleuOptions bleu;
  int workers = 1;
  std::string label;
};

ExampleScore score_example(const PredictionRecord &record, const BleuOptions &options = {});
// Aggregates do not depend on row order or worker count.
EvalReport evaluate(const std::vector<PredictionRecord> &records, const EvalOptions &options = {});

struct EvalOutputs {
  std::filesystem::path summary;
  std::filesystem::path table;
};
// <out> holds the summary, <out>.examples.tsv the per-example table.
EvalOutputs eval_outputs(const std::filesystem::path &out);
EvalReport evaluate_file(const std::filesystem::path &predictions, const std::filesystem::path &out,
                         const EvalOptions &options = {});

// Aggregates of a summary written by evaluate_file (rows are not restored).
EvalReport read_summary(const std::filesystem::path &summary);

// Decimal half-up rounding of the shortest representation of `value`.
std::string round_half_up(double value, int places);

}  // namespace nomenkit

#endif  // NOMENKIT_METRICS_H_
