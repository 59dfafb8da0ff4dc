//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_DATASET_H_
#define NOMENKIT_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nomenkit/curation.h"

namespace nomenkit {

enum class Direction { kSmilesToIupac, kIupacToSmiles };

// "smiles_to_iupac" / "iupac_to_smiles".
std::string_view direction_name(Direction direction);
// Accepts the names above plus "forward" and "reverse". Throws InvalidArgument.
Direction parse_direction(std::string_view text);

inline constexpr std::string_view kForwardPrefix = "Translate the following SMILES string into an IUPAC name: ";
inline constexpr std::string_view kReversePrefix = "Translate the following IUPAC name into a SMILES string: ";

struct InstructionExample {
  std::string instruction;
  std::string input;
  std::string output;
  Direction direction = Direction::kSmilesToIupac;

  bool operator==(const InstructionExample &) const = default;
};

InstructionExample format_example(const MoleculeRecord &record, Direction direction);
// The same pair rendered in the other direction. reversed(reversed(x)) == x.
InstructionExample reversed(const InstructionExample &example);

// Prompt used for generation, or the training string when `output` is given.
std::string render_prompt(std::string_view instruction, std::optional<std::string_view> output = std::nullopt);

// Index-level sampling. All of it runs on one thread.
//
// Split membership: the first floor(ratio * n) indices of shuffled_prefix
// form the fine-tuning pool. Returns one flag per index, 1 = fine-tuning.
std::vector<std::uint8_t> split_membership(std::uint64_t n, double ratio, std::uint64_t seed);
// Cohort positions within a pool of `pool_size`; prefixes are nested in n.
std::vector<std::uint64_t> cohort_positions(std::uint64_t pool_size, std::uint64_t n, std::uint64_t seed);

struct SplitPools {
  // Both pools keep the parent order.
  std::vector<MoleculeRecord> finetune;
  std::vector<MoleculeRecord> test;
};

SplitPools split_parent(const std::vector<MoleculeRecord> &parent, double ratio, std::uint64_t seed);
// Records in sampled order. Throws CohortTooLarge when n > pool size.
std::vector<MoleculeRecord> sample_cohort(const std::vector<MoleculeRecord> &pool, std::uint64_t n,
                                          std::uint64_t seed);
// Default cohort-size sweep: decades from 10^2 to 10^7. Cohorts sampled
// with one seed are nested across the grid.
std::vector<std::uint64_t> default_cohort_grid();
// Flips the direction of exactly round(fraction * N) examples chosen by a
// seeded sample without replacement; order is preserved.
std::vector<InstructionExample> invert_cohort(std::vector<InstructionExample> examples, double fraction,
                                              std::uint64_t seed);

// Reproducibility record written next to every dataset file.
struct DatasetManifest {
  std::string parent_sha256;
  double split_ratio = 0.8;
  std::uint64_t split_seed = 0;
  // "finetune" or "test".
  std::string pool = "finetune";
  std::uint64_t cohort_seed = 0;
  std::uint64_t cohort_size = 0;
  Direction direction = Direction::kSmilesToIupac;
  double inversion_fraction = 0.0;
  std::uint64_t inversion_seed = 0;
  std::string tool_version;
  // Checksum of the dataset file, filled in by emit_dataset.
  std::string dataset_sha256;

  std::string to_json() const;
  static DatasetManifest from_json(std::string_view text);
  bool operator==(const DatasetManifest &) const = default;
};

// JSON array of {"instruction", "input", "output"} objects, two-space indent,
// UTF-8 kept as is. Objects are rendered on `workers` threads, joined in order.
std::string dataset_json(const std::vector<InstructionExample> &examples, int workers = 1);
// Direction is recovered from the instruction prefix. Throws MalformedDataset.
std::vector<InstructionExample> parse_dataset_json(std::string_view text);

std::filesystem::path manifest_path(const std::filesystem::path &dataset);
// Writes the dataset and <dataset>.manifest.json.
void emit_dataset(const std::vector<InstructionExample> &examples, const std::filesystem::path &path,
                  DatasetManifest manifest, int workers = 1);
std::vector<InstructionExample> read_dataset(const std::filesystem::path &path);

// One generation prompt per line, for the inference harness.
std::string prompt_list(const std::vector<InstructionExample> &examples);
// `id<TAB>reference` lines aligned with prompt_list over the same cohort.
std::string reference_list(const std::vector<MoleculeRecord> &cohort, const std::vector<InstructionExample> &examples);

struct BuildOptions {
  double split_ratio = 0.8;
  std::uint64_t split_seed = 42;
  std::string pool = "finetune";
  std::uint64_t n = 0;
  std::uint64_t cohort_seed = 42;
  Direction direction = Direction::kSmilesToIupac;
  double inversion_fraction = 0.0;
  std::uint64_t inversion_seed = 42;
  int workers = 1;
  // Optional prompt list and reference file for the same examples.
  std::filesystem::path prompts;
  std::filesystem::path references;
};

// Split, sample, format and invert straight from a parent record file,
// streaming it twice instead of loading it.
DatasetManifest build_dataset(const std::filesystem::path &parent, const std::filesystem::path &out,
                              const BuildOptions &options);

// Writes both pools of a parent record file in parent order.
struct SplitCounts {
  std::uint64_t finetune = 0;
  std::uint64_t test = 0;
};
SplitCounts split_parent_file(const std::filesystem::path &parent, double ratio, std::uint64_t seed,
                              const std::filesystem::path &finetune_out, const std::filesystem::path &test_out);

}  // namespace nomenkit

#endif  // NOMENKIT_DATASET_H_
