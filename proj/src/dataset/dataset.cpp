//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/dataset.h"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <thread>
#include <utility>

#include "nomenkit/error.h"
#include "nomenkit/io.h"
#include "nomenkit/rng.h"
#include "nomenkit/version.h"

namespace nomenkit {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr std::string_view kPromptHead =
    "Below is an instruction that describes a task. Write a response that appropriately completes the request. "
    "### Instruction: ";
constexpr std::string_view kPromptTail = " ### Response:";

std::string json_string(const std::string &s) {
  try {
    return Json(s).dump();
  } catch (const Json::type_error &) {
    throw Error("InvalidUtf8", "dataset text is not valid UTF-8: " + s.substr(0, 60));
  }
}

void render_object(std::string &out, const InstructionExample &e) {
  out += "  {\n    \"instruction\": ";
  out += json_string(e.instruction);
  out += ",\n    \"input\": ";
  out += json_string(e.input);
  out += ",\n    \"output\": ";
  out += json_string(e.output);
  out += "\n  }";
}

void check_ratio(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error("InvalidArgument", "split ratio must be strictly between 0 and 1");
  }
}

void check_fraction(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error("InvalidArgument", "inversion fraction must be in [0, 1]");
  }
}

}  // namespace

std::string_view direction_name(Direction direction) {
  return direction == Direction::kSmilesToIupac ? "smiles_to_iupac" : "iupac_to_smiles";
}

Direction parse_direction(std::string_view text) {
  if (text == "smiles_to_iupac" || text == "forward") return Direction::kSmilesToIupac;
  if (text == "iupac_to_smiles" || text == "reverse") return Direction::kIupacToSmiles;
  throw Error("InvalidArgument", "unknown direction '" + std::string(text) + "'");
}

InstructionExample format_example(const MoleculeRecord &record, Direction direction) {
  InstructionExample e;
  e.direction = direction;
  if (direction == Direction::kSmilesToIupac) {
    e.instruction = std::string(kForwardPrefix) + record.smiles;
    e.output = record.iupac;
  } else {
    e.instruction = std::string(kReversePrefix) + record.iupac;
    e.output = record.smiles;
  }
  return e;
}

InstructionExample reversed(const InstructionExample &example) {
  const bool forward = example.direction == Direction::kSmilesToIupac;
  const std::string_view prefix = forward ? kForwardPrefix : kReversePrefix;
  InstructionExample out;
  out.input = example.input;
  out.direction = forward ? Direction::kIupacToSmiles : Direction::kSmilesToIupac;
  out.instruction = std::string(forward ? kReversePrefix : kForwardPrefix) + example.output;
  out.output = example.instruction.substr(std::min(prefix.size(), example.instruction.size()));
  return out;
}

std::string render_prompt(std::string_view instruction, std::optional<std::string_view> output) {
  std::string out;
  out.reserve(kPromptHead.size() + instruction.size() + kPromptTail.size() + (output ? output->size() + 1 : 0));
  out += kPromptHead;
  out += instruction;
  out += kPromptTail;
  if (output) {
    out += ' ';
    out += *output;
  }
  return out;
}

std::vector<std::uint8_t> split_membership(std::uint64_t n, double ratio, std::uint64_t seed) {
  check_ratio(ratio);
  if (n == 0) throw Error("EmptyParent", "parent set is empty");
  std::vector<std::uint8_t> flags(n, 0);
  for (const auto i : shuffled_prefix(n, floor_times(ratio, n), seed)) flags[i] = 1;
  return flags;
}

std::vector<std::uint64_t> cohort_positions(std::uint64_t pool_size, std::uint64_t n, std::uint64_t seed) {
  if (n > pool_size) {
    throw Error("CohortTooLarge",
                "cohort of " + std::to_string(n) + " requested from a pool of " + std::to_string(pool_size));
  }
  return shuffled_prefix(pool_size, n, seed);
}

SplitPools split_parent(const std::vector<MoleculeRecord> &parent, double ratio, std::uint64_t seed) {
  const auto flags = split_membership(parent.size(), ratio, seed);
  SplitPools pools;
  for (std::size_t i = 0; i < parent.size(); ++i) (flags[i] ? pools.finetune : pools.test).push_back(parent[i]);
  return pools;
}

std::vector<MoleculeRecord> sample_cohort(const std::vector<MoleculeRecord> &pool, std::uint64_t n,
                                          std::uint64_t seed) {
  std::vector<MoleculeRecord> out;
  out.reserve(n);
  for (const auto i : cohort_positions(pool.size(), n, seed)) out.push_back(pool[i]);
  return out;
}

std::vector<std::uint64_t> default_cohort_grid() {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t n = 100; n <= 10000000; n *= 10) grid.push_back(n);
  return grid;
}

std::vector<InstructionExample> invert_cohort(std::vector<InstructionExample> examples, double fraction,
                                              std::uint64_t seed) {
  check_fraction(fraction);
  const std::uint64_t n = examples.size();
  for (const auto i : shuffled_prefix(n, round_times(fraction, n), seed)) examples[i] = reversed(examples[i]);
  return examples;
}

std::string DatasetManifest::to_json() const {
  const Json j{{"tool", kToolName},
               {"tool_version", tool_version},
               {"command", "build"},
               {"parent_sha256", parent_sha256},
               {"split_ratio", split_ratio},
               {"split_seed", split_seed},
               {"pool", pool},
               {"cohort_seed", cohort_seed},
               {"cohort_size", cohort_size},
               {"direction", direction_name(direction)},
               {"inversion_fraction", inversion_fraction},
               {"inversion_seed", inversion_seed},
               {"dataset_sha256", dataset_sha256}};
  return j.dump(2) + "\n";
}

DatasetManifest DatasetManifest::from_json(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    DatasetManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.parent_sha256 = j.at("parent_sha256").get<std::string>();
    m.split_ratio = j.at("split_ratio").get<double>();
    m.split_seed = j.at("split_seed").get<std::uint64_t>();
    m.pool = j.at("pool").get<std::string>();
    m.cohort_seed = j.at("cohort_seed").get<std::uint64_t>();
    m.cohort_size = j.at("cohort_size").get<std::uint64_t>();
    m.direction = parse_direction(j.at("direction").get<std::string>());
    m.inversion_fraction = j.at("inversion_fraction").get<double>();
    m.inversion_seed = j.at("inversion_seed").get<std::uint64_t>();
    m.dataset_sha256 = j.at("dataset_sha256").get<std::string>();
    return m;
  } catch (const Json::exception &e) {
    throw Error("MalformedManifest", e.what());
  }
}

std::string dataset_json(const std::vector<InstructionExample> &examples, int workers) {
  if (examples.empty()) return "[]\n";
  const std::size_t n = examples.size();
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, n);
  std::vector<std::string> parts(threads);
  auto render = [&](std::size_t t) {
    const std::size_t begin = n * t / threads, end = n * (t + 1) / threads;
    for (std::size_t i = begin; i < end; ++i) {
      render_object(parts[t], examples[i]);
      if (i + 1 < n) parts[t] += ",\n";
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(render, t);
  render(0);
  for (auto &th : pool) th.join();
  std::string out = "[\n";
  for (const auto &p : parts) out += p;
  out += "\n]\n";
  return out;
}

std::vector<InstructionExample> parse_dataset_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception &e) {
    throw Error("MalformedDataset", e.what());
  }
  if (!j.is_array()) throw Error("MalformedDataset", "dataset must be a JSON array");
  std::vector<InstructionExample> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json &o = j[i];
    const std::string where = "example " + std::to_string(i);
    if (!o.is_object() || o.size() != 3) throw Error("MalformedDataset", where + ": expected 3 keys");
    InstructionExample e;
    for (auto [key, field] : {std::pair{"instruction", &e.instruction}, std::pair{"input", &e.input},
                              std::pair{"output", &e.output}}) {
      const auto it = o.find(key);
      if (it == o.end() || !it->is_string()) {
        throw Error("MalformedDataset", where + ": missing string '" + key + "'");
      }
      *field = it->get<std::string>();
    }
    if (e.instruction.starts_with(kForwardPrefix)) {
      e.direction = Direction::kSmilesToIupac;
    } else if (e.instruction.starts_with(kReversePrefix)) {
      e.direction = Direction::kIupacToSmiles;
    } else {
      throw Error("MalformedDataset", where + ": unknown instruction template");
    }
    out.push_back(std::move(e));
  }
  return out;
}

fs::path manifest_path(const fs::path &dataset) {
  fs::path p = dataset;
  p += ".manifest.json";
  return p;
}

void emit_dataset(const std::vector<InstructionExample> &examples, const fs::path &path, DatasetManifest manifest,
                  int workers) {
  const std::string text = dataset_json(examples, workers);
  write_text_file(path, text);
  manifest.dataset_sha256 = sha256_hex(text);
  if (manifest.tool_version.empty()) manifest.tool_version = std::string(kToolVersion);
  write_text_file(manifest_path(path), manifest.to_json());
}

std::vector<InstructionExample> read_dataset(const fs::path &path) {
  return parse_dataset_json(read_text_file(path));
}

std::string prompt_list(const std::vector<InstructionExample> &examples) {
  std::string out;
  for (const auto &e : examples) {
    out += render_prompt(e.instruction);
    out += '\n';
  }
  return out;
}

std::string reference_list(const std::vector<MoleculeRecord> &cohort, const std::vector<InstructionExample> &examples) {
  if (cohort.size() != examples.size()) throw Error("InvalidArgument", "cohort and examples differ in length");
  std::string out;
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    out += std::to_string(cohort[i].id);
    out += '\t';
    out += examples[i].output;
    out += '\n';
  }
  return out;
}

DatasetManifest build_dataset(const fs::path &parent, const fs::path &out, const BuildOptions &options) {
  if (options.pool != "finetune" && options.pool != "test") {
    throw Error("InvalidArgument", "pool must be 'finetune' or 'test'");
  }
  check_fraction(options.inversion_fraction);
  std::uint64_t total = 0;
  for_each_record(parent, [&](const MoleculeRecord &) { ++total; });
  const auto flags = split_membership(total, options.split_ratio, options.split_seed);
  const std::uint8_t wanted = options.pool == "finetune" ? 1 : 0;
  std::vector<std::uint64_t> pool;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (flags[i] == wanted) pool.push_back(i);
  }
  const auto positions = cohort_positions(pool.size(), options.n, options.cohort_seed);
  // (parent index, cohort slot), visited in file order on the second pass.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> picks;
  picks.reserve(positions.size());
  for (std::uint64_t slot = 0; slot < positions.size(); ++slot) picks.emplace_back(pool[positions[slot]], slot);
  std::sort(picks.begin(), picks.end());

  std::vector<MoleculeRecord> cohort(positions.size());
  std::uint64_t index = 0;
  std::size_t next = 0;
  for_each_record(parent, [&](const MoleculeRecord &r) {
    if (next < picks.size() && picks[next].first == index) cohort[picks[next++].second] = r;
    ++index;
  });

  std::vector<InstructionExample> examples;
  examples.reserve(cohort.size());
  for (const auto &r : cohort) examples.push_back(format_example(r, options.direction));
  examples = invert_cohort(std::move(examples), options.inversion_fraction, options.inversion_seed);

  DatasetManifest m;
  m.parent_sha256 = sha256_file(parent);
  m.split_ratio = options.split_ratio;
  m.split_seed = options.split_seed;
  m.pool = options.pool;
  m.cohort_seed = options.cohort_seed;
  m.cohort_size = options.n;
  m.direction = options.direction;
  m.inversion_fraction = options.inversion_fraction;
  m.inversion_seed = options.inversion_seed;
  m.tool_version = std::string(kToolVersion);
  emit_dataset(examples, out, m, options.workers);
  if (!options.prompts.empty()) write_text_file(options.prompts, prompt_list(examples));
  if (!options.references.empty()) write_text_file(options.references, reference_list(cohort, examples));
  return DatasetManifest::from_json(read_text_file(manifest_path(out)));
}

SplitCounts split_parent_file(const fs::path &parent, double ratio, std::uint64_t seed, const fs::path &finetune_out,
                              const fs::path &test_out) {
  std::uint64_t total = 0;
  for_each_record(parent, [&](const MoleculeRecord &) { ++total; });
  const auto flags = split_membership(total, ratio, seed);
  std::ofstream ft(finetune_out, std::ios::binary | std::ios::trunc);
  std::ofstream test(test_out, std::ios::binary | std::ios::trunc);
  if (!ft || !test) throw Error("IoError", "cannot write split outputs");
  SplitCounts counts;
  std::uint64_t index = 0;
  for_each_record(parent, [&](const MoleculeRecord &r) {
    const bool in_finetune = flags[index++] != 0;
    (in_finetune ? ft : test) << r.id << '\t' << r.smiles << '\t' << r.iupac << '\n';
    ++(in_finetune ? counts.finetune : counts.test);
  });
  ft.close();
  test.close();
  if (!ft || !test) throw Error("IoError", "write failed for split outputs");
  return counts;
}

}  // namespace nomenkit
