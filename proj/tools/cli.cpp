//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "cli.h"

#include <CLI11.hpp>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <map>
#include <memory>
#include <sstream>

#include "nomenkit/curation.h"
#include "nomenkit/dataset.h"
#include "nomenkit/error.h"
#include "nomenkit/io.h"
#include "nomenkit/metrics.h"
#include "nomenkit/version.h"

namespace nomenkit::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Error kinds that come from bad arguments rather than bad data.
bool is_usage_error(const std::string &kind) { return kind == "InvalidArgument" || kind == "UsageError"; }

Json file_entry(const fs::path &path) {
  return Json{{"file", path.filename().string()}, {"sha256", sha256_file(path)}};
}

void write_manifest(const fs::path &path, const std::string &command, Json parameters, Json inputs, Json outputs) {
  const Json m{{"tool", kToolName},
               {"version", kToolVersion},
               {"command", command},
               {"parameters", std::move(parameters)},
               {"inputs", std::move(inputs)},
               {"outputs", std::move(outputs)}};
  write_text_file(path, m.dump(2) + "\n");
}

fs::path with_suffix(const fs::path &path, const std::string &suffix) {
  fs::path p = path;
  p += suffix;
  return p;
}

struct CurateArgs {
  std::string smiles, iupac, records, config = "a2-defaults", out = "parent.tsv", tmp_dir;
  int workers = 1;
  std::size_t memory_mb = 64;
  std::size_t batch_size = 4096;
};

struct SplitArgs {
  std::string parent, out_dir = ".";
  double ratio = 0.8;
  std::uint64_t seed = 42;
};

struct SampleArgs {
  std::string pool, out = "cohort.tsv";
  std::uint64_t n = 0;
  std::uint64_t seed = 42;
};

struct BuildArgs {
  std::string parent, out = "dataset.json", direction = "forward", pool = "finetune", prompts, references;
  BuildOptions options;
};

struct InvertArgs {
  std::string dataset, out;
  double fraction = 0.0;
  std::uint64_t seed = 42;
  int workers = 1;
};

struct EvalArgs {
  std::string predictions, out = "report.json", label;
  bool no_smoothing = false;
  int workers = 1;
};

struct ReportArgs {
  std::vector<std::string> summaries;
  std::string sweep, out = "report.tsv";
};

class Cli {
public:
  Cli() : app_("nomenkit: SMILES/IUPAC dataset curation, dataset building and evaluation", "nomenkit") {
    app_.require_subcommand(1);
    app_.set_version_flag("--version", std::string(kToolVersion), "Print the version and exit");
    add_curate();
    add_split();
    add_sample();
    add_build();
    add_invert();
    add_eval();
    add_report();
  }

  CLI::App &app() { return app_; }
  CLI::App *sub(const std::string &name) { return app_.get_subcommand(name); }
  void execute(std::ostream &out) { action_(out); }

private:
  void add_curate() {
    auto *s = app_.add_subcommand("curate", "Join, deduplicate and filter raw SMILES/name dumps into a parent set");
    s->add_option("--smiles", curate_.smiles, "id<TAB>SMILES file, plain or gzip")->check(CLI::ExistingFile);
    s->add_option("--iupac", curate_.iupac, "id<TAB>IUPAC name file, plain or gzip")->check(CLI::ExistingFile);
    s->add_option("--records", curate_.records,
                  "Existing id<TAB>SMILES<TAB>name record file sorted by id, instead of --smiles/--iupac")
        ->check(CLI::ExistingFile);
    s->add_option("--config", curate_.config, "Filter config JSON path, or 'a2-defaults' for the bundled set")
        ->capture_default_str();
    s->add_option("--out", curate_.out, "Parent set path; <out>.stats and <out>.manifest.json are written beside it")
        ->capture_default_str();
    s->add_option("--workers", curate_.workers, "Threads used for scoring records")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_option("--memory-mb", curate_.memory_mb, "Approximate memory budget for sorting and deduplication")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_option("--batch-size", curate_.batch_size, "Records scored per parallel batch")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_option("--tmp-dir", curate_.tmp_dir, "Directory for scratch files (default: system temp dir)");
    s->callback([this] { action_ = [this](std::ostream &out) { run_curate(out); }; });
  }

  void run_curate(std::ostream &out) {
    const bool raw = !curate_.smiles.empty() || !curate_.iupac.empty();
    if (raw && (curate_.smiles.empty() || curate_.iupac.empty())) {
      throw Error("UsageError", "--smiles and --iupac must be given together");
    }
    if (raw == !curate_.records.empty()) throw Error("UsageError", "give --smiles and --iupac, or --records");
    CurationOptions opts;
    opts.filters = load_filter_config(curate_.config);
    opts.workers = curate_.workers;
    opts.memory_budget_bytes = curate_.memory_mb << 20;
    opts.batch_size = curate_.batch_size;
    opts.work_dir = curate_.tmp_dir;
    const CurationStats stats = raw ? run_curation(curate_.smiles, curate_.iupac, curate_.out, opts)
                                    : run_curation_records(curate_.records, curate_.out, opts);
    out << stats.to_text();
  }

  void add_split() {
    auto *s = app_.add_subcommand("split", "Split a parent set into fine-tuning and test pools");
    s->add_option("--parent", split_.parent, "Parent record file")->required()->check(CLI::ExistingFile);
    s->add_option("--ratio", split_.ratio, "Fine-tuning share; the pool gets floor(ratio * N) records")
        ->capture_default_str();
    s->add_option("--seed", split_.seed, "Split seed")->capture_default_str();
    s->add_option("--out-dir", split_.out_dir,
                  "Directory receiving finetune_pool.tsv, test_pool.tsv and split.manifest.json")
        ->capture_default_str();
    s->callback([this] { action_ = [this](std::ostream &out) { run_split(out); }; });
  }

  void run_split(std::ostream &out) {
    const fs::path dir = split_.out_dir;
    fs::create_directories(dir);
    const fs::path ft = dir / "finetune_pool.tsv";
    const fs::path test = dir / "test_pool.tsv";
    const SplitCounts counts = split_parent_file(split_.parent, split_.ratio, split_.seed, ft, test);
    write_manifest(dir / "split.manifest.json", "split", Json{{"ratio", split_.ratio}, {"seed", split_.seed}},
                   Json{{"parent", file_entry(split_.parent)}},
                   Json{{"finetune_pool", file_entry(ft)}, {"test_pool", file_entry(test)}});
    out << "finetune\t" << counts.finetune << "\ntest\t" << counts.test << "\n";
  }

  void add_sample() {
    auto *s = app_.add_subcommand("sample", "Draw a cohort from a pool without replacement");
    s->add_option("--pool", sample_.pool, "Pool record file")->required()->check(CLI::ExistingFile);
    s->add_option("--n", sample_.n, "Cohort size")->required();
    s->add_option("--seed", sample_.seed, "Cohort seed")->capture_default_str();
    s->add_option("--out", sample_.out, "Cohort record file; <out>.manifest.json is written beside it")
        ->capture_default_str();
    s->callback([this] { action_ = [this](std::ostream &out) { run_sample(out); }; });
  }

  void run_sample(std::ostream &out) {
    const auto cohort = sample_cohort(read_records(sample_.pool), sample_.n, sample_.seed);
    write_records(sample_.out, cohort);
    write_manifest(with_suffix(sample_.out, ".manifest.json"), "sample",
                   Json{{"n", sample_.n}, {"seed", sample_.seed}}, Json{{"pool", file_entry(sample_.pool)}},
                   Json{{"cohort", file_entry(sample_.out)}});
    out << "cohort\t" << cohort.size() << "\n";
  }

  void add_build() {
    auto *s = app_.add_subcommand("build", "Split, sample, format and optionally invert a cohort into a dataset JSON");
    BuildOptions &o = build_.options;
    s->add_option("--parent", build_.parent, "Parent record file")->required()->check(CLI::ExistingFile);
    s->add_option("--n", o.n, "Cohort size")->required();
    s->add_option("--seed", o.cohort_seed, "Cohort seed")->capture_default_str();
    s->add_option("--direction", build_.direction, "forward (SMILES to name) or reverse (name to SMILES)")
        ->check(CLI::IsMember({"forward", "reverse", "smiles_to_iupac", "iupac_to_smiles"}))
        ->capture_default_str();
    s->add_option("--pool", build_.pool, "Pool to sample from: finetune or test (evaluation sets)")
        ->check(CLI::IsMember({"finetune", "test"}))
        ->capture_default_str();
    s->add_option("--split-ratio", o.split_ratio, "Fine-tuning share of the parent set")->capture_default_str();
    s->add_option("--split-seed", o.split_seed, "Split seed")->capture_default_str();
    s->add_option("--invert-fraction", o.inversion_fraction, "Share of examples flipped to the other direction")
        ->capture_default_str();
    s->add_option("--invert-seed", o.inversion_seed, "Seed choosing the flipped examples")->capture_default_str();
    s->add_option("--out", build_.out, "Dataset JSON; <out>.manifest.json is written beside it")
        ->capture_default_str();
    s->add_option("--prompts", build_.prompts, "Also write one generation prompt per line to this file");
    s->add_option("--references", build_.references,
                  "Also write id<TAB>expected output lines aligned with --prompts");
    s->add_option("--workers", o.workers, "Threads used to render the JSON")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->callback([this] { action_ = [this](std::ostream &out) { run_build(out); }; });
  }

  void run_build(std::ostream &out) {
    BuildOptions o = build_.options;
    o.direction = parse_direction(build_.direction);
    o.pool = build_.pool;
    o.prompts = build_.prompts;
    o.references = build_.references;
    const DatasetManifest m = build_dataset(build_.parent, build_.out, o);
    out << "examples\t" << m.cohort_size << "\ndataset_sha256\t" << m.dataset_sha256 << "\n";
  }

  void add_invert() {
    auto *s = app_.add_subcommand("invert", "Flip a share of a forward dataset to the reverse direction");
    s->add_option("--dataset", invert_.dataset, "Forward dataset JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--fraction", invert_.fraction, "Share of examples to flip, in [0, 1]")->required();
    s->add_option("--seed", invert_.seed, "Seed choosing the flipped examples")->capture_default_str();
    s->add_option("--out", invert_.out, "Output dataset JSON; <out>.manifest.json is written beside it")
        ->required();
    s->add_option("--workers", invert_.workers, "Threads used to render the JSON")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->callback([this] { action_ = [this](std::ostream &out) { run_invert(out); }; });
  }

  void run_invert(std::ostream &out) {
    const auto examples = read_dataset(invert_.dataset);
    for (const auto &e : examples) {
      if (e.direction != Direction::kSmilesToIupac) {
        throw Error("NotForward", invert_.dataset + ": inversion needs a dataset of forward examples");
      }
    }
    const auto inverted = invert_cohort(examples, invert_.fraction, invert_.seed);
    // With a build manifest the result is what build would produce with the
    // same inversion parameters, so the manifest carries over.
    const fs::path source_manifest = manifest_path(invert_.dataset);
    DatasetManifest m;
    if (fs::exists(source_manifest)) m = DatasetManifest::from_json(read_text_file(source_manifest));
    m.cohort_size = examples.size();
    m.inversion_fraction = invert_.fraction;
    m.inversion_seed = invert_.seed;
    emit_dataset(inverted, invert_.out, m, invert_.workers);
    std::size_t flipped = 0;
    for (const auto &e : inverted) flipped += e.direction == Direction::kIupacToSmiles ? 1 : 0;
    out << "examples\t" << inverted.size() << "\nreversed\t" << flipped << "\n";
  }

  void add_eval() {
    auto *s = app_.add_subcommand("eval", "Score predictions: exact match, normalized edit similarity, chunked BLEU");
    s->add_option("--predictions", eval_.predictions, "id<TAB>prediction<TAB>reference file")
        ->required()
        ->check(CLI::ExistingFile);
    s->add_option("--out", eval_.out,
                  "Summary JSON; <out>.examples.tsv and <out>.manifest.json are written beside it")
        ->capture_default_str();
    s->add_option("--label", eval_.label, "Label used by 'report' (default: predictions file name)");
    s->add_flag("--no-smoothing", eval_.no_smoothing, "Disable BLEU smoothing of zero 2- to 4-gram precisions");
    s->add_option("--workers", eval_.workers, "Threads used for scoring")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->callback([this] { action_ = [this](std::ostream &out) { run_eval(out); }; });
  }

  void run_eval(std::ostream &out) {
    EvalOptions opts;
    opts.bleu.smoothing = !eval_.no_smoothing;
    opts.workers = eval_.workers;
    opts.label = eval_.label;
    const EvalReport r = evaluate_file(eval_.predictions, eval_.out, opts);
    const EvalOutputs o = eval_outputs(eval_.out);
    write_manifest(with_suffix(eval_.out, ".manifest.json"), "eval",
                   Json{{"label", r.label}, {"bleu_smoothing", r.bleu_smoothing}},
                   Json{{"predictions", file_entry(eval_.predictions)}},
                   Json{{"summary", file_entry(o.summary)}, {"examples", file_entry(o.table)}});
    out << "n\t" << r.n << "\n% Exact Matches\t" << round_half_up(r.pct_exact, 2)
        << "\nMean Normalized Edit Distance\t" << round_half_up(r.mean_edit_similarity, 2) << "\nMean BLEU Score\t"
        << round_half_up(r.mean_bleu, 2) << "\n";
  }

  void add_report() {
    auto *s = app_.add_subcommand("report", "Merge evaluation summaries into one comparison table");
    s->add_option("--summary", report_.summaries, "Summary JSON written by 'eval' (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    s->add_option("--sweep", report_.sweep,
                  "JSON list of {label, model, cohort_size, epochs} entries naming each summary's run")
        ->check(CLI::ExistingFile);
    s->add_option("--out", report_.out, "Table (TSV); <out>.manifest.json is written beside it")
        ->capture_default_str();
    s->callback([this] { action_ = [this](std::ostream &out) { run_report(out); }; });
  }

  void run_report(std::ostream &out) {
    struct SweepEntry {
      std::string model, cohort_size, epochs;
    };
    std::map<std::string, SweepEntry> sweep;
    if (!report_.sweep.empty()) {
      try {
        const Json j = Json::parse(read_text_file(report_.sweep));
        if (!j.is_array()) throw Error("MalformedSweep", report_.sweep + ": expected a JSON array");
        for (const auto &e : j) {
          auto text = [&](const char *key) {
            const auto it = e.find(key);
            if (it == e.end()) return std::string();
            return it->is_string() ? it->get<std::string>() : it->dump();
          };
          const std::string label = text("label");
          if (label.empty()) throw Error("MalformedSweep", report_.sweep + ": entry without a label");
          sweep[label] = {text("model"), text("cohort_size"), text("epochs")};
        }
      } catch (const Json::exception &e) {
        throw Error("MalformedSweep", report_.sweep + ": " + e.what());
      }
    }
    std::string table =
        "model\tdataset_size\tepochs\tlabel\tn\t% Exact Matches\tMean Normalized Edit Distance\tMean BLEU Score\n";
    Json inputs = Json::array();
    for (const auto &path : report_.summaries) {
      const EvalReport r = read_summary(path);
      SweepEntry entry{r.label, "", ""};
      if (!sweep.empty()) {
        const auto it = sweep.find(r.label);
        if (it == sweep.end()) throw Error("MissingSweepEntry", "no sweep entry for label '" + r.label + "'");
        entry = it->second;
      }
      table += entry.model + '\t' + entry.cohort_size + '\t' + entry.epochs + '\t' + r.label + '\t' +
               std::to_string(r.n) + '\t' + round_half_up(r.pct_exact, 2) + '\t' +
               round_half_up(r.mean_edit_similarity, 2) + '\t' + round_half_up(r.mean_bleu, 2) + '\n';
      inputs.push_back(file_entry(path));
    }
    write_text_file(report_.out, table);
    Json all_inputs{{"summaries", inputs}};
    if (!report_.sweep.empty()) all_inputs["sweep"] = file_entry(report_.sweep);
    write_manifest(with_suffix(report_.out, ".manifest.json"), "report", Json::object(), all_inputs,
                   Json{{"table", file_entry(report_.out)}});
    out << table;
  }

  CLI::App app_;
  CurateArgs curate_;
  SplitArgs split_;
  SampleArgs sample_;
  BuildArgs build_;
  InvertArgs invert_;
  EvalArgs eval_;
  ReportArgs report_;
  std::function<void(std::ostream &)> action_;
};

void print_error(std::ostream &err, const std::string &kind, const std::string &message) {
  err << Json{{"error", kind}, {"message", message}}.dump(-1, ' ', false, Json::error_handler_t::replace) << "\n";
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  Cli cli;
  try {
    cli.app().parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << cli.app().help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << cli.app().help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion &) {
    out << kToolName << " " << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError &e) {
    // Subcommand --help surfaces here too.
    if (e.get_exit_code() == 0) {
      for (auto *sub : cli.app().get_subcommands()) out << sub->help();
      if (cli.app().get_subcommands().empty()) out << cli.app().help();
      return 0;
    }
    print_error(err, "UsageError", e.what());
    return 2;
  }
  try {
    cli.execute(out);
  } catch (const Error &e) {
    print_error(err, e.kind(), e.what());
    return is_usage_error(e.kind()) ? 2 : 1;
  } catch (const fs::filesystem_error &e) {
    print_error(err, "IoError", e.what());
    return 1;
  } catch (const std::exception &e) {
    print_error(err, "InternalError", e.what());
    return 1;
  }
  return 0;
}

std::vector<std::string> subcommands() {
  Cli cli;
  std::vector<std::string> out;
  for (const auto *sub : cli.app().get_subcommands({})) out.push_back(sub->get_name());
  return out;
}

std::string help_text(const std::string &subcommand) {
  std::vector<const char *> argv{"nomenkit"};
  if (!subcommand.empty()) argv.push_back(subcommand.c_str());
  argv.push_back("--help");
  std::ostringstream out, err;
  run(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

std::vector<std::pair<std::string, std::string>> flags(const std::string &subcommand) {
  Cli cli;
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto *opt : cli.sub(subcommand)->get_options()) {
    if (opt->get_lnames().empty()) continue;
    out.emplace_back("--" + opt->get_lnames().front(), opt->get_description());
  }
  return out;
}

}  // namespace nomenkit::cli
