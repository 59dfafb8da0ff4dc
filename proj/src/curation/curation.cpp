//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/curation.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <queue>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "nomenkit/chem/smiles.h"
#include "nomenkit/error.h"
#include "nomenkit/io.h"
#include "nomenkit/version.h"

namespace nomenkit {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Rough per-entry overhead of an in-memory (id, value) pair.
constexpr std::size_t kEntryOverhead = 64;

bool parse_id(std::string_view text, std::int64_t &id) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  return ec == std::errc() && ptr == text.data() + text.size() && id >= 0;
}

// `id<TAB>value` with a non-empty value and no further tabs.
bool parse_id_value(const std::string &line, std::int64_t &id, std::string &value) {
  const auto tab = line.find('\t');
  if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) return false;
  if (tab + 1 == line.size() || !parse_id(std::string_view(line).substr(0, tab), id)) return false;
  value.assign(line, tab + 1, std::string::npos);
  return true;
}

bool parse_record(const std::string &line, MoleculeRecord &rec) {
  const auto t1 = line.find('\t');
  if (t1 == std::string::npos) return false;
  const auto t2 = line.find('\t', t1 + 1);
  if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) return false;
  if (!parse_id(std::string_view(line).substr(0, t1), rec.id)) return false;
  rec.smiles.assign(line, t1 + 1, t2 - t1 - 1);
  rec.iupac.assign(line, t2 + 1, std::string::npos);
  return !rec.smiles.empty() && !rec.iupac.empty();
}

class BufferedWriter {
public:
  explicit BufferedWriter(const fs::path &path) : path_(path), buffer_(std::make_unique<char[]>(kSize)) {
    out_.rdbuf()->pubsetbuf(buffer_.get(), kSize);
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error("IoError", "cannot write " + path.string());
  }
  void write_record(const MoleculeRecord &r) { out_ << r.id << '\t' << r.smiles << '\t' << r.iupac << '\n'; }
  void write_pair(std::int64_t id, const std::string &value) { out_ << id << '\t' << value << '\n'; }
  void close() {
    out_.close();
    if (!out_) throw Error("IoError", "write failed for " + path_.string());
  }

private:
  static constexpr std::size_t kSize = 1 << 20;
  fs::path path_;
  std::unique_ptr<char[]> buffer_;
  std::ofstream out_;
};

class RecordReader {
public:
  explicit RecordReader(const fs::path &path) : reader_(path), path_(path) {}
  bool next(MoleculeRecord &rec) {
    if (!reader_.next(line_)) return false;
    if (!parse_record(line_, rec)) {
      throw Error("MalformedRow", path_.string() + ":" + std::to_string(reader_.line_number()) +
                                      ": expected id<TAB>smiles<TAB>iupac");
    }
    return true;
  }

private:
  LineReader reader_;
  fs::path path_;
  std::string line_;
};

// K-way merge of id-sorted sources; ties go to the lower source index.
template <typename Source, typename Item> class IdMerge {
public:
  explicit IdMerge(std::vector<std::unique_ptr<Source>> sources) : sources_(std::move(sources)) {
    heads_.resize(sources_.size());
    for (std::size_t i = 0; i < sources_.size(); ++i) advance(i);
  }
  bool next(Item &out) {
    if (heap_.empty()) return false;
    const std::size_t i = heap_.top().second;
    heap_.pop();
    out = std::move(heads_[i]);
    advance(i);
    return true;
  }

private:
  void advance(std::size_t i) {
    if (sources_[i]->next(heads_[i])) heap_.push({id_of(heads_[i]), i});
  }
  static std::int64_t id_of(const MoleculeRecord &r) { return r.id; }
  static std::int64_t id_of(const std::pair<std::int64_t, std::string> &p) { return p.first; }

  using Key = std::pair<std::int64_t, std::size_t>;
  std::vector<std::unique_ptr<Source>> sources_;
  std::vector<Item> heads_;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap_;
};

using IdValue = std::pair<std::int64_t, std::string>;

class RunReader {
public:
  explicit RunReader(const fs::path &path) : reader_(path) {}
  bool next(IdValue &out) {
    if (!reader_.next(line_)) return false;
    const auto tab = line_.find('\t');
    std::from_chars(line_.data(), line_.data() + tab, out.first);
    out.second.assign(line_, tab + 1, std::string::npos);
    return true;
  }

private:
  LineReader reader_;
  std::string line_;
};

// One input file as an id-sorted stream with the first value per id.
class SortedInput {
public:
  SortedInput(const fs::path &input, const fs::path &scratch, const std::string &tag, std::size_t budget,
              std::uint64_t &rows_read, CurationStats &stats)
      : stats_(stats) {
    LineReader reader(input);
    std::vector<IdValue> chunk;
    std::size_t bytes = 0;
    std::vector<fs::path> runs;
    auto flush = [&] {
      if (chunk.empty()) return;
      std::stable_sort(chunk.begin(), chunk.end(),
                       [](const IdValue &a, const IdValue &b) { return a.first < b.first; });
      const fs::path run = scratch / (tag + "-run" + std::to_string(runs.size()));
      BufferedWriter out(run);
      for (const auto &[id, value] : chunk) out.write_pair(id, value);
      out.close();
      runs.push_back(run);
      chunk.clear();
      bytes = 0;
    };
    std::string line;
    IdValue entry;
    while (reader.next(line)) {
      ++rows_read;
      if (!parse_id_value(line, entry.first, entry.second)) {
        ++stats.malformed_lines;
        continue;
      }
      bytes += entry.second.size() + kEntryOverhead;
      chunk.push_back(std::move(entry));
      if (bytes >= budget) flush();
    }
    flush();
    std::vector<std::unique_ptr<RunReader>> sources;
    for (const auto &run : runs) sources.push_back(std::make_unique<RunReader>(run));
    merge_ = std::make_unique<IdMerge<RunReader, IdValue>>(std::move(sources));
  }

  bool next(IdValue &out) {
    while (merge_->next(out)) {
      if (has_last_ && out.first == last_) {
        ++stats_.duplicate_id_lines;
        continue;
      }
      has_last_ = true;
      last_ = out.first;
      return true;
    }
    return false;
  }

private:
  CurationStats &stats_;
  std::unique_ptr<IdMerge<RunReader, IdValue>> merge_;
  bool has_last_ = false;
  std::int64_t last_ = 0;
};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Keeps the first record (lowest id) per value of one field. Records are
// spread over hash buckets on disk so only one bucket's keys are held in
// memory; buckets are merged back by id.
void dedup_pass(const fs::path &input, const fs::path &output, bool by_smiles, std::uint64_t &dropped,
                const CurationOptions &options, const fs::path &scratch) {
  const std::uintmax_t size = fs::file_size(input);
  const std::size_t budget = std::max<std::size_t>(options.memory_budget_bytes, 1 << 16);
  const std::size_t buckets =
      std::clamp<std::size_t>(static_cast<std::size_t>(size * 2 / budget) + 1, 1, 512);
  const std::string tag = by_smiles ? "dedup-smiles" : "dedup-iupac";
  std::vector<fs::path> in_paths, out_paths;
  {
    std::vector<std::unique_ptr<BufferedWriter>> writers;
    for (std::size_t b = 0; b < buckets; ++b) {
      in_paths.push_back(scratch / (tag + "-in" + std::to_string(b)));
      writers.push_back(std::make_unique<BufferedWriter>(in_paths.back()));
    }
    RecordReader reader(input);
    MoleculeRecord rec;
    while (reader.next(rec)) {
      writers[fnv1a(by_smiles ? rec.smiles : rec.iupac) % buckets]->write_record(rec);
    }
    for (auto &w : writers) w->close();
  }
  for (std::size_t b = 0; b < buckets; ++b) {
    out_paths.push_back(scratch / (tag + "-out" + std::to_string(b)));
    std::unordered_set<std::string> seen;
    RecordReader reader(in_paths[b]);
    BufferedWriter writer(out_paths.back());
    MoleculeRecord rec;
    while (reader.next(rec)) {
      if (seen.insert(by_smiles ? rec.smiles : rec.iupac).second) {
        writer.write_record(rec);
      } else {
        ++dropped;
      }
    }
    writer.close();
    fs::remove(in_paths[b]);
  }
  std::vector<std::unique_ptr<RecordReader>> sources;
  for (const auto &p : out_paths) sources.push_back(std::make_unique<RecordReader>(p));
  IdMerge<RecordReader, MoleculeRecord> merge(std::move(sources));
  BufferedWriter writer(output);
  MoleculeRecord rec;
  while (merge.next(rec)) writer.write_record(rec);
  writer.close();
  for (const auto &p : out_paths) fs::remove(p);
}

Json file_entry(const fs::path &path) {
  return Json{{"file", path.filename().string()}, {"sha256", sha256_file(path)}};
}

Json stats_json(const CurationStats &s) {
  Json per_filter = Json::object();
  for (const auto &name : filter_criteria()) {
    const auto it = s.dropped_per_filter.find(name);
    per_filter[name] = it == s.dropped_per_filter.end() ? 0 : it->second;
  }
  return Json{{"rows_read_smiles", s.rows_read_smiles},
              {"rows_read_iupac", s.rows_read_iupac},
              {"malformed_lines", s.malformed_lines},
              {"duplicate_id_lines", s.duplicate_id_lines},
              {"rows_joined", s.rows_joined},
              {"dropped_duplicate_smiles", s.dropped_duplicate_smiles},
              {"dropped_duplicate_iupac", s.dropped_duplicate_iupac},
              {"dropped_parse_error", s.dropped_parse_error},
              {"dropped_filtered", s.dropped_filtered},
              {"dropped_per_filter", per_filter},
              {"retained", s.retained}};
}

// Dedup, filter and write outputs for an id-sorted record file.
CurationStats finish(const fs::path &joined, const Json &inputs, const fs::path &parent, CurationStats stats,
                     const CurationOptions &options, const fs::path &scratch) {
  const fs::path deduped = scratch / "deduped.tsv";
  {
    BufferedWriter writer(deduped);
    deduplicate(joined, [&](const MoleculeRecord &r) { writer.write_record(r); }, stats, options);
    writer.close();
  }
  const CurationOutputs out = curation_outputs(parent);
  fs::path tmp = out.parent;
  tmp += ".tmp";
  {
    BufferedWriter writer(tmp);
    curate(deduped, [&](const MoleculeRecord &r) { writer.write_record(r); }, stats, options);
    writer.close();
  }
  fs::rename(tmp, out.parent);
  write_text_file(out.stats, stats.to_text());

  const std::string config = filter_config_json(options.filters);
  const Json manifest{{"tool", kToolName},
                      {"version", kToolVersion},
                      {"command", "curate"},
                      {"inputs", inputs},
                      {"config_sha256", sha256_hex(config)},
                      {"config", Json::parse(config)},
                      {"outputs", Json{{"parent", file_entry(out.parent)}, {"stats", file_entry(out.stats)}}},
                      {"stats", stats_json(stats)}};
  write_text_file(out.manifest, manifest.dump(2) + "\n");
  return stats;
}

}  // namespace

bool CurationStats::conserved() const {
  return retained + dropped_duplicate_smiles + dropped_duplicate_iupac + dropped_parse_error + dropped_filtered ==
         rows_joined;
}

std::string CurationStats::to_text() const {
  std::string out;
  auto line = [&](const std::string &name, std::uint64_t v) { out += name + "\t" + std::to_string(v) + "\n"; };
  line("rows_read_smiles", rows_read_smiles);
  line("rows_read_iupac", rows_read_iupac);
  line("rows_read", rows_read());
  line("malformed_lines", malformed_lines);
  line("duplicate_id_lines", duplicate_id_lines);
  line("rows_joined", rows_joined);
  line("dropped_duplicate_smiles", dropped_duplicate_smiles);
  line("dropped_duplicate_iupac", dropped_duplicate_iupac);
  line("dropped_parse_error", dropped_parse_error);
  line("dropped_filtered", dropped_filtered);
  for (const auto &name : filter_criteria()) {
    const auto it = dropped_per_filter.find(name);
    line("dropped_filter." + name, it == dropped_per_filter.end() ? 0 : it->second);
  }
  line("retained", retained);
  return out;
}

void ingest_join(const fs::path &smiles_file, const fs::path &iupac_file, const RecordSink &sink,
                 CurationStats &stats, const CurationOptions &options) {
  const ScratchDir scratch(options.work_dir);
  // Each sorter may hold half the budget while building runs.
  const std::size_t budget = std::max<std::size_t>(options.memory_budget_bytes / 2, 1 << 16);
  SortedInput smiles(smiles_file, scratch.path(), "smiles", budget, stats.rows_read_smiles, stats);
  SortedInput names(iupac_file, scratch.path(), "iupac", budget, stats.rows_read_iupac, stats);
  IdValue s, n;
  bool has_s = smiles.next(s);
  bool has_n = names.next(n);
  MoleculeRecord rec;
  while (has_s && has_n) {
    if (s.first < n.first) {
      has_s = smiles.next(s);
    } else if (n.first < s.first) {
      has_n = names.next(n);
    } else {
      rec.id = s.first;
      rec.smiles = std::move(s.second);
      rec.iupac = std::move(n.second);
      ++stats.rows_joined;
      sink(rec);
      has_s = smiles.next(s);
      has_n = names.next(n);
    }
  }
  // Drain so duplicate-id counts cover the whole file.
  while (has_s) has_s = smiles.next(s);
  while (has_n) has_n = names.next(n);
}

void deduplicate(const fs::path &records_file, const RecordSink &sink, CurationStats &stats,
                 const CurationOptions &options) {
  const ScratchDir scratch(options.work_dir);
  const fs::path first = scratch / "unique-smiles.tsv";
  const fs::path second = scratch / "unique-both.tsv";
  dedup_pass(records_file, first, true, stats.dropped_duplicate_smiles, options, scratch.path());
  dedup_pass(first, second, false, stats.dropped_duplicate_iupac, options, scratch.path());
  for_each_record(second, sink);
}

std::vector<MoleculeRecord> deduplicate(const std::vector<MoleculeRecord> &records, CurationStats &stats,
                                        const CurationOptions &options) {
  const ScratchDir scratch(options.work_dir);
  std::vector<MoleculeRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const MoleculeRecord &a, const MoleculeRecord &b) { return a.id < b.id; });
  write_records(scratch / "input.tsv", sorted);
  std::vector<MoleculeRecord> out;
  deduplicate(scratch / "input.tsv", [&](const MoleculeRecord &r) { out.push_back(r); }, stats, options);
  return out;
}

RecordVerdict evaluate_record(const std::string &smiles, const FilterConfig &config,
                              const DescriptorOptions &descriptor_options) {
  RecordVerdict v;
  MolecularGraph graph;
  try {
    graph = read_smiles(smiles);
  } catch (const std::exception &e) {
    v.parse_error = e.what();
    return v;
  }
  v.parsed = true;
  v.filters = passes_filters(compute_descriptors(graph, descriptor_options), config);
  return v;
}

void curate(const fs::path &records_file, const RecordSink &sink, CurationStats &stats,
            const CurationOptions &options) {
  const DescriptorOptions descriptor_options = options.filters.descriptor_options();
  const std::size_t batch_size = std::max<std::size_t>(options.batch_size, 1);
  const int workers = std::max(options.workers, 1);
  RecordReader reader(records_file);
  std::vector<MoleculeRecord> batch;
  std::vector<RecordVerdict> verdicts;
  bool more = true;
  while (more) {
    batch.clear();
    MoleculeRecord rec;
    while (batch.size() < batch_size && (more = reader.next(rec))) batch.push_back(std::move(rec));
    if (batch.empty()) break;
    verdicts.assign(batch.size(), RecordVerdict());
    auto work = [&](std::size_t start, std::size_t stride) {
      for (std::size_t i = start; i < batch.size(); i += stride) {
        verdicts[i] = evaluate_record(batch[i].smiles, options.filters, descriptor_options);
      }
    };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(workers), batch.size());
    if (threads <= 1) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
      for (auto &th : pool) th.join();
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const RecordVerdict &v = verdicts[i];
      if (!v.parsed) {
        ++stats.dropped_parse_error;
      } else if (!v.filters.pass) {
        ++stats.dropped_filtered;
        for (const auto &reason : v.filters.reasons) ++stats.dropped_per_filter[reason];
      } else {
        ++stats.retained;
        sink(batch[i]);
      }
    }
  }
}

void write_records(const fs::path &path, const std::vector<MoleculeRecord> &records) {
  BufferedWriter writer(path);
  for (const auto &r : records) writer.write_record(r);
  writer.close();
}

void for_each_record(const fs::path &path, const RecordSink &sink) {
  RecordReader reader(path);
  MoleculeRecord rec;
  while (reader.next(rec)) sink(rec);
}

std::vector<MoleculeRecord> read_records(const fs::path &path) {
  std::vector<MoleculeRecord> out;
  for_each_record(path, [&](const MoleculeRecord &r) { out.push_back(r); });
  return out;
}

CurationOutputs curation_outputs(const fs::path &parent) {
  CurationOutputs out;
  out.parent = parent;
  out.stats = parent;
  out.stats += ".stats";
  out.manifest = parent;
  out.manifest += ".manifest.json";
  return out;
}

CurationStats run_curation(const fs::path &smiles_file, const fs::path &iupac_file, const fs::path &parent,
                           const CurationOptions &options) {
  options.filters.validate();
  const ScratchDir scratch(options.work_dir);
  CurationStats stats;
  const fs::path joined = scratch / "joined.tsv";
  {
    BufferedWriter writer(joined);
    ingest_join(smiles_file, iupac_file, [&](const MoleculeRecord &r) { writer.write_record(r); }, stats,
                options);
    writer.close();
  }
  const Json inputs{{"smiles", file_entry(smiles_file)}, {"iupac", file_entry(iupac_file)}};
  return finish(joined, inputs, parent, stats, options, scratch.path());
}

CurationStats run_curation_records(const fs::path &records_file, const fs::path &parent,
                                   const CurationOptions &options) {
  options.filters.validate();
  const ScratchDir scratch(options.work_dir);
  CurationStats stats;
  const fs::path joined = scratch / "joined.tsv";
  {
    BufferedWriter writer(joined);
    bool first = true;
    std::int64_t last = 0;
    for_each_record(records_file, [&](const MoleculeRecord &r) {
      if (!first && r.id <= last) {
        throw Error("MalformedRow", records_file.string() + ": ids must be strictly ascending (id " +
                                        std::to_string(r.id) + ")");
      }
      first = false;
      last = r.id;
      ++stats.rows_joined;
      writer.write_record(r);
    });
    writer.close();
  }
  const Json inputs{{"records", file_entry(records_file)}};
  return finish(joined, inputs, parent, stats, options, scratch.path());
}

}  // namespace nomenkit
