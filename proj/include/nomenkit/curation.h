//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_CURATION_H_
#define NOMENKIT_CURATION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nomenkit/filters.h"

namespace nomenkit {

struct MoleculeRecord {
  std::int64_t id = 0;
  std::string smiles;
  std::string iupac;

  bool operator==(const MoleculeRecord &) const = default;
};

struct CurationStats {
  std::uint64_t rows_read_smiles = 0;
  std::uint64_t rows_read_iupac = 0;
  // Lines without exactly one tab, with an empty value or a bad id.
  std::uint64_t malformed_lines = 0;
  // Repeated ids within one input file; the first occurrence is kept.
  std::uint64_t duplicate_id_lines = 0;
  std::uint64_t rows_joined = 0;
  std::uint64_t dropped_duplicate_smiles = 0;
  std::uint64_t dropped_duplicate_iupac = 0;
  std::uint64_t dropped_parse_error = 0;
  // Records failing at least one criterion.
  std::uint64_t dropped_filtered = 0;
  // Per-criterion failures; a record failing several criteria is counted
  // under each of them.
  std::map<std::string, std::uint64_t> dropped_per_filter;
  std::uint64_t retained = 0;

  std::uint64_t rows_read() const { return rows_read_smiles + rows_read_iupac; }
  // retained + every record-level drop == rows_joined.
  bool conserved() const;
  // One "name<TAB>value" line per counter, criteria as dropped_filter.<name>.
  std::string to_text() const;
};

struct CurationOptions {
  FilterConfig filters;
  int workers = 1;
  // Approximate in-memory budget for sort runs and dedup buckets.
  std::size_t memory_budget_bytes = std::size_t{64} << 20;
  // Records scored per parallel batch.
  std::size_t batch_size = 4096;
  // Scratch directory; a private one under the system temp dir when empty.
  std::filesystem::path work_dir;
};

using RecordSink = std::function<void(const MoleculeRecord &)>;

// Inner join of two `id<TAB>value` files (plain or gzip) on id, delivered in
// ascending id order. Inputs need not be sorted; they are sorted externally.
void ingest_join(const std::filesystem::path &smiles_file, const std::filesystem::path &iupac_file,
                 const RecordSink &sink, CurationStats &stats, const CurationOptions &options = {});

// Drops records whose SMILES appeared at a smaller id, then, among the
// survivors, records whose name appeared at a smaller id. Input is a record
// file sorted by id; output keeps that order.
void deduplicate(const std::filesystem::path &records_file, const RecordSink &sink, CurationStats &stats,
                 const CurationOptions &options = {});
std::vector<MoleculeRecord> deduplicate(const std::vector<MoleculeRecord> &records, CurationStats &stats,
                                        const CurationOptions &options = {});

struct RecordVerdict {
  bool parsed = false;
  std::string parse_error;
  FilterVerdict filters;
  bool retained() const { return parsed && filters.pass; }
};

RecordVerdict evaluate_record(const std::string &smiles, const FilterConfig &config,
                              const DescriptorOptions &descriptor_options);

// Scores every record of a record file and passes retained ones to `sink`
// in input order, whatever the worker count.
void curate(const std::filesystem::path &records_file, const RecordSink &sink, CurationStats &stats,
            const CurationOptions &options = {});

// Record files: one `id<TAB>smiles<TAB>iupac` line per record.
void write_records(const std::filesystem::path &path, const std::vector<MoleculeRecord> &records);
std::vector<MoleculeRecord> read_records(const std::filesystem::path &path);
// Streams a record file; throws MalformedRow on a bad line.
void for_each_record(const std::filesystem::path &path, const RecordSink &sink);

struct CurationOutputs {
  std::filesystem::path parent;
  std::filesystem::path stats;
  std::filesystem::path manifest;
};

// Outputs derived from the parent path: <parent>.stats and
// <parent>.manifest.json.
CurationOutputs curation_outputs(const std::filesystem::path &parent);

// Full pipeline: join, deduplicate, filter, then write the parent set,
// stats and manifest.
CurationStats run_curation(const std::filesystem::path &smiles_file, const std::filesystem::path &iupac_file,
                           const std::filesystem::path &parent, const CurationOptions &options = {});
// Same from an existing record file (for example a previous parent set);
// the input must be sorted by id.
CurationStats run_curation_records(const std::filesystem::path &records_file, const std::filesystem::path &parent,
                                   const CurationOptions &options = {});

}  // namespace nomenkit

#endif  // NOMENKIT_CURATION_H_
