//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_FILTERS_H_
#define NOMENKIT_FILTERS_H_

#include <string>
#include <string_view>
#include <vector>

#include "nomenkit/descriptors.h"

namespace nomenkit {

enum class Comparator { kLess, kLessEqual, kGreater, kGreaterEqual, kEqual };

// Open interval by default; either end can be made inclusive.
struct RangeCriterion {
  bool enabled = true;
  double min = 0.0;
  double max = 0.0;
  bool min_inclusive = false;
  bool max_inclusive = false;
};

struct ThresholdCriterion {
  bool enabled = true;
  Comparator op = Comparator::kGreaterEqual;
  double value = 0.0;
};

// Organic-compound filter. Defaults are the standard drug-like profile used
// for the parent set; every criterion can be disabled or retuned.
struct FilterConfig {
  bool elements = true;
  bool isotopes = true;
  bool fragments = true;
  bool functional_groups = true;
  RangeCriterion mw{true, 150.0, 550.0};
  ThresholdCriterion fsp3{true, Comparator::kGreaterEqual, 0.3};
  ThresholdCriterion n_phenyl_rings{true, Comparator::kLessEqual, 2};
  ThresholdCriterion n_aromatic_rings{true, Comparator::kLessEqual, 4};
  ThresholdCriterion n_rings{true, Comparator::kGreaterEqual, 1};
  ThresholdCriterion formal_charge{true, Comparator::kEqual, 0};
  ThresholdCriterion n_rotatable{true, Comparator::kGreaterEqual, 3};
  RangeCriterion tpsa{true, 25.0, 150.0};
  RangeCriterion clogp{true, -2.0, 4.5};
  ThresholdCriterion hbd{true, Comparator::kGreaterEqual, 4};

  std::vector<std::string> element_whitelist = default_element_whitelist();
  std::vector<SubstructurePattern> forbidden = default_forbidden_patterns();

  // Throws Error("InvalidConfig") when an enabled range has min >= max, a
  // bound is not finite or a list entry is malformed.
  void validate() const;

  // Options for compute_descriptors matching this config.
  DescriptorOptions descriptor_options() const;
};

// Criterion names in evaluation order.
const std::vector<std::string> &filter_criteria();

// Parses a JSON config. Missing keys keep their defaults. Throws
// Error("InvalidConfig").
FilterConfig parse_filter_config(std::string_view json_text);
// Loads a config file, or the bundled defaults when `path_or_name` is
// "a2-defaults".
FilterConfig load_filter_config(const std::string &path_or_name);
// Canonical JSON of the effective config (stable key order).
std::string filter_config_json(const FilterConfig &config);

struct FilterVerdict {
  bool pass = true;
  // Violated criteria, in filter_criteria() order.
  std::vector<std::string> reasons;
};

FilterVerdict passes_filters(const DescriptorSet &ds, const FilterConfig &config);

}  // namespace nomenkit

#endif  // NOMENKIT_FILTERS_H_
