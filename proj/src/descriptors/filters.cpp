//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/filters.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nomenkit/data.h"
#include "nomenkit/error.h"

namespace nomenkit {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kDefaultsName = "a2-defaults";
constexpr std::string_view kDefaultsFile = "a2_defaults.json";

[[noreturn]] void invalid(const std::string &message) { throw Error("InvalidConfig", message); }

const char *op_text(Comparator op) {
  switch (op) {
  case Comparator::kLess:
    return "<";
  case Comparator::kLessEqual:
    return "<=";
  case Comparator::kGreater:
    return ">";
  case Comparator::kGreaterEqual:
    return ">=";
  case Comparator::kEqual:
    return "==";
  }
  return "?";
}

Comparator parse_op(const std::string &text, const std::string &key) {
  for (Comparator op : {Comparator::kLess, Comparator::kLessEqual, Comparator::kGreater,
                        Comparator::kGreaterEqual, Comparator::kEqual}) {
    if (text == op_text(op)) return op;
  }
  invalid(key + ": unknown comparator '" + text + "'");
}

template <typename T> bool compare(Comparator op, T lhs, T rhs) {
  switch (op) {
  case Comparator::kLess:
    return lhs < rhs;
  case Comparator::kLessEqual:
    return lhs <= rhs;
  case Comparator::kGreater:
    return lhs > rhs;
  case Comparator::kGreaterEqual:
    return lhs >= rhs;
  case Comparator::kEqual:
    return lhs == rhs;
  }
  return false;
}

bool in_range(const RangeCriterion &r, double x) {
  const bool low = r.min_inclusive ? x >= r.min : x > r.min;
  const bool high = r.max_inclusive ? x <= r.max : x < r.max;
  return low && high;
}

// A threshold written as a decimal, held as num / 10^scale so that ratios
// of integers compare exactly (0.3 is not representable in binary).
struct Decimal {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

Decimal to_decimal(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  const std::string text(buf, res.ptr);
  Decimal d;
  const auto dot = text.find('.');
  std::string digits = text;
  if (dot != std::string::npos) {
    const std::size_t scale = text.size() - dot - 1;
    // Beyond 12 decimals the binary value is as good as anything.
    if (scale > 12) return {static_cast<std::int64_t>(std::llround(v * 1e12)), 1000000000000};
    digits.erase(dot, 1);
    for (std::size_t i = 0; i < scale; ++i) d.den *= 10;
  }
  d.num = std::stoll(digits);
  return d;
}

bool ratio_passes(const ThresholdCriterion &t, std::int64_t numerator, std::int64_t denominator) {
  const Decimal d = to_decimal(t.value);
  // numerator / denominator OP d.num / d.den, denominators positive.
  return compare<std::int64_t>(t.op, numerator * d.den, d.num * denominator);
}

void read_bool(const Json &obj, const char *key, bool &out, const std::string &ctx) {
  if (!obj.contains(key)) return;
  if (!obj[key].is_boolean()) invalid(ctx + "." + key + " must be a boolean");
  out = obj[key].get<bool>();
}

void read_number(const Json &obj, const char *key, double &out, const std::string &ctx) {
  if (!obj.contains(key)) return;
  if (!obj[key].is_number()) invalid(ctx + "." + key + " must be a number");
  out = obj[key].get<double>();
}

const Json *section(const Json &root, const char *key, std::initializer_list<std::string_view> allowed) {
  if (!root.contains(key)) return nullptr;
  const Json &s = root[key];
  if (!s.is_object()) invalid(std::string(key) + " must be an object");
  for (const auto &item : s.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      invalid(std::string(key) + ": unknown key '" + item.key() + "'");
    }
  }
  return &s;
}

void read_flag(const Json &root, const char *key, bool &enabled) {
  if (const Json *s = section(root, key, {"enabled"})) read_bool(*s, "enabled", enabled, key);
}

void read_range(const Json &root, const char *key, RangeCriterion &r) {
  const Json *s = section(root, key, {"enabled", "min", "max", "min_inclusive", "max_inclusive"});
  if (s == nullptr) return;
  read_bool(*s, "enabled", r.enabled, key);
  read_number(*s, "min", r.min, key);
  read_number(*s, "max", r.max, key);
  read_bool(*s, "min_inclusive", r.min_inclusive, key);
  read_bool(*s, "max_inclusive", r.max_inclusive, key);
}

void read_threshold(const Json &root, const char *key, ThresholdCriterion &t) {
  const Json *s = section(root, key, {"enabled", "op", "value"});
  if (s == nullptr) return;
  read_bool(*s, "enabled", t.enabled, key);
  if (s->contains("op")) {
    if (!(*s)["op"].is_string()) invalid(std::string(key) + ".op must be a string");
    t.op = parse_op((*s)["op"].get<std::string>(), key);
  }
  read_number(*s, "value", t.value, key);
}

std::vector<SubstructurePattern> patterns_from_table(const std::string &text, const std::string &origin) {
  std::vector<SubstructurePattern> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      invalid(origin + ": expected name<TAB>pattern");
    }
    try {
      out.push_back({line.substr(0, tab), std::make_shared<const SmartsPattern>(line.substr(tab + 1))});
    } catch (const SmartsError &e) {
      invalid(origin + ": " + e.what());
    }
  }
  return out;
}

Json range_json(const RangeCriterion &r) {
  return Json{{"enabled", r.enabled},
              {"min", r.min},
              {"max", r.max},
              {"min_inclusive", r.min_inclusive},
              {"max_inclusive", r.max_inclusive}};
}

Json threshold_json(const ThresholdCriterion &t) {
  return Json{{"enabled", t.enabled}, {"op", op_text(t.op)}, {"value", t.value}};
}

}  // namespace

const std::vector<std::string> &filter_criteria() {
  static const std::vector<std::string> names = {
      "elements",       "isotopes",         "fragments", "functional_groups", "mw",
      "fsp3",           "n_phenyl_rings",   "n_aromatic_rings", "n_rings",     "formal_charge",
      "n_rotatable",    "tpsa",             "clogp",     "hbd"};
  return names;
}

void FilterConfig::validate() const {
  const std::pair<const char *, const RangeCriterion *> ranges[] = {{"mw", &mw}, {"tpsa", &tpsa}, {"clogp", &clogp}};
  for (const auto &[name, r] : ranges) {
    if (!r->enabled) continue;
    if (!std::isfinite(r->min) || !std::isfinite(r->max)) invalid(std::string(name) + ": bounds must be finite");
    if (!(r->min < r->max)) invalid(std::string(name) + ": min must be below max");
  }
  const std::pair<const char *, const ThresholdCriterion *> thresholds[] = {
      {"fsp3", &fsp3},       {"n_phenyl_rings", &n_phenyl_rings}, {"n_aromatic_rings", &n_aromatic_rings},
      {"n_rings", &n_rings}, {"formal_charge", &formal_charge},   {"n_rotatable", &n_rotatable},
      {"hbd", &hbd}};
  for (const auto &[name, t] : thresholds) {
    if (t->enabled && !std::isfinite(t->value)) invalid(std::string(name) + ": value must be finite");
  }
  for (const auto &p : forbidden) {
    if (p.name.empty() || !p.pattern) invalid("functional_groups: pattern without name or body");
  }
}

DescriptorOptions FilterConfig::descriptor_options() const {
  DescriptorOptions options;
  options.element_whitelist = element_whitelist;
  options.forbidden = forbidden;
  return options;
}

FilterConfig parse_filter_config(std::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::exception &e) {
    invalid(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) invalid("config must be a JSON object");
  for (const auto &item : root.items()) {
    const auto &names = filter_criteria();
    if (item.key() != "version" && std::find(names.begin(), names.end(), item.key()) == names.end()) {
      invalid("unknown key '" + item.key() + "'");
    }
  }
  FilterConfig cfg;

  if (const Json *s = section(root, "elements", {"enabled", "whitelist"})) {
    read_bool(*s, "enabled", cfg.elements, "elements");
    if (s->contains("whitelist")) {
      const Json &list = (*s)["whitelist"];
      if (!list.is_array()) invalid("elements.whitelist must be an array");
      cfg.element_whitelist.clear();
      for (const Json &e : list) {
        if (!e.is_string()) invalid("elements.whitelist entries must be strings");
        cfg.element_whitelist.push_back(e.get<std::string>());
      }
    }
  }
  read_flag(root, "isotopes", cfg.isotopes);
  read_flag(root, "fragments", cfg.fragments);
  if (const Json *s = section(root, "functional_groups", {"enabled", "patterns", "table"})) {
    read_bool(*s, "enabled", cfg.functional_groups, "functional_groups");
    if (s->contains("patterns") && s->contains("table")) {
      invalid("functional_groups: give either patterns or table, not both");
    }
    if (s->contains("patterns")) {
      const Json &list = (*s)["patterns"];
      if (!list.is_array()) invalid("functional_groups.patterns must be an array");
      cfg.forbidden.clear();
      for (const Json &p : list) {
        if (!p.is_object() || !p.contains("name") || !p.contains("smarts") || !p["name"].is_string() ||
            !p["smarts"].is_string()) {
          invalid("functional_groups.patterns entries need string name and smarts");
        }
        try {
          cfg.forbidden.push_back(
              {p["name"].get<std::string>(), std::make_shared<const SmartsPattern>(p["smarts"].get<std::string>())});
        } catch (const SmartsError &e) {
          invalid(std::string("functional_groups: ") + e.what());
        }
      }
    } else if (s->contains("table")) {
      if (!(*s)["table"].is_string()) invalid("functional_groups.table must be a string");
      const std::string table = (*s)["table"].get<std::string>();
      cfg.forbidden = patterns_from_table(load_data_file(table), table);
    }
  }
  read_range(root, "mw", cfg.mw);
  read_threshold(root, "fsp3", cfg.fsp3);
  read_threshold(root, "n_phenyl_rings", cfg.n_phenyl_rings);
  read_threshold(root, "n_aromatic_rings", cfg.n_aromatic_rings);
  read_threshold(root, "n_rings", cfg.n_rings);
  read_threshold(root, "formal_charge", cfg.formal_charge);
  read_threshold(root, "n_rotatable", cfg.n_rotatable);
  read_range(root, "tpsa", cfg.tpsa);
  read_range(root, "clogp", cfg.clogp);
  read_threshold(root, "hbd", cfg.hbd);
  cfg.validate();
  return cfg;
}

FilterConfig load_filter_config(const std::string &path_or_name) {
  if (path_or_name == kDefaultsName) return parse_filter_config(load_data_file(kDefaultsFile));
  std::ifstream in(path_or_name, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read config " + path_or_name);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_filter_config(buffer.str());
}

std::string filter_config_json(const FilterConfig &c) {
  Json patterns = Json::array();
  for (const auto &p : c.forbidden) patterns.push_back(Json{{"name", p.name}, {"smarts", p.pattern->text()}});
  const Json root{
      {"elements", Json{{"enabled", c.elements}, {"whitelist", c.element_whitelist}}},
      {"isotopes", Json{{"enabled", c.isotopes}}},
      {"fragments", Json{{"enabled", c.fragments}}},
      {"functional_groups", Json{{"enabled", c.functional_groups}, {"patterns", patterns}}},
      {"mw", range_json(c.mw)},
      {"fsp3", threshold_json(c.fsp3)},
      {"n_phenyl_rings", threshold_json(c.n_phenyl_rings)},
      {"n_aromatic_rings", threshold_json(c.n_aromatic_rings)},
      {"n_rings", threshold_json(c.n_rings)},
      {"formal_charge", threshold_json(c.formal_charge)},
      {"n_rotatable", threshold_json(c.n_rotatable)},
      {"tpsa", range_json(c.tpsa)},
      {"clogp", range_json(c.clogp)},
      {"hbd", threshold_json(c.hbd)},
  };
  return root.dump(2) + "\n";
}

FilterVerdict passes_filters(const DescriptorSet &ds, const FilterConfig &c) {
  FilterVerdict v;
  auto check = [&](bool enabled, bool ok, const char *name) {
    if (enabled && !ok) v.reasons.emplace_back(name);
  };
  auto threshold = [](const ThresholdCriterion &t, int x) { return compare<double>(t.op, x, t.value); };
  check(c.elements, !ds.element_violation, "elements");
  check(c.isotopes, !ds.has_isotope, "isotopes");
  check(c.fragments, !ds.multi_fragment, "fragments");
  check(c.functional_groups, ds.forbidden_groups.empty(), "functional_groups");
  check(c.mw.enabled, in_range(c.mw, ds.mw), "mw");
  // Without carbon fsp3 is 0/1.
  check(c.fsp3.enabled, ratio_passes(c.fsp3, ds.sp3_carbons, ds.carbons == 0 ? 1 : ds.carbons), "fsp3");
  check(c.n_phenyl_rings.enabled, threshold(c.n_phenyl_rings, ds.n_phenyl_rings), "n_phenyl_rings");
  check(c.n_aromatic_rings.enabled, threshold(c.n_aromatic_rings, ds.n_aromatic_rings), "n_aromatic_rings");
  check(c.n_rings.enabled, threshold(c.n_rings, ds.n_rings), "n_rings");
  check(c.formal_charge.enabled, threshold(c.formal_charge, ds.net_formal_charge), "formal_charge");
  check(c.n_rotatable.enabled, threshold(c.n_rotatable, ds.n_rotatable), "n_rotatable");
  check(c.tpsa.enabled, in_range(c.tpsa, ds.tpsa), "tpsa");
  check(c.clogp.enabled, in_range(c.clogp, ds.clogp), "clogp");
  check(c.hbd.enabled, threshold(c.hbd, ds.hbd), "hbd");
  v.pass = v.reasons.empty();
  return v;
}

}  // namespace nomenkit
