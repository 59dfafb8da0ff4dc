//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/metrics.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <json.hpp>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "nomenkit/error.h"
#include "nomenkit/io.h"

namespace nomenkit {
namespace {

using Json = nlohmann::ordered_json;

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_delimiter(char c) {
  switch (c) {
    case '-':
    case ',':
    case '.':
    case '(':
    case ')':
    case '[':
    case ']':
    case '\'':
      return true;
    default:
      return false;
  }
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Pattern bit masks per 64-row block; ASCII in a flat table.
class PatternMasks {
public:
  PatternMasks(std::u32string_view pattern, std::size_t words) : words_(words), ascii_(128 * words, 0) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const std::uint64_t bit = std::uint64_t{1} << (i % 64);
      const char32_t c = pattern[i];
      if (c < 128) {
        ascii_[c * words_ + i / 64] |= bit;
      } else {
        auto &masks = other_[c];
        masks.resize(words_, 0);
        masks[i / 64] |= bit;
      }
    }
  }
  // Pointer to `words` masks, or nullptr when the character is absent.
  const std::uint64_t *get(char32_t c) const {
    if (c < 128) return &ascii_[c * words_];
    const auto it = other_.find(c);
    return it == other_.end() ? nullptr : it->second.data();
  }

private:
  std::size_t words_;
  std::vector<std::uint64_t> ascii_;
  std::unordered_map<char32_t, std::vector<std::uint64_t>> other_;
};

double mean_of(std::vector<double> values) {
  // Summing in sorted order makes the result independent of row order.
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (const double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

std::string shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

bool exact_match(std::string_view prediction, std::string_view reference) {
  return trim(prediction) == trim(reference);
}

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4, cp = b0 & 0x07, min = 0x10000;
    }
    bool ok = len > 0 && i + len <= text.size();
    for (int k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      ok = (b & 0xC0) == 0x80;
      cp = (cp << 6) | (b & 0x3F);
    }
    ok = ok && cp >= min && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
    if (ok) {
      out.push_back(cp);
      i += len;
    } else {
      out.push_back(0xFFFD);
      ++i;
    }
  }
  return out;
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  const std::size_t m = a.size();
  if (m == 0) return b.size();
  const std::size_t words = (m + 63) / 64;
  const PatternMasks masks(a, words);
  const std::uint64_t last = std::uint64_t{1} << ((m - 1) % 64);
  std::vector<std::uint64_t> vp(words, ~std::uint64_t{0});
  std::vector<std::uint64_t> vn(words, 0);
  std::size_t score = m;
  for (const char32_t c : b) {
    const std::uint64_t *eq = masks.get(c);
    // Row 0 grows by one per text character.
    std::uint64_t hp_carry = 1;
    std::uint64_t hn_carry = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t pm = eq ? eq[w] : 0;
      const std::uint64_t x = pm | hn_carry;
      const std::uint64_t d0 = (((x & vp[w]) + vp[w]) ^ vp[w]) | x | vn[w];
      std::uint64_t hp = vn[w] | ~(d0 | vp[w]);
      std::uint64_t hn = d0 & vp[w];
      const std::uint64_t hp_in = hp_carry;
      const std::uint64_t hn_in = hn_carry;
      if (w + 1 < words) {
        hp_carry = hp >> 63;
        hn_carry = hn >> 63;
      } else {
        hp_carry = (hp & last) ? 1 : 0;
        hn_carry = (hn & last) ? 1 : 0;
      }
      hp = (hp << 1) | hp_in;
      hn = (hn << 1) | hn_in;
      vp[w] = hn | ~(d0 | hp);
      vn[w] = hp & d0;
    }
    score += hp_carry;
    score -= hn_carry;
  }
  return score;
}

double normalized_edit_similarity(std::string_view prediction, std::string_view reference) {
  const std::u32string p = decode_utf8(trim(prediction));
  const std::u32string r = decode_utf8(trim(reference));
  const std::size_t longest = std::max(p.size(), r.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(p, r)) / static_cast<double>(longest);
}

std::vector<std::string> chunk_iupac(std::string_view name) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (const char c : name) {
    if (is_space(c)) {
      flush();
    } else if (is_delimiter(c)) {
      flush();
      out.emplace_back(1, c);
    } else {
      if (!current.empty() && is_digit(current.back()) != is_digit(c)) flush();
      current.push_back(c);
    }
  }
  flush();
  return out;
}

double bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
            const BleuOptions &options) {
  const std::size_t c = candidate.size();
  const std::size_t r = reference.size();
  if (c == 0) return 0.0;
  const std::size_t orders = std::min<std::size_t>(4, c);
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= orders; ++n) {
    std::map<std::span<const std::string>, int,
             decltype([](std::span<const std::string> x, std::span<const std::string> y) {
               return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
             })>
        ref_counts;
    for (std::size_t i = 0; i + n <= r; ++i) ++ref_counts[reference.subspan(i, n)];
    std::size_t matches = 0;
    const std::size_t total = c - n + 1;
    for (std::size_t i = 0; i < total; ++i) {
      const auto it = ref_counts.find(candidate.subspan(i, n));
      if (it != ref_counts.end() && it->second > 0) {
        --it->second;
        ++matches;
      }
    }
    double precision = static_cast<double>(matches) / static_cast<double>(total);
    if (matches == 0) {
      if (n == 1 || !options.smoothing) return 0.0;
      precision = 1.0 / (2.0 * static_cast<double>(c));
    }
    log_sum += std::log(precision);
  }
  const double brevity = c > r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  return std::min(1.0, brevity * std::exp(log_sum / static_cast<double>(orders)));
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path &path) {
  LineReader reader(path);
  std::vector<PredictionRecord> out;
  std::unordered_set<std::string> seen;
  std::string line;
  while (reader.next(line)) {
    const std::string where = path.string() + ":" + std::to_string(reader.line_number());
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw Error("MalformedRow", where + ": expected id<TAB>prediction<TAB>reference");
    }
    PredictionRecord rec{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)};
    if (rec.id.empty()) throw Error("MalformedRow", where + ": empty id");
    if (trim(rec.reference).empty()) throw Error("MalformedRow", where + ": empty reference");
    if (!seen.insert(rec.id).second) throw Error("DuplicateId", where + ": id '" + rec.id + "' repeats");
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw Error("EmptyInput", path.string() + ": no predictions");
  return out;
}

ExampleScore score_example(const PredictionRecord &record, const BleuOptions &options) {
  ExampleScore s;
  s.id = record.id;
  s.exact = exact_match(record.prediction, record.reference);
  s.edit_similarity = normalized_edit_similarity(record.prediction, record.reference);
  const auto p = chunk_iupac(record.prediction);
  const auto r = chunk_iupac(record.reference);
  s.bleu = bleu(p, r, options);
  return s;
}

EvalReport evaluate(const std::vector<PredictionRecord> &records, const EvalOptions &options) {
  EvalReport report;
  report.label = options.label;
  report.bleu_smoothing = options.bleu.smoothing;
  report.n = records.size();
  report.rows.resize(records.size());
  const std::size_t threads = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(1, records.size()));
  auto work = [&](std::size_t t) {
    for (std::size_t i = t; i < records.size(); i += threads) report.rows[i] = score_example(records[i], options.bleu);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto &th : pool) th.join();

  std::vector<double> edit, bleus;
  edit.reserve(report.n);
  bleus.reserve(report.n);
  for (const auto &row : report.rows) {
    report.exact_count += row.exact ? 1 : 0;
    edit.push_back(row.edit_similarity);
    bleus.push_back(row.bleu);
  }
  if (report.n > 0) {
    report.pct_exact = 100.0 * static_cast<double>(report.exact_count) / static_cast<double>(report.n);
  }
  report.mean_edit_similarity = mean_of(std::move(edit));
  report.mean_bleu = mean_of(std::move(bleus));
  return report;
}

std::string EvalReport::summary_json() const {
  const Json j{{"label", label},
               {"n", n},
               {"exact_count", exact_count},
               {"pct_exact", pct_exact},
               {"mean_edit_similarity", mean_edit_similarity},
               {"mean_bleu", mean_bleu},
               {"bleu_smoothing", bleu_smoothing},
               {"display",
                Json{{"% Exact Matches", round_half_up(pct_exact, 2)},
                     {"Mean Normalized Edit Distance", round_half_up(mean_edit_similarity, 2)},
                     {"Mean BLEU Score", round_half_up(mean_bleu, 2)}}}};
  return j.dump(2) + "\n";
}

std::string EvalReport::table_tsv() const {
  std::string out = "id\texact\tedit_similarity\tbleu\tedit_similarity_2dp\tbleu_2dp\n";
  for (const auto &row : rows) {
    out += row.id;
    out += row.exact ? "\t1\t" : "\t0\t";
    out += shortest(row.edit_similarity) + '\t' + shortest(row.bleu) + '\t';
    out += round_half_up(row.edit_similarity, 2) + '\t' + round_half_up(row.bleu, 2) + '\n';
  }
  return out;
}

EvalOutputs eval_outputs(const std::filesystem::path &out) {
  EvalOutputs o;
  o.summary = out;
  o.table = out;
  o.table += ".examples.tsv";
  return o;
}

EvalReport evaluate_file(const std::filesystem::path &predictions, const std::filesystem::path &out,
                         const EvalOptions &options) {
  EvalOptions opts = options;
  if (opts.label.empty()) opts.label = predictions.filename().string();
  const EvalReport report = evaluate(load_predictions(predictions), opts);
  const EvalOutputs o = eval_outputs(out);
  write_text_file(o.table, report.table_tsv());
  write_text_file(o.summary, report.summary_json());
  return report;
}

EvalReport read_summary(const std::filesystem::path &summary) {
  try {
    const Json j = Json::parse(read_text_file(summary));
    EvalReport r;
    r.label = j.at("label").get<std::string>();
    r.n = j.at("n").get<std::size_t>();
    r.exact_count = j.at("exact_count").get<std::size_t>();
    r.pct_exact = j.at("pct_exact").get<double>();
    r.mean_edit_similarity = j.at("mean_edit_similarity").get<double>();
    r.mean_bleu = j.at("mean_bleu").get<double>();
    r.bleu_smoothing = j.at("bleu_smoothing").get<bool>();
    return r;
  } catch (const Json::exception &e) {
    throw Error("MalformedReport", summary.string() + ": " + e.what());
  }
}

std::string round_half_up(double value, int places) {
  if (!std::isfinite(value)) return shortest(value);
  char buf[400];
  const auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(value), std::chars_format::fixed);
  std::string text(buf, res.ptr);
  const auto dot = text.find('.');
  std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  const bool up = frac.size() > static_cast<std::size_t>(places) && frac[places] >= '5';
  frac.resize(places, '0');
  std::string digits = whole + frac;
  if (up) {
    std::size_t i = digits.size();
    while (i > 0 && digits[i - 1] == '9') digits[--i] = '0';
    if (i == 0) {
      digits.insert(digits.begin(), '1');
    } else {
      ++digits[i - 1];
    }
  }
  std::string out = digits.substr(0, digits.size() - places);
  if (places > 0) out += "." + digits.substr(digits.size() - places);
  const bool zero = std::all_of(digits.begin(), digits.end(), [](char c) { return c == '0'; });
  return (value < 0 && !zero ? "-" : "") + out;
}

}  // namespace nomenkit
