//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/descriptors.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>

#include "nomenkit/chem/element.h"
#include "nomenkit/data.h"
#include "nomenkit/error.h"

namespace nomenkit {
namespace {

constexpr std::string_view kRotatableSmarts =
    "[!$(*#*)&!D1&!$(C(F)(F)F)&!$(C(Cl)(Cl)Cl)&!$(C(Br)(Br)Br)&!$(C([CH3])([CH3])[CH3])&!$([CH3])"
    "&!$([CD3](=[N,O,S])-!@[#7,O,S!D1])&!$([#7,O,S!D1]-!@[CD3]=[N,O,S])&!$([CD3](=[N+])-!@[#7!D1])"
    "&!$([#7!D1]-!@[CD3]=[N+])]-,:;!@"
    "[!$(*#*)&!D1&!$(C(F)(F)F)&!$(C(Cl)(Cl)Cl)&!$(C(Br)(Br)Br)&!$(C([CH3])([CH3])[CH3])&!$([CH3])]";

// Non-comment lines of a bundled table, split on tabs.
std::vector<std::vector<std::string>> table_rows(std::string_view name) {
  const std::string text = load_data_file(name);
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

double to_double(const std::string &s, std::string_view table) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("InvalidDataTable", "bad number '" + s + "' in " + std::string(table));
  }
  return v;
}

int to_int(const std::string &s, std::string_view table) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("InvalidDataTable", "bad integer '" + s + "' in " + std::string(table));
  }
  return v;
}

const std::array<double, kMaxAtomicNumber + 1> &atomic_masses() {
  static const auto table = [] {
    std::array<double, kMaxAtomicNumber + 1> masses{};
    for (const auto &row : table_rows("atomic_masses.tsv")) {
      if (row.size() != 3) throw Error("InvalidDataTable", "atomic_masses.tsv: expected 3 columns");
      const int z = to_int(row[1], "atomic_masses.tsv");
      if (z < 1 || z > kMaxAtomicNumber) throw Error("InvalidDataTable", "atomic_masses.tsv: bad Z");
      masses[z] = to_double(row[2], "atomic_masses.tsv");
    }
    return masses;
  }();
  return table;
}

struct CrippenType {
  std::string type;
  SmartsPattern pattern;
  double logp;
};

const std::vector<CrippenType> &crippen_types() {
  static const auto table = [] {
    std::vector<CrippenType> types;
    for (const auto &row : table_rows("crippen_contributions.tsv")) {
      if (row.size() != 4) throw Error("InvalidDataTable", "crippen_contributions.tsv: expected 4 columns");
      if (row[0] == "type") continue;  // header
      types.push_back({row[0], SmartsPattern(row[1]), to_double(row[2], "crippen_contributions.tsv")});
    }
    return types;
  }();
  return table;
}

struct TpsaRule {
  int element;
  int charge;
  int hydrogens;
  int heavy;
  int single;
  int dbl;
  int triple;
  int aromatic;
  int ring3;  // -1 = either
  bool s_or_p;
  double value;
};

struct TpsaFallback {
  double base;
  double per_neighbour;
  double per_hydrogen;
};

struct TpsaTable {
  std::vector<TpsaRule> rules;
  std::array<std::optional<TpsaFallback>, kMaxAtomicNumber + 1> fallback;
};

const TpsaTable &tpsa_table() {
  static const auto table = [] {
    TpsaTable t;
    constexpr std::string_view kName = "tpsa_contributions.tsv";
    for (const auto &row : table_rows(kName)) {
      if (row[0] == "element") continue;
      if (row[0] == "fallback") {
        if (row.size() != 5) throw Error("InvalidDataTable", "tpsa fallback row needs 5 columns");
        const auto z = atomic_number_of(row[1]);
        if (!z) throw Error("InvalidDataTable", "tpsa fallback: unknown element " + row[1]);
        t.fallback[*z] = TpsaFallback{to_double(row[2], kName), to_double(row[3], kName),
                                      to_double(row[4], kName)};
        continue;
      }
      if (row.size() != 11) throw Error("InvalidDataTable", "tpsa rule needs 11 columns");
      const auto z = atomic_number_of(row[0]);
      if (!z) throw Error("InvalidDataTable", "tpsa: unknown element " + row[0]);
      TpsaRule r{*z,
                 to_int(row[1], kName),
                 to_int(row[2], kName),
                 to_int(row[3], kName),
                 to_int(row[4], kName),
                 to_int(row[5], kName),
                 to_int(row[6], kName),
                 to_int(row[7], kName),
                 row[8] == "*" ? -1 : to_int(row[8], kName),
                 row[9] == "SP",
                 to_double(row[10], kName)};
      t.rules.push_back(r);
    }
    return t;
  }();
  return table;
}

int hydrogens_on(const MolecularGraph &g, int a) {
  int h = g.atom(a).total_h();
  for (int b : g.bonds_of(a)) {
    if (g.atom(g.bond(b).other(a)).atomic_number == 1) ++h;
  }
  return h;
}

void warn_untyped(int atomic_number) {
  static std::mutex mutex;
  static std::set<int> reported;
  std::lock_guard lock(mutex);
  if (reported.insert(atomic_number).second) {
    std::cerr << "warning: no cLogP atom type for element " << element_symbol(atomic_number)
              << "; using contribution 0\n";
  }
}

}  // namespace

const std::vector<SubstructurePattern> &default_forbidden_patterns() {
  static const auto patterns = [] {
    std::vector<SubstructurePattern> out;
    for (const auto &row : table_rows("forbidden_patterns.tsv")) {
      if (row.size() != 2) throw Error("InvalidDataTable", "forbidden_patterns.tsv: expected 2 columns");
      out.push_back({row[0], std::make_shared<const SmartsPattern>(row[1])});
    }
    return out;
  }();
  return patterns;
}

const std::vector<std::string> &default_element_whitelist() {
  static const std::vector<std::string> whitelist = {"H", "C", "N", "O", "S", "F", "Cl", "Br"};
  return whitelist;
}

double molecular_weight(const MolecularGraph &graph) {
  const auto &masses = atomic_masses();
  double mw = 0.0;
  for (const Atom &a : graph.atoms()) {
    if (a.atomic_number > 0) mw += masses[a.atomic_number];
    mw += a.total_h() * masses[1];
  }
  return mw;
}

double fraction_sp3(const MolecularGraph &graph) {
  int carbons = 0;
  int sp3 = 0;
  for (const Atom &a : graph.atoms()) {
    if (a.atomic_number != 6) continue;
    ++carbons;
    if (a.hybridization == Hybridization::kSp3) ++sp3;
  }
  return carbons == 0 ? 0.0 : static_cast<double>(sp3) / carbons;
}

RingCounts ring_counts(const MolecularGraph &graph) {
  RingCounts counts;
  counts.rings = static_cast<int>(graph.symmetrized_rings().size());
  for (std::size_t r = 0; r < graph.symmetrized_rings().size(); ++r) {
    if (!graph.symmetrized_ring_aromatic()[r]) continue;
    ++counts.aromatic;
    const auto &ring = graph.symmetrized_rings()[r];
    if (ring.size() == 6 &&
        std::all_of(ring.begin(), ring.end(), [&](int a) { return graph.atom(a).atomic_number == 6; })) {
      ++counts.phenyl;
    }
  }
  return counts;
}

int rotatable_bonds(const MolecularGraph &graph) {
  // Two atoms and one bond, so each bond is tested in place; equivalent to
  // counting the distinct bonds of all matches.
  static const SmartsPattern pattern(kRotatableSmarts);
  std::vector<signed char> ok[2] = {std::vector<signed char>(graph.atom_count(), -1),
                                    std::vector<signed char>(graph.atom_count(), -1)};
  auto accepts = [&](int p, int a) {
    if (ok[p][a] < 0) ok[p][a] = pattern.atom_accepts(p, graph, a) ? 1 : 0;
    return ok[p][a] == 1;
  };
  int count = 0;
  for (int b = 0; b < graph.bond_count(); ++b) {
    const Bond &bond = graph.bond(b);
    if (!pattern.bond_accepts(0, graph, b)) continue;
    if ((accepts(0, bond.begin) && accepts(1, bond.end)) || (accepts(0, bond.end) && accepts(1, bond.begin))) ++count;
  }
  return count;
}

int hydrogen_bond_donors(const MolecularGraph &graph) {
  int count = 0;
  for (int a = 0; a < graph.atom_count(); ++a) {
    const int z = graph.atom(a).atomic_number;
    if (z == 7 || z == 8) count += hydrogens_on(graph, a);
  }
  return count;
}

double tpsa(const MolecularGraph &graph, bool include_s_and_p) {
  const TpsaTable &table = tpsa_table();
  double total = 0.0;
  for (int a = 0; a < graph.atom_count(); ++a) {
    const Atom &atom = graph.atom(a);
    const int z = atom.atomic_number;
    const bool s_or_p = z == 15 || z == 16;
    if (z != 7 && z != 8 && !(include_s_and_p && s_or_p)) continue;
    int heavy = 0, single = 0, dbl = 0, triple = 0, aromatic = 0;
    for (int b : graph.bonds_of(a)) {
      const Bond &bond = graph.bond(b);
      if (graph.atom(bond.other(a)).atomic_number == 1) continue;
      ++heavy;
      switch (bond.order) {
      case BondOrder::kSingle:
        ++single;
        break;
      case BondOrder::kDouble:
        ++dbl;
        break;
      case BondOrder::kTriple:
        ++triple;
        break;
      case BondOrder::kAromatic:
        ++aromatic;
        break;
      }
    }
    const int h = hydrogens_on(graph, a);
    const int in3 = graph.in_ring_of_size(a, 3) ? 1 : 0;
    const auto rule = std::find_if(table.rules.begin(), table.rules.end(), [&](const TpsaRule &r) {
      return r.element == z && r.charge == atom.formal_charge && r.hydrogens == h && r.heavy == heavy &&
             r.single == single && r.dbl == dbl && r.triple == triple && r.aromatic == aromatic &&
             (r.ring3 < 0 || r.ring3 == in3);
    });
    if (rule != table.rules.end()) {
      total += rule->value;
    } else if (const auto &fb = table.fallback[z]) {
      total += std::max(0.0, fb->base + fb->per_neighbour * heavy + fb->per_hydrogen * h);
    }
  }
  return total;
}

double clogp(const MolecularGraph &graph, int *untyped) {
  const auto &types = crippen_types();
  const MolecularGraph full = with_explicit_hydrogens(graph);
  double total = 0.0;
  int missing = 0;
  for (int a = 0; a < full.atom_count(); ++a) {
    bool typed = false;
    for (const CrippenType &t : types) {
      if (t.pattern.matches_at(full, a)) {
        total += t.logp;
        typed = true;
        break;
      }
    }
    if (!typed) {
      ++missing;
      warn_untyped(full.atom(a).atomic_number);
    }
  }
  if (untyped != nullptr) *untyped = missing;
  return total;
}

bool match_pattern(const MolecularGraph &graph, const SubstructurePattern &pattern) {
  return pattern.pattern->matches(graph);
}

DescriptorSet compute_descriptors(const MolecularGraph &graph, const DescriptorOptions &options) {
  DescriptorSet d;
  d.mw = molecular_weight(graph);
  std::set<int> elements;
  for (const Atom &a : graph.atoms()) {
    elements.insert(a.atomic_number);
    if (a.total_h() > 0) elements.insert(1);
    if (a.isotope) d.has_isotope = true;
    d.net_formal_charge += a.formal_charge;
    if (a.atomic_number != 1) ++d.heavy_atoms;
    if (a.atomic_number == 6) {
      ++d.carbons;
      if (a.hybridization == Hybridization::kSp3) ++d.sp3_carbons;
    }
  }
  d.fsp3 = d.carbons == 0 ? 0.0 : static_cast<double>(d.sp3_carbons) / d.carbons;
  for (int z : elements) {
    const std::string symbol(element_symbol(z));
    d.elements.push_back(symbol);
    if (std::find(options.element_whitelist.begin(), options.element_whitelist.end(), symbol) ==
        options.element_whitelist.end()) {
      d.element_violation = true;
    }
  }
  const RingCounts rings = ring_counts(graph);
  d.n_rings = rings.rings;
  d.n_aromatic_rings = rings.aromatic;
  d.n_phenyl_rings = rings.phenyl;
  d.n_rotatable = rotatable_bonds(graph);
  d.hbd = hydrogen_bond_donors(graph);
  d.tpsa = tpsa(graph, options.tpsa_include_s_and_p);
  d.clogp = clogp(graph, &d.untyped_atoms);
  for (const SubstructurePattern &p : options.forbidden) {
    if (match_pattern(graph, p)) d.forbidden_groups.push_back(p.name);
  }
  d.multi_fragment = graph.fragment_count() > 1;
  return d;
}

}  // namespace nomenkit
