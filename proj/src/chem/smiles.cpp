//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/chem/smiles.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nomenkit/chem/element.h"

namespace nomenkit {

std::string_view to_string(SmilesErrorKind kind) {
  switch (kind) {
  case SmilesErrorKind::kEmptyInput:
    return "EmptyInput";
  case SmilesErrorKind::kUnclosedRing:
    return "UnclosedRing";
  case SmilesErrorKind::kUnbalancedParenthesis:
    return "UnbalancedParenthesis";
  case SmilesErrorKind::kUnknownElement:
    return "UnknownElement";
  case SmilesErrorKind::kValenceViolation:
    return "ValenceViolation";
  case SmilesErrorKind::kSyntax:
    return "Syntax";
  }
  return "Unknown";
}

SmilesError::SmilesError(SmilesErrorKind kind, int offset, const std::string &detail)
    : std::runtime_error(std::string(to_string(kind)) + " at offset " + std::to_string(offset) +
                         (detail.empty() ? "" : ": " + detail)),
      kind_(kind), offset_(offset) {}

namespace {

struct BondSpec {
  int order = 1;
  bool aromatic = false;
  BondDirection direction = BondDirection::kNone;
};

struct RawBond {
  int begin;
  int end;
  BondSpec spec;
  // Implicit bond between two lower-case atoms, or an explicit ':'.
  bool written_aromatic;
};

struct OpenRing {
  int atom;
  int offset;
  std::optional<BondSpec> bond;
};

[[noreturn]] void fail(SmilesErrorKind kind, std::size_t offset, const std::string &detail = {}) {
  throw SmilesError(kind, static_cast<int>(offset), detail);
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  MolecularGraph run() {
    if (text_.empty()) fail(SmilesErrorKind::kEmptyInput, 0, "empty SMILES");
    for (std::size_t i = 0; i < text_.size(); ++i) {
      const auto c = static_cast<unsigned char>(text_[i]);
      if (c > 0x7e || c < 0x21) fail(SmilesErrorKind::kSyntax, i, "non-printable or non-ASCII character");
    }
    parse();
    fold_hydrogens();
    kekulize();
    assign_hydrogens();
    return build();
  }

private:
  void parse() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      switch (c) {
      case '(':
        if (prev_ < 0 || pending_bond_) fail(SmilesErrorKind::kSyntax, pos_, "branch without atom");
        branches_.push_back({prev_, pos_});
        ++pos_;
        break;
      case ')':
        if (branches_.empty()) {
          fail(SmilesErrorKind::kUnbalancedParenthesis, pos_, "unmatched ')'");
        }
        if (pending_bond_ || prev_ < 0) fail(SmilesErrorKind::kSyntax, pos_, "empty branch");
        prev_ = branches_.back().first;
        branches_.pop_back();
        ++pos_;
        break;
      case '.':
        if (pending_bond_) fail(SmilesErrorKind::kSyntax, pos_, "bond before '.'");
        prev_ = -1;
        ++pos_;
        break;
      case '-':
      case '=':
      case '#':
      case '$':
      case ':':
      case '/':
      case '\\':
        if (prev_ < 0 || pending_bond_) fail(SmilesErrorKind::kSyntax, pos_, "misplaced bond");
        pending_bond_ = bond_symbol(c);
        pending_bond_offset_ = pos_;
        ++pos_;
        break;
      case '%':
      case '0':
      case '1':
      case '2':
      case '3':
      case '4':
      case '5':
      case '6':
      case '7':
      case '8':
      case '9':
        ring_closure();
        break;
      case '[':
        add_atom(bracket_atom());
        break;
      default:
        add_atom(organic_atom());
        break;
      }
    }
    if (pending_bond_) fail(SmilesErrorKind::kSyntax, pending_bond_offset_, "dangling bond");
    if (!branches_.empty()) {
      fail(SmilesErrorKind::kUnbalancedParenthesis, branches_.back().second, "unclosed '('");
    }
    if (!open_rings_.empty()) {
      const auto first = std::min_element(
          open_rings_.begin(), open_rings_.end(),
          [](const auto &a, const auto &b) { return a.second.offset < b.second.offset; });
      fail(SmilesErrorKind::kUnclosedRing, static_cast<std::size_t>(first->second.offset),
           "ring bond " + std::to_string(first->first) + " never closed");
    }
  }

  BondSpec bond_symbol(char c) {
    BondSpec spec;
    switch (c) {
    case '=':
      spec.order = 2;
      break;
    case '#':
      spec.order = 3;
      break;
    case '$':
      fail(SmilesErrorKind::kSyntax, pos_, "quadruple bonds are not supported");
    case ':':
      spec.aromatic = true;
      break;
    case '/':
      spec.direction = BondDirection::kUp;
      break;
    case '\\':
      spec.direction = BondDirection::kDown;
      break;
    default:
      break;
    }
    return spec;
  }

  void add_bond(int a, int b, std::optional<BondSpec> spec, std::size_t offset) {
    if (a == b) fail(SmilesErrorKind::kSyntax, offset, "atom bonded to itself");
    for (const RawBond &rb : bonds_) {
      if ((rb.begin == a && rb.end == b) || (rb.begin == b && rb.end == a)) {
        fail(SmilesErrorKind::kSyntax, offset, "duplicate bond");
      }
    }
    const bool both_aromatic = atoms_[a].written_aromatic && atoms_[b].written_aromatic;
    RawBond rb{a, b, spec.value_or(BondSpec{}), false};
    if (!spec) {
      rb.written_aromatic = both_aromatic;
      rb.spec.aromatic = both_aromatic;
    } else if (spec->aromatic) {
      rb.written_aromatic = true;
    } else if (spec->order == 1 && spec->direction != BondDirection::kNone && both_aromatic) {
      // Directional bonds between aromatic atoms default like implicit ones.
      rb.written_aromatic = true;
      rb.spec.aromatic = true;
    }
    bonds_.push_back(rb);
  }

  void add_atom(Atom atom) {
    const int idx = static_cast<int>(atoms_.size());
    atoms_.push_back(std::move(atom));
    if (prev_ >= 0) {
      add_bond(prev_, idx, pending_bond_, pending_bond_ ? pending_bond_offset_ : pos_);
    }
    pending_bond_.reset();
    prev_ = idx;
  }

  void ring_closure() {
    const std::size_t start = pos_;
    if (prev_ < 0) fail(SmilesErrorKind::kSyntax, pos_, "ring bond without atom");
    int number = 0;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
        fail(SmilesErrorKind::kSyntax, pos_, "'%' must be followed by two digits");
      }
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = text_[pos_] - '0';
      ++pos_;
    }
    auto it = open_rings_.find(number);
    if (it == open_rings_.end()) {
      open_rings_.emplace(number, OpenRing{prev_, static_cast<int>(start), pending_bond_});
      pending_bond_.reset();
      return;
    }
    OpenRing open = it->second;
    open_rings_.erase(it);
    std::optional<BondSpec> spec = open.bond;
    if (pending_bond_) {
      if (spec && (spec->order != pending_bond_->order || spec->aromatic != pending_bond_->aromatic)) {
        fail(SmilesErrorKind::kSyntax, start, "conflicting ring bond orders");
      }
      if (!spec || spec->direction == BondDirection::kNone) spec = pending_bond_;
    }
    pending_bond_.reset();
    add_bond(open.atom, prev_, spec, start);
  }

  Atom organic_atom() {
    Atom atom;
    atom.source_offset = static_cast<int>(pos_);
    const char c = text_[pos_];
    const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    std::string symbol;
    switch (c) {
    case 'C':
      symbol = next == 'l' ? "Cl" : "C";
      break;
    case 'B':
      symbol = next == 'r' ? "Br" : "B";
      break;
    case 'N':
    case 'O':
    case 'P':
    case 'S':
    case 'F':
    case 'I':
      symbol = std::string(1, c);
      break;
    case 'b':
    case 'c':
    case 'n':
    case 'o':
    case 'p':
    case 's':
      symbol = std::string(1, static_cast<char>(std::toupper(c)));
      atom.written_aromatic = true;
      break;
    case '*':
      symbol = "*";
      break;
    default:
      if (std::isalpha(static_cast<unsigned char>(c))) {
        fail(SmilesErrorKind::kUnknownElement, pos_,
             std::string("'") + c + "' is not an organic-subset element");
      }
      fail(SmilesErrorKind::kSyntax, pos_, std::string("unexpected character '") + c + "'");
    }
    atom.atomic_number = *atomic_number_of(symbol);
    pos_ += symbol.size() == 2 ? 2 : 1;
    return atom;
  }

  int read_int() {
    int value = 0;
    bool any = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 100000) fail(SmilesErrorKind::kSyntax, pos_, "number too large");
      ++pos_;
      any = true;
    }
    return any ? value : -1;
  }

  Atom bracket_atom() {
    const std::size_t open = pos_;
    Atom atom;
    atom.bracket = true;
    atom.source_offset = static_cast<int>(open);
    ++pos_;
    const auto close = text_.find(']', pos_);
    if (close == std::string_view::npos) fail(SmilesErrorKind::kSyntax, open, "unclosed '['");
    const std::string_view body = text_.substr(pos_, close - pos_);
    if (body.empty()) fail(SmilesErrorKind::kSyntax, open, "empty bracket atom");

    if (const int iso = read_int(); iso >= 0) atom.isotope = iso;

    // Element symbol.
    if (pos_ >= close) fail(SmilesErrorKind::kSyntax, pos_, "missing element symbol");
    const char c = text_[pos_];
    if (c == '*') {
      atom.atomic_number = 0;
      ++pos_;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      static constexpr std::string_view kAromatic2[] = {"se", "as", "te"};
      std::string symbol;
      for (std::string_view two : kAromatic2) {
        if (text_.substr(pos_, 2) == two) symbol = std::string(two);
      }
      if (symbol.empty()) {
        if (std::string_view("bcnops").find(c) == std::string_view::npos) {
          fail(SmilesErrorKind::kUnknownElement, pos_,
               std::string("'") + c + "' is not an aromatic element");
        }
        symbol = std::string(1, c);
      }
      pos_ += symbol.size();
      symbol[0] = static_cast<char>(std::toupper(symbol[0]));
      atom.atomic_number = *atomic_number_of(symbol);
      atom.written_aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::optional<int> z;
      if (pos_ + 1 < close && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        z = atomic_number_of(text_.substr(pos_, 2));
        if (z) pos_ += 2;
      }
      if (!z) {
        z = atomic_number_of(text_.substr(pos_, 1));
        if (!z) {
          fail(SmilesErrorKind::kUnknownElement, pos_, "unknown element symbol");
        }
        ++pos_;
      }
      atom.atomic_number = *z;
    } else {
      fail(SmilesErrorKind::kSyntax, pos_, "missing element symbol");
    }

    // Chirality.
    if (pos_ < close && text_[pos_] == '@') {
      ++pos_;
      atom.chirality = Chirality::kCounterClockwise;
      if (pos_ < close && text_[pos_] == '@') {
        atom.chirality = Chirality::kClockwise;
        ++pos_;
      } else if (pos_ + 1 < close && std::isupper(static_cast<unsigned char>(text_[pos_])) &&
                 std::isupper(static_cast<unsigned char>(text_[pos_ + 1]))) {
        atom.chirality = Chirality::kOther;
        pos_ += 2;
        read_int();
      }
    }

    // Hydrogen count.
    if (pos_ < close && text_[pos_] == 'H') {
      ++pos_;
      const int n = read_int();
      atom.explicit_h = n < 0 ? 1 : n;
    }

    // Charge.
    if (pos_ < close && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const char sign = text_[pos_];
      const int unit = sign == '+' ? 1 : -1;
      ++pos_;
      const int n = read_int();
      if (n >= 0) {
        atom.formal_charge = unit * n;
      } else {
        int count = 1;
        while (pos_ < close && text_[pos_] == sign) {
          ++count;
          ++pos_;
        }
        atom.formal_charge = unit * count;
      }
    }

    // Atom class.
    if (pos_ < close && text_[pos_] == ':') {
      ++pos_;
      if (read_int() < 0) fail(SmilesErrorKind::kSyntax, pos_, "atom class needs a number");
    }
    if (pos_ != close) fail(SmilesErrorKind::kSyntax, pos_, "unexpected character in bracket atom");
    pos_ = close + 1;
    return atom;
  }

  // Plain hydrogens written as atoms ([H]) become hydrogen counts.
  void fold_hydrogens() {
    std::vector<int> degree(atoms_.size(), 0);
    for (const RawBond &b : bonds_) {
      ++degree[b.begin];
      ++degree[b.end];
    }
    std::vector<bool> remove(atoms_.size(), false);
    for (const RawBond &b : bonds_) {
      for (const auto &[h, heavy] : {std::pair{b.begin, b.end}, std::pair{b.end, b.begin}}) {
        const Atom &a = atoms_[h];
        if (a.atomic_number == 1 && !a.isotope && a.formal_charge == 0 && a.explicit_h == 0 &&
            degree[h] == 1 && atoms_[heavy].atomic_number != 1 && b.spec.order == 1 &&
            !b.spec.aromatic) {
          remove[h] = true;
        }
      }
    }
    if (std::none_of(remove.begin(), remove.end(), [](bool r) { return r; })) return;

    std::vector<int> remap(atoms_.size(), -1);
    std::vector<Atom> kept;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!remove[i]) {
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(atoms_[i]);
      }
    }
    std::vector<RawBond> kept_bonds;
    for (const RawBond &b : bonds_) {
      if (remove[b.begin]) {
        ++kept[remap[b.end]].explicit_h;
      } else if (remove[b.end]) {
        ++kept[remap[b.begin]].explicit_h;
      } else {
        RawBond nb = b;
        nb.begin = remap[b.begin];
        nb.end = remap[b.end];
        kept_bonds.push_back(nb);
      }
    }
    atoms_ = std::move(kept);
    bonds_ = std::move(kept_bonds);
  }

  int written_valence(int atom) const {
    int sum = 0;
    for (const RawBond &b : bonds_) {
      if (b.begin == atom || b.end == atom) sum += b.written_aromatic ? 1 : b.spec.order;
    }
    return sum;
  }

  std::vector<bool> cyclic_bonds() const {
    // Bridge detection: a bond is cyclic iff it is not a bridge.
    const int n = static_cast<int>(atoms_.size());
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (int i = 0; i < static_cast<int>(bonds_.size()); ++i) {
      adj[bonds_[i].begin].push_back({bonds_[i].end, i});
      adj[bonds_[i].end].push_back({bonds_[i].begin, i});
    }
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<bool> cyclic(bonds_.size(), true);
    int timer = 0;
    struct Frame {
      int atom, parent_bond;
      std::size_t next;
    };
    for (int root = 0; root < n; ++root) {
      if (disc[root] >= 0) continue;
      std::vector<Frame> stack{{root, -1, 0}};
      disc[root] = low[root] = timer++;
      while (!stack.empty()) {
        Frame &f = stack.back();
        if (f.next < adj[f.atom].size()) {
          const auto [to, bi] = adj[f.atom][f.next++];
          if (bi == f.parent_bond) continue;
          if (disc[to] >= 0) {
            low[f.atom] = std::min(low[f.atom], disc[to]);
          } else {
            disc[to] = low[to] = timer++;
            stack.push_back({to, bi, 0});
          }
        } else {
          const Frame done = f;
          stack.pop_back();
          if (!stack.empty()) {
            Frame &parent = stack.back();
            low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
            if (low[done.atom] > disc[parent.atom]) cyclic[done.parent_bond] = false;
          }
        }
      }
    }
    return cyclic;
  }

  // Assigns alternating orders to bonds written as aromatic.
  void kekulize() {
    if (std::none_of(bonds_.begin(), bonds_.end(),
                     [](const RawBond &b) { return b.written_aromatic; }) &&
        std::none_of(atoms_.begin(), atoms_.end(),
                     [](const Atom &a) { return a.written_aromatic; })) {
      return;
    }
    const std::vector<bool> cyclic = cyclic_bonds();
    for (std::size_t i = 0; i < bonds_.size(); ++i) {
      if (bonds_[i].written_aromatic && !cyclic[i] && !bonds_[i].spec.aromatic) {
        bonds_[i].written_aromatic = false;
      } else if (bonds_[i].written_aromatic && !cyclic[i]) {
        // An explicit ':' outside a ring is treated as single.
        bonds_[i].written_aromatic = false;
        bonds_[i].spec.aromatic = false;
        bonds_[i].spec.order = 1;
      }
      if (!bonds_[i].written_aromatic) bonds_[i].spec.aromatic = false;
    }

    const int n = static_cast<int>(atoms_.size());
    std::vector<bool> needs(n, false);
    for (int a = 0; a < n; ++a) {
      const Atom &atom = atoms_[a];
      if (!atom.written_aromatic) continue;
      const int h = atom.bracket ? atom.explicit_h : 0;
      const int used = written_valence(a) + h;
      const auto valences = allowed_valences(atom.atomic_number, atom.formal_charge);
      const auto it = std::find_if(valences.begin(), valences.end(), [&](int v) { return v >= used; });
      if (it != valences.end() && *it - used >= 1) needs[a] = true;
    }

    std::vector<std::vector<int>> options(n);
    for (int i = 0; i < static_cast<int>(bonds_.size()); ++i) {
      const RawBond &b = bonds_[i];
      if (b.written_aromatic && needs[b.begin] && needs[b.end]) {
        options[b.begin].push_back(i);
        options[b.end].push_back(i);
      }
    }
    std::vector<int> mate(n, -1);
    std::vector<int> chosen;
    if (!match(needs, options, mate, chosen)) {
      const auto unmatched = std::find(needs.begin(), needs.end(), true);
      const int a = static_cast<int>(unmatched - needs.begin());
      fail(SmilesErrorKind::kValenceViolation,
           static_cast<std::size_t>(a < n ? atoms_[a].source_offset : 0),
           "aromatic system cannot be kekulised");
    }
    for (RawBond &b : bonds_) {
      if (b.written_aromatic) {
        b.spec.order = 1;
        b.spec.aromatic = false;
      }
    }
    for (int bi : chosen) bonds_[bi].spec.order = 2;
  }

  // Backtracking perfect matching over atoms that need a double bond.
  bool match(const std::vector<bool> &needs, const std::vector<std::vector<int>> &options,
             std::vector<int> &mate, std::vector<int> &chosen) {
    int best = -1;
    std::size_t best_free = 0;
    for (int a = 0; a < static_cast<int>(needs.size()); ++a) {
      if (!needs[a] || mate[a] >= 0) continue;
      std::size_t free = 0;
      for (int bi : options[a]) {
        if (mate[bonds_[bi].begin == a ? bonds_[bi].end : bonds_[bi].begin] < 0) ++free;
      }
      if (free == 0) return false;
      if (best < 0 || free < best_free) {
        best = a;
        best_free = free;
      }
    }
    if (best < 0) return true;
    if (++match_steps_ > 1000000) return false;
    for (int bi : options[best]) {
      const int other = bonds_[bi].begin == best ? bonds_[bi].end : bonds_[bi].begin;
      if (mate[other] >= 0) continue;
      mate[best] = other;
      mate[other] = best;
      chosen.push_back(bi);
      if (match(needs, options, mate, chosen)) return true;
      chosen.pop_back();
      mate[best] = -1;
      mate[other] = -1;
    }
    return false;
  }

  void assign_hydrogens() {
    for (int a = 0; a < static_cast<int>(atoms_.size()); ++a) {
      Atom &atom = atoms_[a];
      int sum = 0;
      for (const RawBond &b : bonds_) {
        if (b.begin == a || b.end == a) sum += b.spec.order;
      }
      const auto valences = allowed_valences(atom.atomic_number, atom.formal_charge);
      if (atom.atomic_number == 0) continue;
      if (!atom.bracket) {
        sum += atom.explicit_h;
        const auto it = std::find_if(valences.begin(), valences.end(), [&](int v) { return v >= sum; });
        if (valences.empty() || it == valences.end()) {
          fail(SmilesErrorKind::kValenceViolation, static_cast<std::size_t>(atom.source_offset),
               "bond order sum " + std::to_string(sum) + " exceeds valence of " +
                   std::string(element_symbol(atom.atomic_number)));
        }
        atom.implicit_h = *it - sum;
      } else if (!valences.empty()) {
        // Below the largest valence is a radical, which is accepted.
        const int total = sum + atom.explicit_h;
        if (total > valences.back()) {
          fail(SmilesErrorKind::kValenceViolation, static_cast<std::size_t>(atom.source_offset),
               "valence " + std::to_string(total) + " not allowed for " +
                   std::string(element_symbol(atom.atomic_number)));
        }
      }
    }
  }

  MolecularGraph build() {
    std::vector<Bond> bonds;
    bonds.reserve(bonds_.size());
    for (const RawBond &rb : bonds_) {
      Bond b;
      b.begin = rb.begin;
      b.end = rb.end;
      b.kekule_order = rb.spec.order;
      b.order = static_cast<BondOrder>(rb.spec.order);
      b.direction = rb.spec.direction;
      bonds.push_back(b);
    }
    return MolecularGraph(std::move(atoms_), std::move(bonds));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<Atom> atoms_;
  std::vector<RawBond> bonds_;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::map<int, OpenRing> open_rings_;
  std::optional<BondSpec> pending_bond_;
  std::size_t pending_bond_offset_ = 0;
  int prev_ = -1;
  long match_steps_ = 0;
};

}  // namespace

MolecularGraph parse_smiles(std::string_view text) {
  return Parser(text).run();
}

MolecularGraph read_smiles(std::string_view text) {
  return perceive_aromaticity(perceive_rings(parse_smiles(text)));
}

}  // namespace nomenkit
