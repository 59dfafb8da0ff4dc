//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/chem/smarts.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "nomenkit/chem/element.h"

namespace nomenkit {

SmartsError::SmartsError(const std::string &pattern, std::size_t offset, const std::string &detail)
    : std::invalid_argument("invalid SMARTS '" + pattern + "' at offset " + std::to_string(offset) +
                            ": " + detail) {}

namespace {

enum class AtomKind {
  kAny,
  kAtomicNumber,
  kAromatic,
  kAliphatic,
  kTotalH,
  kDegree,
  kConnectivity,
  kValence,
  kCharge,
  kRingCount,
  kInRing,
  kRingSize,
  kRingBonds,
  kIsotope,
  kRecursive,
};

enum class BondKind { kDefault, kSingle, kDouble, kTriple, kAromatic, kAny, kRing };

struct AtomPrim {
  AtomKind kind = AtomKind::kAny;
  int value = 0;
  std::shared_ptr<const SmartsPattern> recursive;
};

struct BondPrim {
  BondKind kind = BondKind::kDefault;
};

template <typename Prim> struct Expr {
  enum class Op { kLeaf, kNot, kAnd, kOr };
  Op op = Op::kLeaf;
  Prim prim;
  std::vector<Expr> kids;

  static Expr leaf(Prim p) {
    Expr e;
    e.prim = std::move(p);
    return e;
  }
  static Expr combine(Op op, Expr a, Expr b) {
    Expr e;
    e.op = op;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
  }

  template <typename Eval> bool eval(const Eval &leaf_eval) const {
    switch (op) {
    case Op::kLeaf:
      return leaf_eval(prim);
    case Op::kNot:
      return !kids[0].eval(leaf_eval);
    case Op::kAnd:
      for (const Expr &k : kids) {
        if (!k.eval(leaf_eval)) return false;
      }
      return true;
    case Op::kOr:
      for (const Expr &k : kids) {
        if (k.eval(leaf_eval)) return true;
      }
      return false;
    }
    return false;
  }
};

using AtomExpr = Expr<AtomPrim>;
using BondExpr = Expr<BondPrim>;

struct PatternBond {
  int a;
  int b;
  BondExpr expr;
};

}  // namespace

struct SmartsPattern::Impl {
  std::string text;
  std::vector<AtomExpr> atoms;
  std::vector<PatternBond> bonds;
  // Bond to an earlier atom through which atom i is reached; -1 for the
  // first atom of each dot-separated component.
  std::vector<int> parent_bond;
  std::vector<std::vector<int>> atom_bonds;
};

namespace {

class SmartsParser {
public:
  SmartsParser(std::string_view text, SmartsPattern::Impl &out) : text_(text), out_(out) {}

  void run() {
    if (text_.empty()) fail("empty pattern");
    int prev = -1;
    std::vector<int> branches;
    std::map<int, std::pair<int, std::optional<BondExpr>>> rings;
    std::optional<BondExpr> bond;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') {
        if (prev < 0 || bond) fail("branch without atom");
        branches.push_back(prev);
        ++pos_;
      } else if (c == ')') {
        if (branches.empty() || bond) fail("unbalanced ')'");
        prev = branches.back();
        branches.pop_back();
        ++pos_;
      } else if (c == '.') {
        if (bond) fail("bond before '.'");
        prev = -1;
        ++pos_;
      } else if (is_bond_char(c)) {
        if (prev < 0 || bond) fail("misplaced bond");
        bond = parse_bond_low();
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0) fail("ring bond without atom");
        int number;
        if (c == '%') {
          if (pos_ + 2 >= text_.size()) fail("bad ring number");
          number = std::stoi(std::string(text_.substr(pos_ + 1, 2)));
          pos_ += 3;
        } else {
          number = c - '0';
          ++pos_;
        }
        auto it = rings.find(number);
        if (it == rings.end()) {
          rings.emplace(number, std::make_pair(prev, std::move(bond)));
        } else {
          std::optional<BondExpr> expr = bond ? std::move(bond) : std::move(it->second.second);
          add_bond(it->second.first, prev, std::move(expr), false);
          rings.erase(it);
        }
        bond.reset();
      } else {
        AtomExpr atom = c == '[' ? parse_bracket() : parse_organic();
        const int idx = static_cast<int>(out_.atoms.size());
        out_.atoms.push_back(std::move(atom));
        out_.parent_bond.push_back(-1);
        out_.atom_bonds.emplace_back();
        if (prev >= 0) add_bond(prev, idx, std::move(bond), true);
        bond.reset();
        prev = idx;
      }
    }
    if (bond || !branches.empty() || !rings.empty()) fail("incomplete pattern");
  }

private:
  [[noreturn]] void fail(const std::string &detail) const {
    throw SmartsError(std::string(text_), pos_, detail);
  }

  static bool is_bond_char(char c) {
    return std::string_view("-=#:~@!&,;/\\").find(c) != std::string_view::npos;
  }

  void add_bond(int a, int b, std::optional<BondExpr> expr, bool parent) {
    const int idx = static_cast<int>(out_.bonds.size());
    out_.bonds.push_back({a, b, expr ? std::move(*expr) : BondExpr::leaf({BondKind::kDefault})});
    out_.atom_bonds[a].push_back(idx);
    out_.atom_bonds[b].push_back(idx);
    if (parent) out_.parent_bond[b] = idx;
  }

  // Bond expressions.
  BondExpr parse_bond_low() {
    BondExpr e = parse_bond_or();
    while (pos_ < text_.size() && text_[pos_] == ';') {
      ++pos_;
      e = BondExpr::combine(BondExpr::Op::kAnd, std::move(e), parse_bond_or());
    }
    return e;
  }
  BondExpr parse_bond_or() {
    BondExpr e = parse_bond_and();
    while (pos_ < text_.size() && text_[pos_] == ',') {
      ++pos_;
      e = BondExpr::combine(BondExpr::Op::kOr, std::move(e), parse_bond_and());
    }
    return e;
  }
  BondExpr parse_bond_and() {
    BondExpr e = parse_bond_not();
    while (pos_ < text_.size()) {
      if (text_[pos_] == '&') {
        ++pos_;
      } else if (!is_bond_char(text_[pos_]) || text_[pos_] == ',' || text_[pos_] == ';') {
        break;
      }
      e = BondExpr::combine(BondExpr::Op::kAnd, std::move(e), parse_bond_not());
    }
    return e;
  }
  BondExpr parse_bond_not() {
    if (pos_ < text_.size() && text_[pos_] == '!') {
      ++pos_;
      BondExpr e;
      e.op = BondExpr::Op::kNot;
      e.kids.push_back(parse_bond_not());
      return e;
    }
    if (pos_ >= text_.size()) fail("missing bond primitive");
    BondPrim p;
    switch (text_[pos_]) {
    case '-':
    case '/':
    case '\\':
      p.kind = BondKind::kSingle;
      break;
    case '=':
      p.kind = BondKind::kDouble;
      break;
    case '#':
      p.kind = BondKind::kTriple;
      break;
    case ':':
      p.kind = BondKind::kAromatic;
      break;
    case '~':
      p.kind = BondKind::kAny;
      break;
    case '@':
      p.kind = BondKind::kRing;
      break;
    default:
      fail("bad bond primitive");
    }
    ++pos_;
    return BondExpr::leaf(p);
  }

  static AtomExpr element(int z, std::optional<bool> aromatic) {
    AtomExpr e = AtomExpr::leaf({AtomKind::kAtomicNumber, z, nullptr});
    if (aromatic) {
      e = AtomExpr::combine(AtomExpr::Op::kAnd, std::move(e),
                            AtomExpr::leaf({*aromatic ? AtomKind::kAromatic : AtomKind::kAliphatic, 0,
                                            nullptr}));
    }
    return e;
  }

  AtomExpr parse_organic() {
    const char c = text_[pos_];
    const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    if (c == '*') {
      ++pos_;
      return AtomExpr::leaf({AtomKind::kAny, 0, nullptr});
    }
    if (c == 'a' || c == 'A') {
      ++pos_;
      return AtomExpr::leaf({c == 'a' ? AtomKind::kAromatic : AtomKind::kAliphatic, 0, nullptr});
    }
    if (c == 'C' && next == 'l') {
      pos_ += 2;
      return element(17, false);
    }
    if (c == 'B' && next == 'r') {
      pos_ += 2;
      return element(35, false);
    }
    if (std::string_view("BCNOPSFI").find(c) != std::string_view::npos) {
      ++pos_;
      return element(*atomic_number_of(std::string(1, c)), false);
    }
    if (std::string_view("bcnops").find(c) != std::string_view::npos) {
      ++pos_;
      return element(*atomic_number_of(std::string(1, static_cast<char>(std::toupper(c)))), true);
    }
    fail("unexpected character");
  }

  AtomExpr parse_bracket() {
    ++pos_;
    bracket_start_ = pos_;
    AtomExpr e = parse_low();
    if (pos_ >= text_.size() || text_[pos_] != ']') fail("expected ']'");
    ++pos_;
    return e;
  }

  AtomExpr parse_low() {
    AtomExpr e = parse_or();
    while (pos_ < text_.size() && text_[pos_] == ';') {
      ++pos_;
      e = AtomExpr::combine(AtomExpr::Op::kAnd, std::move(e), parse_or());
    }
    return e;
  }
  AtomExpr parse_or() {
    AtomExpr e = parse_and();
    while (pos_ < text_.size() && text_[pos_] == ',') {
      ++pos_;
      e = AtomExpr::combine(AtomExpr::Op::kOr, std::move(e), parse_and());
    }
    return e;
  }
  AtomExpr parse_and() {
    AtomExpr e = parse_not();
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '&') {
        ++pos_;
      } else if (c == ']' || c == ',' || c == ';' || c == ')') {
        break;
      }
      e = AtomExpr::combine(AtomExpr::Op::kAnd, std::move(e), parse_not());
    }
    return e;
  }
  AtomExpr parse_not() {
    if (pos_ < text_.size() && text_[pos_] == '!') {
      ++pos_;
      AtomExpr e;
      e.op = AtomExpr::Op::kNot;
      e.kids.push_back(parse_not());
      return e;
    }
    return parse_primitive();
  }

  // Optional unsigned number; `fallback` when absent.
  int number(int fallback) {
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) return fallback;
    int v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  AtomExpr parse_primitive() {
    if (pos_ >= text_.size()) fail("unterminated atom");
    const char c = text_[pos_];
    const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    auto leaf = [](AtomKind k, int v) { return AtomExpr::leaf({k, v, nullptr}); };
    if (std::isdigit(static_cast<unsigned char>(c))) return leaf(AtomKind::kIsotope, number(0));
    switch (c) {
    case '*':
      ++pos_;
      return leaf(AtomKind::kAny, 0);
    case '#': {
      ++pos_;
      const int z = number(-1);
      if (z < 0) fail("'#' needs an atomic number");
      return leaf(AtomKind::kAtomicNumber, z);
    }
    case '$': {
      if (next != '(') fail("expected '(' after '$'");
      const std::size_t start = pos_ + 2;
      int depth = 1;
      std::size_t i = start;
      for (; i < text_.size() && depth > 0; ++i) {
        if (text_[i] == '(') ++depth;
        if (text_[i] == ')') --depth;
      }
      if (depth != 0) fail("unbalanced recursive SMARTS");
      AtomPrim p{AtomKind::kRecursive, 0,
                 std::make_shared<const SmartsPattern>(text_.substr(start, i - 1 - start))};
      pos_ = i;
      return AtomExpr::leaf(std::move(p));
    }
    case 'a':
      if (next == 's') {
        pos_ += 2;
        return element(33, true);
      }
      ++pos_;
      return leaf(AtomKind::kAromatic, 0);
    case 'A':
      if (!std::islower(static_cast<unsigned char>(next))) {
        ++pos_;
        return leaf(AtomKind::kAliphatic, 0);
      }
      break;
    case 'D':
      ++pos_;
      return leaf(AtomKind::kDegree, number(1));
    case 'X':
      ++pos_;
      return leaf(AtomKind::kConnectivity, number(1));
    case 'v':
      ++pos_;
      return leaf(AtomKind::kValence, number(1));
    case 'x': {
      ++pos_;
      const int n = number(-1);
      if (n < 0) {
        AtomExpr e;
        e.op = AtomExpr::Op::kNot;
        e.kids.push_back(leaf(AtomKind::kRingBonds, 0));
        return e;
      }
      return leaf(AtomKind::kRingBonds, n);
    }
    case 'R': {
      ++pos_;
      const int n = number(-1);
      return n < 0 ? leaf(AtomKind::kInRing, 1) : leaf(AtomKind::kRingCount, n);
    }
    case 'r': {
      ++pos_;
      const int n = number(-1);
      return n < 0 ? leaf(AtomKind::kInRing, 1) : leaf(AtomKind::kRingSize, n);
    }
    case 'H':
      // A bare leading H names the hydrogen atom itself: [H], [H+], [2H].
      if (pos_ == bracket_start_ || text_.substr(bracket_start_, pos_ - bracket_start_).find_first_not_of(
                                        "0123456789") == std::string_view::npos) {
        if (next == ']' || next == '+' || next == '-') {
          ++pos_;
          return leaf(AtomKind::kAtomicNumber, 1);
        }
      }
      if (next == 'e' || next == 'f' || next == 'g' || next == 'o' || next == 's') break;
      ++pos_;
      return leaf(AtomKind::kTotalH, number(1));
    case '+':
    case '-': {
      const int sign = c == '+' ? 1 : -1;
      ++pos_;
      int n = number(-1);
      if (n < 0) {
        n = 1;
        while (pos_ < text_.size() && text_[pos_] == c) {
          ++n;
          ++pos_;
        }
      }
      return leaf(AtomKind::kCharge, sign * n);
    }
    case '@':
      // Chirality is not matched.
      while (pos_ < text_.size() && (text_[pos_] == '@' || text_[pos_] == '?')) ++pos_;
      return leaf(AtomKind::kAny, 0);
    case ':':
      ++pos_;
      number(0);
      return leaf(AtomKind::kAny, 0);
    default:
      break;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      if (c == 's' && next == 'e') {
        pos_ += 2;
        return element(34, true);
      }
      if (c == 't' && next == 'e') {
        pos_ += 2;
        return element(52, true);
      }
      if (std::string_view("bcnops").find(c) != std::string_view::npos) {
        ++pos_;
        return element(*atomic_number_of(std::string(1, static_cast<char>(std::toupper(c)))), true);
      }
      fail("unknown primitive");
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (std::islower(static_cast<unsigned char>(next))) {
        if (auto z = atomic_number_of(text_.substr(pos_, 2))) {
          pos_ += 2;
          return element(*z, false);
        }
      }
      if (auto z = atomic_number_of(text_.substr(pos_, 1))) {
        ++pos_;
        return element(*z, false);
      }
    }
    fail("unknown primitive");
  }

  std::string_view text_;
  SmartsPattern::Impl &out_;
  std::size_t pos_ = 0;
  std::size_t bracket_start_ = 0;
};

int total_h(const MolecularGraph &g, int a) {
  int h = g.atom(a).total_h();
  for (int b : g.bonds_of(a)) {
    if (g.atom(g.bond(b).other(a)).atomic_number == 1) ++h;
  }
  return h;
}

bool atom_matches(const AtomExpr &expr, const MolecularGraph &g, int a) {
  const Atom &atom = g.atom(a);
  return expr.eval([&](const AtomPrim &p) {
    switch (p.kind) {
    case AtomKind::kAny:
      return true;
    case AtomKind::kAtomicNumber:
      return atom.atomic_number == p.value;
    case AtomKind::kAromatic:
      return atom.aromatic;
    case AtomKind::kAliphatic:
      return !atom.aromatic;
    case AtomKind::kTotalH:
      return total_h(g, a) == p.value;
    case AtomKind::kDegree:
      return g.degree(a) == p.value;
    case AtomKind::kConnectivity:
      return g.degree(a) + atom.total_h() == p.value;
    case AtomKind::kValence:
      return g.bond_order_sum(a) + atom.total_h() == p.value;
    case AtomKind::kCharge:
      return atom.formal_charge == p.value;
    case AtomKind::kRingCount:
      return static_cast<int>(atom.rings.size()) == p.value;
    case AtomKind::kInRing:
      return std::any_of(g.bonds_of(a).begin(), g.bonds_of(a).end(),
                         [&](int b) { return g.bond(b).in_ring; });
    case AtomKind::kRingSize:
      return g.smallest_ring_size(a) == p.value;
    case AtomKind::kRingBonds:
      return std::count_if(g.bonds_of(a).begin(), g.bonds_of(a).end(),
                           [&](int b) { return g.bond(b).in_ring; }) == p.value;
    case AtomKind::kIsotope:
      return atom.isotope && *atom.isotope == p.value;
    case AtomKind::kRecursive:
      return p.recursive->matches_at(g, a);
    }
    return false;
  });
}

bool bond_matches(const BondExpr &expr, const Bond &bond) {
  return expr.eval([&](const BondPrim &p) {
    switch (p.kind) {
    case BondKind::kDefault:
      return bond.is_aromatic() || bond.kekule_order == 1;
    case BondKind::kSingle:
      return !bond.is_aromatic() && bond.kekule_order == 1;
    case BondKind::kDouble:
      return !bond.is_aromatic() && bond.kekule_order == 2;
    case BondKind::kTriple:
      return !bond.is_aromatic() && bond.kekule_order == 3;
    case BondKind::kAromatic:
      return bond.is_aromatic();
    case BondKind::kAny:
      return true;
    case BondKind::kRing:
      return bond.in_ring;
    }
    return false;
  });
}

class Matcher {
public:
  Matcher(const SmartsPattern::Impl &p, const MolecularGraph &g)
      : p_(p), g_(g), map_(p.atoms.size(), -1), used_(g.atom_count(), false) {}

  // Visits complete matches until the callback returns false.
  template <typename Visit> void run(int first_atom, const Visit &visit) {
    stop_ = false;
    extend(0, first_atom, visit);
  }

private:
  template <typename Visit> void extend(std::size_t i, int first_atom, const Visit &visit) {
    if (stop_) return;
    if (i == p_.atoms.size()) {
      if (!visit(map_)) stop_ = true;
      return;
    }
    const int parent = p_.parent_bond[i];
    if (parent < 0) {
      if (i == 0 && first_atom >= 0) {
        try_atom(i, first_atom, first_atom, visit);
      } else {
        for (int t = 0; t < g_.atom_count() && !stop_; ++t) try_atom(i, t, first_atom, visit);
      }
      return;
    }
    const PatternBond &pb = p_.bonds[parent];
    const int anchor = map_[pb.a == static_cast<int>(i) ? pb.b : pb.a];
    for (int b : g_.bonds_of(anchor)) {
      if (stop_) return;
      try_atom(i, g_.bond(b).other(anchor), first_atom, visit);
    }
  }

  template <typename Visit> void try_atom(std::size_t i, int t, int first_atom, const Visit &visit) {
    if (used_[t] || !atom_matches(p_.atoms[i], g_, t)) return;
    for (int bi : p_.atom_bonds[i]) {
      const PatternBond &pb = p_.bonds[bi];
      const int other = pb.a == static_cast<int>(i) ? pb.b : pb.a;
      if (other == static_cast<int>(i)) return;
      const int mapped = map_[other];
      if (mapped < 0) continue;
      const int tb = g_.bond_between(t, mapped);
      if (tb < 0 || !bond_matches(pb.expr, g_.bond(tb))) return;
    }
    map_[i] = t;
    used_[t] = true;
    extend(i + 1, first_atom, visit);
    used_[t] = false;
    map_[i] = -1;
  }

  const SmartsPattern::Impl &p_;
  const MolecularGraph &g_;
  std::vector<int> map_;
  std::vector<bool> used_;
  bool stop_ = false;
};

}  // namespace

SmartsPattern::SmartsPattern(std::string_view smarts) : impl_(std::make_unique<Impl>()) {
  impl_->text = std::string(smarts);
  SmartsParser(smarts, *impl_).run();
}

SmartsPattern::~SmartsPattern() = default;
SmartsPattern::SmartsPattern(SmartsPattern &&) noexcept = default;
SmartsPattern &SmartsPattern::operator=(SmartsPattern &&) noexcept = default;

const std::string &SmartsPattern::text() const {
  return impl_->text;
}

int SmartsPattern::atom_count() const {
  return static_cast<int>(impl_->atoms.size());
}

bool SmartsPattern::matches(const MolecularGraph &target) const {
  bool found = false;
  Matcher(*impl_, target).run(-1, [&](const std::vector<int> &) {
    found = true;
    return false;
  });
  return found;
}

bool SmartsPattern::matches_at(const MolecularGraph &target, int atom) const {
  if (impl_->atoms.empty() || !atom_matches(impl_->atoms[0], target, atom)) return false;
  bool found = false;
  Matcher(*impl_, target).run(atom, [&](const std::vector<int> &) {
    found = true;
    return false;
  });
  return found;
}

std::vector<std::vector<int>> SmartsPattern::find_all(const MolecularGraph &target, bool unique) const {
  std::vector<std::vector<int>> out;
  std::set<std::vector<int>> seen;
  Matcher(*impl_, target).run(-1, [&](const std::vector<int> &m) {
    if (unique) {
      std::vector<int> key = m;
      std::sort(key.begin(), key.end());
      if (!seen.insert(std::move(key)).second) return true;
    }
    out.push_back(m);
    return true;
  });
  return out;
}

std::vector<std::pair<int, int>> SmartsPattern::bonds() const {
  std::vector<std::pair<int, int>> out;
  for (const PatternBond &b : impl_->bonds) out.emplace_back(b.a, b.b);
  return out;
}

bool SmartsPattern::atom_accepts(int pattern_atom, const MolecularGraph &target, int atom) const {
  return atom_matches(impl_->atoms.at(pattern_atom), target, atom);
}

bool SmartsPattern::bond_accepts(int pattern_bond, const MolecularGraph &target, int bond) const {
  return bond_matches(impl_->bonds.at(pattern_bond).expr, target.bond(bond));
}

}  // namespace nomenkit
