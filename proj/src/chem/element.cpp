//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/chem/element.h"

#include <array>
#include <string_view>

namespace nomenkit {
namespace {

constexpr std::array<std::string_view, kMaxAtomicNumber + 1> kSymbols = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
    "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
    "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
    "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
    "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
    "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
    "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
    "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
    "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

bool is_main_group_nonmetal(int z) {
  switch (z) {
  case 1:
  case 5:
  case 6:
  case 7:
  case 8:
  case 9:
  case 14:
  case 15:
  case 16:
  case 17:
  case 33:
  case 34:
  case 35:
  case 52:
  case 53:
    return true;
  default:
    return false;
  }
}

}  // namespace

std::string_view element_symbol(int atomic_number) {
  if (atomic_number < 0 || atomic_number > kMaxAtomicNumber) {
    return "?";
  }
  return kSymbols[atomic_number];
}

std::optional<int> atomic_number_of(std::string_view symbol) {
  for (int z = 0; z <= kMaxAtomicNumber; ++z) {
    if (kSymbols[z] == symbol) {
      return z;
    }
  }
  return std::nullopt;
}

int period_of(int z) {
  if (z <= 2) return 1;
  if (z <= 10) return 2;
  if (z <= 18) return 3;
  if (z <= 36) return 4;
  if (z <= 54) return 5;
  if (z <= 86) return 6;
  return 7;
}

int outer_electrons(int z) {
  if (z <= 0) return 0;
  if (z <= 2) return z;
  static constexpr std::array<int, 7> kPeriodStart = {1, 3, 11, 19, 37, 55, 87};
  const int p = period_of(z);
  const int offset = z - kPeriodStart[p - 1];
  if (p <= 3) {
    return offset + 1;
  }
  // Periods 4+: s-block, transition block (reported as 2), p-block.
  const int p_block_start = p <= 5 ? 12 : 26;
  if (offset < 2) return offset + 1;
  if (offset >= p_block_start) return offset - p_block_start + 3;
  return 2;
}

std::vector<int> allowed_valences(int z, int charge) {
  if (z == 1) {
    if (charge == 0) return {1};
    return {0};
  }
  if (!is_main_group_nonmetal(z)) {
    return {};
  }
  const int electrons = outer_electrons(z) - charge;
  const bool second_row = period_of(z) == 2;
  switch (electrons) {
  case 2:
    return {2};
  case 3:
    return {3};
  case 4:
    return {4};
  case 5:
    return second_row ? std::vector<int>{3} : std::vector<int>{3, 5};
  case 6:
    return second_row ? std::vector<int>{2} : std::vector<int>{2, 4, 6};
  case 7:
    return second_row ? std::vector<int>{1} : std::vector<int>{1, 3, 5, 7};
  case 8:
    return {0};
  default:
    return {};
  }
}

int default_valence(int z) {
  const auto v = allowed_valences(z, 0);
  return v.empty() ? -1 : v.front();
}

bool more_electronegative(int lhs, int rhs) {
  const int nl = outer_electrons(lhs);
  const int nr = outer_electrons(rhs);
  if (nl != nr) return nl > nr;
  return lhs < rhs;
}

}  // namespace nomenkit
