//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_CHEM_ELEMENT_H_
#define NOMENKIT_CHEM_ELEMENT_H_

#include <optional>
#include <string_view>
#include <vector>

namespace nomenkit {

inline constexpr int kMaxAtomicNumber = 118;

// Returns the element symbol for an atomic number in [0, 118]; 0 is "*".
std::string_view element_symbol(int atomic_number);

// Case-sensitive symbol lookup ("Cl", not "CL"). "*" maps to 0.
std::optional<int> atomic_number_of(std::string_view symbol);

int outer_electrons(int atomic_number);
int period_of(int atomic_number);

// Allowed total valences for a main-group element carrying `charge`. The
// charge shifts the element to its isoelectronic neighbour (N+ behaves like
// C, O- like F). Empty when the element has no fixed valence model (metals,
// noble gases with non-zero charge, dummy atoms); such atoms are not
// valence-checked.
std::vector<int> allowed_valences(int atomic_number, int charge);

// Lowest allowed valence of the neutral element, or -1 when unmodelled.
int default_valence(int atomic_number);

// Pauling-style ordering used by aromaticity perception: more outer electrons
// is more electronegative; ties go to the lighter element.
bool more_electronegative(int lhs, int rhs);

}  // namespace nomenkit

#endif  // NOMENKIT_CHEM_ELEMENT_H_
