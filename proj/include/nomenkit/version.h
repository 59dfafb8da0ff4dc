//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_VERSION_H_
#define NOMENKIT_VERSION_H_

#include <string_view>

namespace nomenkit {

inline constexpr std::string_view kToolName = "nomenkit";
inline constexpr std::string_view kToolVersion = NOMENKIT_VERSION;

}  // namespace nomenkit

#endif  // NOMENKIT_VERSION_H_
