// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include "mmv/model.hpp"

namespace mmv {

// Free-format MPS. Every objective appears as an N row (first one is the
// conventional objective); maximization senses travel in * MMV-OBJSENSE
// comment lines, objective offsets as negated RHS entries on the N rows.
void write_mps(const LinearModel& model, std::ostream& out,
               const std::string& name = "mmv");

// Inverse of write_mps for round-trip checks. Variable space and campaign
// structure are not representable in MPS and come back empty.
LinearModel read_mps(std::istream& in);

}  // namespace mmv
