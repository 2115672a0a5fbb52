#pragma once

#include <string>
#include <vector>

#include "gridcast/lp.hpp"

namespace gridcast {

/// Sanitized 8-character interchange names, deterministic and
/// collision-free.  The objective row is always named COST; rows and
/// columns are separate namespaces.
struct MpsNames {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
};

[[nodiscard]] MpsNames mps_names(const LpProblem& p);

/// Writes the problem in fixed-format MPS (sections NAME, ROWS,
/// COLUMNS, RHS, BOUNDS, ENDATA; one coefficient per line; 8-character
/// names).  Values carry 12 significant digits.
void export_interchange(const LpProblem& p, const std::string& path);

}  // namespace gridcast
