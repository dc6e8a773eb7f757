#pragma once

#include <ostream>

namespace bitorus::acceptance {

// Runs the acceptance suite: one pass/fail line per criterion on `out`.
// Returns the number of failed criteria.
int run_all(std::ostream& out);

}  // namespace bitorus::acceptance
