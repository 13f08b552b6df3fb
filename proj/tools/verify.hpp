#pragma once

#include <string>

// Reduced-scale sweep over the project's headline claims: exponent fits,
// fixed-point convergence, closed-form oracle, domination counts, rational
// thresholds, and determinism across worker counts. Prints one line per
// check; returns the number of failures.
int run_verify(unsigned workers, const std::string& scratch_dir);
