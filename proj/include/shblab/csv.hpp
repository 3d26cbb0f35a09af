#pragma once

#include <string>

#include "shblab/sweep.hpp"

namespace shblab {

// %.17g rendering: doubles round-trip exactly and output is byte-stable
// across runs.
std::string format_double(double v);

// preset,T,engine,trial,risk,bias,variance,upper_bound,lower_bound,k_star,diverged
extern const char* const kSweepCsvHeader;

// One row per sampling trial, or one row with trial = "exact" per grid
// point. bias/variance cells are empty for sampled rows.
void append_sweep_rows(std::string& out, const std::string& label,
                       const SweepResult& sweep, Engine engine);

// Trailing machine-readable summary, kept out of the column grid:
// "# fit,<label>,slope=...,intercept=...,rms=...,points=..."
void append_fit_line(std::string& out, const std::string& label,
                     const RateFit& fit);

}  // namespace shblab
