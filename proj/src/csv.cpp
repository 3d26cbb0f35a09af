#include "shblab/csv.hpp"

#include <cstdio>

namespace shblab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* const kSweepCsvHeader =
    "preset,T,engine,trial,risk,bias,variance,upper_bound,lower_bound,k_star,"
    "diverged";

void append_sweep_rows(std::string& out, const std::string& label,
                       const SweepResult& sweep, Engine engine) {
  const char* engine_name = engine == Engine::Exact ? "exact" : "mc";
  for (const SweepPoint& pt : sweep.points) {
    for (std::size_t trial = 0; trial < pt.trial_rows.size(); ++trial) {
      const TrialRow& row = pt.trial_rows[trial];
      out += label;
      out += ',';
      out += std::to_string(pt.T);
      out += ',';
      out += engine_name;
      out += ',';
      out += engine == Engine::Exact ? std::string("exact")
                                     : std::to_string(trial);
      out += ',';
      out += format_double(row.risk);
      out += ',';
      if (engine == Engine::Exact) {
        out += format_double(pt.bias);
        out += ',';
        out += format_double(pt.variance);
      } else {
        out += ',';  // bias/variance not observable per sampled trial
      }
      out += ',';
      out += format_double(pt.upper_bound);
      out += ',';
      out += format_double(pt.lower_bound);
      out += ',';
      out += std::to_string(pt.k_star);
      out += ',';
      out += row.diverged ? '1' : '0';
      out += '\n';
    }
  }
}

void append_fit_line(std::string& out, const std::string& label,
                     const RateFit& fit) {
  out += "# fit,";
  out += label;
  out += ",slope=";
  out += format_double(fit.slope);
  out += ",intercept=";
  out += format_double(fit.intercept);
  out += ",rms=";
  out += format_double(fit.residual_rms);
  out += ",points=";
  out += std::to_string(fit.points_used);
  out += '\n';
}

}  // namespace shblab
