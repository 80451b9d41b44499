#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskpg/exact_eval.hpp"
#include "riskpg/nonconvex.hpp"
#include "riskpg/trace.hpp"

namespace riskpg {

/// Shortest-roundtrip decimal for CSV cells (doubles survive a parse intact,
/// NaN prints as "nan").
std::string fmt_double(double v);

/// Provenance block written at the top of every CSV output: the full config
/// and the seed as comment lines.
std::string provenance_header(const nlohmann::json& config);

const char* to_string(TraceStatus status);

/// trace.csv for the exact optimizers:
///   k,J,V,objective,direction_norm,theta_0..theta_{K-1}
void write_exact_trace_csv(const OptTrace& trace, const nlohmann::json& config,
                           const std::string& path);

/// trace.csv for the simulation optimizers:
///   k,j_tilde,v_tilde,exact_J,exact_V,exact_grad_norm,theta_0..theta_{K-1}
/// exact_* columns are NaN when no exact probe is available (portfolio runs).
void write_sim_trace_csv(const OptTrace& trace, const nlohmann::json& config,
                         const std::string& path);

void write_frontier_csv(const std::vector<FrontierPoint>& points, const nlohmann::json& config,
                        const std::string& path);

void write_eval_json(const EvalResult& eval, const nlohmann::json& config,
                     const std::string& path);

struct HistogramBin {
  double left;
  double right;
  long count;
};

/// Histogram with Freedman-Diaconis bin width when bins_override == 0, a
/// fixed bin count otherwise. Degenerate samples (IQR 0 or max == min)
/// collapse to a single bin.
std::vector<HistogramBin> build_histogram(std::vector<double> samples, int bins_override);

void write_histogram_csv(const std::vector<HistogramBin>& bins, const nlohmann::json& config,
                         const std::string& path);

}  // namespace riskpg
