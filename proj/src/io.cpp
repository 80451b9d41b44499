#include "riskpg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "riskpg/errors.hpp"

namespace riskpg {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string provenance_header(const nlohmann::json& config) {
  std::string seed = "none";
  if (config.contains("seed")) seed = config.at("seed").dump();
  return "# config: " + config.dump() + "\n# seed: " + seed + "\n";
}

const char* to_string(TraceStatus status) {
  switch (status) {
    case TraceStatus::Converged: return "converged";
    case TraceStatus::MaxIterations: return "max-iterations";
    case TraceStatus::Error: return "error";
  }
  return "unknown";
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file: " + path);
  return out;
}

void write_theta_header(std::ofstream& out, Eigen::Index k) {
  for (Eigen::Index i = 0; i < k; ++i) out << ",theta_" << i;
  out << "\n";
}

void write_theta_cells(std::ofstream& out, const Eigen::VectorXd& theta) {
  for (Eigen::Index i = 0; i < theta.size(); ++i) out << "," << fmt_double(theta[i]);
  out << "\n";
}

}  // namespace

void write_exact_trace_csv(const OptTrace& trace, const nlohmann::json& config,
                           const std::string& path) {
  auto out = open_out(path);
  out << provenance_header(config);
  out << "# status: " << to_string(trace.status) << "\n";
  out << "k,J,V,objective,direction_norm";
  write_theta_header(out, trace.records.empty() ? 0 : trace.records.front().theta.size());
  for (const auto& rec : trace.records) {
    out << rec.k << "," << fmt_double(rec.j) << "," << fmt_double(rec.v) << ","
        << fmt_double(rec.objective) << "," << fmt_double(rec.direction_norm);
    write_theta_cells(out, rec.theta);
  }
}

void write_sim_trace_csv(const OptTrace& trace, const nlohmann::json& config,
                         const std::string& path) {
  auto out = open_out(path);
  out << provenance_header(config);
  out << "# status: " << to_string(trace.status) << "\n";
  out << "# truncated_episodes: " << trace.truncated_episodes << "\n";
  out << "k,j_tilde,v_tilde,exact_J,exact_V,exact_grad_norm";
  write_theta_header(out, trace.records.empty() ? 0 : trace.records.front().theta.size());
  for (const auto& rec : trace.records) {
    out << rec.k << "," << fmt_double(rec.j_tilde) << "," << fmt_double(rec.v_tilde) << ","
        << fmt_double(rec.j) << "," << fmt_double(rec.v) << ","
        << fmt_double(rec.direction_norm);
    write_theta_cells(out, rec.theta);
  }
}

void write_frontier_csv(const std::vector<FrontierPoint>& points, const nlohmann::json& config,
                        const std::string& path) {
  auto out = open_out(path);
  out << provenance_header(config);
  out << "theta1,theta2,J,V\n";
  for (const auto& p : points)
    out << fmt_double(p.theta1) << "," << fmt_double(p.theta2) << "," << fmt_double(p.j_star)
        << "," << fmt_double(p.v_star) << "\n";
}

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

void write_eval_json(const EvalResult& eval, const nlohmann::json& config,
                     const std::string& path) {
  nlohmann::json j;
  j["config"] = config;
  j["seed"] = config.contains("seed") ? config.at("seed") : nlohmann::json(nullptr);
  j["recurrent_state"] = eval.recurrent_state;
  j["j"] = vector_to_json(eval.j);
  j["v"] = vector_to_json(eval.v);
  j["rho"] = vector_to_json(eval.rho);
  j["grad_j_star"] = vector_to_json(eval.grad_j_star);
  j["grad_v_star"] = vector_to_json(eval.grad_v_star);
  j["j_star"] = eval.j_star();
  j["v_star"] = eval.v_star();
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

std::vector<HistogramBin> build_histogram(std::vector<double> samples, int bins_override) {
  if (samples.empty()) return {};
  std::sort(samples.begin(), samples.end());
  const double lo = samples.front();
  const double hi = samples.back();
  const auto n = samples.size();

  int bins = bins_override;
  if (bins <= 0) {
    // Freedman-Diaconis: width = 2 IQR / n^(1/3)
    const double q1 = samples[n / 4];
    const double q3 = samples[(3 * n) / 4];
    const double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(n));
    bins = (width > 0.0 && hi > lo) ? static_cast<int>(std::ceil((hi - lo) / width)) : 1;
  }
  if (hi == lo) bins = 1;

  std::vector<HistogramBin> out(bins);
  const double span = (hi > lo) ? (hi - lo) : 1.0;
  for (int i = 0; i < bins; ++i) {
    out[i].left = lo + span * i / bins;
    out[i].right = lo + span * (i + 1) / bins;
    out[i].count = 0;
  }
  for (double s : samples) {
    int idx = static_cast<int>((s - lo) / span * bins);
    idx = std::clamp(idx, 0, bins - 1);
    ++out[idx].count;
  }
  return out;
}

void write_histogram_csv(const std::vector<HistogramBin>& bins, const nlohmann::json& config,
                         const std::string& path) {
  auto out = open_out(path);
  out << provenance_header(config);
  out << "bin_left,bin_right,count\n";
  for (const auto& b : bins)
    out << fmt_double(b.left) << "," << fmt_double(b.right) << "," << b.count << "\n";
}

}  // namespace riskpg
