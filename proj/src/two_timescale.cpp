#include "riskpg/two_timescale.hpp"

#include <cmath>

#include "riskpg/errors.hpp"
#include "riskpg/exact_optim.hpp"

namespace riskpg {

double ScheduleConfig::alpha(long k) const {
  return a0 / std::pow(static_cast<double>(k) + 1.0, a_exp);
}

double ScheduleConfig::beta(long k) const {
  return b0 / std::pow(static_cast<double>(k) + 1.0, b_exp);
}

void validate(const ScheduleConfig& cfg) {
  if (!(cfg.a0 > 0.0) || !(cfg.b0 > 0.0))
    throw ConfigError("schedule coefficients a0, b0 must be > 0");
  if (!(cfg.a_exp > 0.5 && cfg.a_exp <= 1.0))
    throw ConfigError("schedule a_exp must lie in (0.5, 1] (square-summable but not summable)");
  if (!(cfg.b_exp > cfg.a_exp && cfg.b_exp <= 1.0))
    throw ConfigError("schedule b_exp must lie in (a_exp, 1] (theta on the slower timescale)");
}

namespace {

struct Trackers {
  double j_tilde;
  double v_tilde;
};

Trackers advance_trackers(const TwoTimescaleState& st, double r, double alpha) {
  return {st.j_tilde + alpha * (r - st.j_tilde),
          st.v_tilde + alpha * (r * r - st.j_tilde * st.j_tilde - st.v_tilde)};
}

}  // namespace

TwoTimescaleState constrained_update(const TwoTimescaleState& st, const Episode& ep,
                                     double lambda, double b, const ScheduleConfig& schedule) {
  TwoTimescaleState next = st;
  next.k = st.k + 1;
  if (ep.truncated) return next;  // skip the censored return, keep schedules advancing

  const double r = ep.total_reward;
  const double alpha = schedule.alpha(st.k);
  const double beta = schedule.beta(st.k);

  const Trackers t = advance_trackers(st, r, alpha);
  next.j_tilde = t.j_tilde;
  next.v_tilde = t.v_tilde;

  // gradient estimate R z - lambda g'(v - b) (R^2 - 2 j R) z, i.e. the
  // likelihood-ratio estimates of grad J and grad V with the trackers
  // standing in for J
  const double weight =
      r - lambda * penalty_g_prime(st.v_tilde - b) * (r * r - 2.0 * st.j_tilde * r);
  next.theta = st.theta + beta * weight * ep.score_sum;
  return next;
}

TwoTimescaleState sharpe_update(const TwoTimescaleState& st, const Episode& ep,
                                const ScheduleConfig& schedule, double v_floor, bool* clamped) {
  if (clamped != nullptr) *clamped = false;
  TwoTimescaleState next = st;
  next.k = st.k + 1;
  if (ep.truncated) return next;

  const double r = ep.total_reward;
  const double alpha = schedule.alpha(st.k);
  const double beta = schedule.beta(st.k);

  const double vc = std::max(st.v_tilde, v_floor);
  if (vc != st.v_tilde && clamped != nullptr) *clamped = true;

  const double weight = r - (st.j_tilde * r * r - 2.0 * r * st.j_tilde * st.j_tilde) / (2.0 * vc);
  next.theta = st.theta + beta / std::sqrt(vc) * weight * ep.score_sum;

  const Trackers t = advance_trackers(st, r, alpha);
  next.j_tilde = t.j_tilde;
  next.v_tilde = std::max(t.v_tilde, v_floor);  // keep the stored tracker above the floor too
  return next;
}

namespace {

void record_snapshot(OptTrace& trace, const TwoTimescaleState& st, const SimOptions& opts,
                     const ExactProbe& probe) {
  TraceRecord rec;
  rec.k = st.k;
  rec.j_tilde = st.j_tilde;
  rec.v_tilde = st.v_tilde;
  rec.theta = st.theta;
  if (probe) {
    const EvalResult eval = probe(st.theta);
    rec.j = eval.j_star();
    rec.v = eval.v_star();
    if (opts.variant == SimVariant::Constrained) {
      rec.objective = eval.j_star() - opts.lambda * penalty_g(eval.v_star() - opts.b);
      rec.direction_norm =
          (eval.grad_j_star -
           opts.lambda * penalty_g_prime(eval.v_star() - opts.b) * eval.grad_v_star)
              .norm();
    } else {
      const double v = std::max(eval.v_star(), opts.v_floor);
      rec.objective = eval.j_star() / std::sqrt(v);
      rec.direction_norm =
          ((eval.grad_j_star - eval.j_star() / (2.0 * v) * eval.grad_v_star) / std::sqrt(v))
              .norm();
    }
  }
  trace.records.push_back(std::move(rec));
}

}  // namespace

OptTrace run_two_timescale(const EpisodeSampler& sampler, const Eigen::VectorXd& theta0,
                           const SimOptions& opts, const ScheduleConfig& schedule, Rng& rng,
                           const ExactProbe& probe) {
  validate(schedule);
  if (opts.episodes < 0) throw ConfigError("episode budget must be >= 0");
  if (opts.log_interval < 1) throw ConfigError("log_interval must be >= 1");
  if (opts.variant == SimVariant::Sharpe && !(opts.v_floor > 0.0))
    throw ConfigError("v_floor must be > 0 for the Sharpe variant");
  if (opts.variant == SimVariant::Constrained && opts.lambda < 0.0)
    throw ConfigError("lambda must be >= 0");

  OptTrace trace;
  TwoTimescaleState st;
  st.j_tilde = opts.j_tilde0;
  st.v_tilde = opts.v_tilde0;
  st.theta = theta0;
  record_snapshot(trace, st, opts, probe);

  for (long k = 0; k < opts.episodes; ++k) {
    const Episode ep = sampler(st.theta, rng);
    if (ep.truncated) ++trace.truncated_episodes;

    const Eigen::VectorXd frozen_theta = st.theta;
    bool clamped = false;
    if (opts.variant == SimVariant::Constrained) {
      st = constrained_update(st, ep, opts.lambda, opts.b, schedule);
    } else {
      st = sharpe_update(st, ep, schedule, opts.v_floor, &clamped);
    }
    if (clamped) ++trace.clamp_events;
    if (k < opts.tracker_burn_in) st.theta = frozen_theta;
    if (opts.clip_theta)
      st.theta = st.theta.cwiseMax(opts.clip_lo).cwiseMin(opts.clip_hi);

    if (st.k % opts.log_interval == 0 || k + 1 == opts.episodes)
      record_snapshot(trace, st, opts, probe);
  }
  trace.status = TraceStatus::MaxIterations;  // budget exhausted is the normal exit
  return trace;
}

OptTrace run_two_timescale(const FiniteMdp& mdp, const StatePolicy& policy,
                           const SimOptions& opts, const ScheduleConfig& schedule, Rng& rng) {
  auto rollout_policy = policy.clone();
  EpisodeSampler sampler = [&mdp, &rollout_policy, &opts](const Eigen::VectorXd& theta,
                                                          Rng& r) {
    rollout_policy->set_params(theta);
    return rollout(mdp, *rollout_policy, r, opts.max_steps);
  };
  auto probe_policy = policy.clone();
  ExactProbe probe = [&mdp, &probe_policy](const Eigen::VectorXd& theta) {
    probe_policy->set_params(theta);
    return evaluate(mdp, *probe_policy);
  };
  return run_two_timescale(sampler, policy.params(), opts, schedule, rng, probe);
}

}  // namespace riskpg
