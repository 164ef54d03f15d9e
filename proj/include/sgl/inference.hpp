#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sgl/model.hpp"
#include "sgl/rng.hpp"
#include "sgl/sampler.hpp"

namespace sgl {

struct Interval {
  double lower = 0, upper = 0;
};

// Shortest contiguous window over the sorted sample containing
// ceil(level * S) points.
inline Interval hpd_interval(Eigen::VectorXd samples, double level) {
  const int s = static_cast<int>(samples.size());
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("hpd_interval: level in (0,1) required");
  const int window = static_cast<int>(std::ceil(level * s));
  if (s < 2 || window < 1 || window > s)
    throw std::invalid_argument("hpd_interval: too few samples for requested level");
  std::sort(samples.data(), samples.data() + s);
  int best = 0;
  double best_width = samples[window - 1] - samples[0];
  for (int i = 1; i + window <= s; ++i) {
    const double width = samples[i + window - 1] - samples[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {samples[best], samples[best + window - 1]};
}

struct PosteriorSummary {
  double mean = 0, sd = 0;
  Interval hpd;
};

inline PosteriorSummary summarize(const Eigen::VectorXd& samples, double level) {
  PosteriorSummary out;
  out.mean = samples.mean();
  out.sd = std::sqrt((samples.array() - out.mean).square().sum() /
                     std::max<int>(1, static_cast<int>(samples.size()) - 1));
  out.hpd = hpd_interval(samples, level);
  return out;
}

enum class SelectionRule { HPD, SN };

struct SelectionResult {
  std::vector<bool> active;
  SelectionRule rule = SelectionRule::HPD;
  double level = 0.95;
  std::vector<bool> flagged;  // degenerate posterior sd under the SN rule
};

// Region j active iff the HPD interval for beta_j excludes zero.
inline SelectionResult select_regions_hpd(const Eigen::MatrixXd& beta_draws, double level) {
  SelectionResult out;
  out.rule = SelectionRule::HPD;
  out.level = level;
  out.active.resize(beta_draws.cols());
  out.flagged.assign(beta_draws.cols(), false);
  for (int j = 0; j < beta_draws.cols(); ++j) {
    Interval iv = hpd_interval(beta_draws.col(j), level);
    out.active[j] = iv.lower > 0.0 || iv.upper < 0.0;
  }
  return out;
}

// Scaled neighborhood rule: inactive when posterior mass inside
// (-sd_j, sd_j) exceeds 0.5. Ties at exactly 0.5 are inactive (flagged),
// as is a degenerate zero posterior sd.
inline SelectionResult select_regions_sn(const Eigen::MatrixXd& beta_draws) {
  SelectionResult out;
  out.rule = SelectionRule::SN;
  out.level = 0.5;
  const int s = static_cast<int>(beta_draws.rows());
  out.active.resize(beta_draws.cols());
  out.flagged.assign(beta_draws.cols(), false);
  for (int j = 0; j < beta_draws.cols(); ++j) {
    const double mean = beta_draws.col(j).mean();
    const double sd = std::sqrt((beta_draws.col(j).array() - mean).square().sum() /
                                std::max(1, s - 1));
    if (sd == 0.0) {
      out.active[j] = false;
      out.flagged[j] = true;
      continue;
    }
    int inside = 0;
    for (int i = 0; i < s; ++i)
      if (std::abs(beta_draws(i, j)) < sd) ++inside;
    const double p = static_cast<double>(inside) / s;
    out.active[j] = p < 0.5;
    if (p == 0.5) out.flagged[j] = true;
  }
  return out;
}

struct PredictiveResult {
  Eigen::VectorXd draws;  // one simulated count per retained posterior draw
  double point = 0;       // posterior predictive mean
  Interval hpd;
};

// Per retained draw s: theta = exp(w'alpha + x'beta), y ~ Poisson(theta).
inline PredictiveResult posterior_predictive(const std::vector<const ChainOutput*>& chains,
                                             const Eigen::VectorXd& w_new,
                                             const Eigen::VectorXd& x_new, RngStream& rng,
                                             double level = 0.95) {
  if (chains.empty()) throw std::invalid_argument("posterior_predictive: no chains");
  const int K = chains.front()->K, J = chains.front()->J;
  if (w_new.size() != K || x_new.size() != J)
    throw std::invalid_argument("posterior_predictive: covariate dimension mismatch");
  int total = 0;
  for (const auto* c : chains) total += c->n_draws();
  PredictiveResult out;
  out.draws.resize(total);
  int idx = 0;
  for (const auto* c : chains) {
    for (int s = 0; s < c->n_draws(); ++s) {
      double eta = 0;
      for (int k = 0; k < K; ++k) eta += w_new[k] * c->draws(s, c->col_alpha(k));
      for (int j = 0; j < J; ++j) eta += x_new[j] * c->draws(s, c->col_beta(j));
      if (eta > 30.0)
        throw std::runtime_error("posterior_predictive: predictive mean overflow");
      out.draws[idx++] = static_cast<double>(rng.poisson(std::exp(eta)));
    }
  }
  out.point = out.draws.mean();
  out.hpd = hpd_interval(out.draws, level);
  return out;
}

// Region persistently active iff two consecutive selection masks both
// mark it active.
inline std::vector<bool> persistently_active(const std::vector<SelectionResult>& masks) {
  if (masks.size() < 2)
    throw std::invalid_argument("persistently_active: need >= 2 masks");
  const std::size_t J = masks.front().active.size();
  for (const auto& m : masks)
    if (m.active.size() != J)
      throw std::invalid_argument("persistently_active: mask lengths differ");
  std::vector<bool> out(J, false);
  for (std::size_t t = 1; t < masks.size(); ++t)
    for (std::size_t j = 0; j < J; ++j)
      if (masks[t - 1].active[j] && masks[t].active[j]) out[j] = true;
  return out;
}

// Pool post-burn-in beta draws across chains into an S x J matrix.
inline Eigen::MatrixXd pooled_beta_draws(const std::vector<const ChainOutput*>& chains) {
  if (chains.empty()) throw std::invalid_argument("pooled_beta_draws: no chains");
  const int J = chains.front()->J;
  int total = 0;
  for (const auto* c : chains) total += c->n_draws();
  Eigen::MatrixXd out(total, J);
  int row = 0;
  for (const auto* c : chains) {
    for (int j = 0; j < J; ++j)
      out.col(j).segment(row, c->n_draws()) = c->draws.col(c->col_beta(j));
    row += c->n_draws();
  }
  return out;
}

}  // namespace sgl
