#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgl/graph.hpp"
#include "sgl/model.hpp"
#include "sgl/rng.hpp"

namespace sgl {

enum class SignalPattern { Adjacent, Scattered, Custom };
enum class ScaleMode { Divide, Multiply };

// Synthetic scenario: CAR-correlated spatial covariates over a lattice,
// a planted active set with constant signal, Poisson responses.
struct SimConfig {
  int n_train = 100, n_test = 50;
  int rows = 20, cols = 25;
  double rho_x = 0.4;                  // covariate spatial correlation
  SignalPattern pattern = SignalPattern::Adjacent;
  std::vector<bool> custom_mask;       // used when pattern == Custom
  int block_rows = 3, block_cols = 4;  // Adjacent block shape
  int scatter_count = 6;               // Scattered cell count
  double b_star = 6.0;
  Eigen::VectorXd alpha_star = (Eigen::VectorXd(2) << -0.25, 0.25).finished();
  ScaleMode scale_mode = ScaleMode::Divide;
  std::uint64_t seed = 1;

  int J() const { return rows * cols; }

  void validate() const {
    if (n_train + n_test < 1) throw std::invalid_argument("SimConfig: no observations");
    if (rows < 1 || cols < 1 || J() < 2) throw std::invalid_argument("SimConfig: lattice too small");
    if (!(rho_x >= 0 && rho_x < 1)) throw std::invalid_argument("SimConfig: rho_x in [0,1)");
  }
};

struct SimDataset {
  Dataset train, test;
  Eigen::VectorXd beta_star;
  std::vector<bool> active_mask;
};

// Active-region mask. Adjacent: one contiguous rectangular block centered
// in the grid. Scattered: isolated cells with pairwise Manhattan distance
// >= 3. Custom: passed through after a bounds check.
inline std::vector<bool> gen_pattern(const SimConfig& cfg) {
  cfg.validate();
  std::vector<bool> mask(cfg.J(), false);
  switch (cfg.pattern) {
    case SignalPattern::Custom: {
      if (static_cast<int>(cfg.custom_mask.size()) != cfg.J())
        throw std::invalid_argument("gen_pattern: custom mask size mismatch");
      return cfg.custom_mask;
    }
    case SignalPattern::Adjacent: {
      if (cfg.block_rows > cfg.rows || cfg.block_cols > cfg.cols)
        throw std::invalid_argument("gen_pattern: block exceeds lattice bounds");
      const int r0 = (cfg.rows - cfg.block_rows) / 2;
      const int c0 = (cfg.cols - cfg.block_cols) / 2;
      for (int r = r0; r < r0 + cfg.block_rows; ++r)
        for (int c = c0; c < c0 + cfg.block_cols; ++c) mask[r * cfg.cols + c] = true;
      return mask;
    }
    case SignalPattern::Scattered: {
      // deterministic greedy spread, row-major scan with distance guard
      std::vector<std::pair<int, int>> chosen;
      for (int r = 1; r < cfg.rows && static_cast<int>(chosen.size()) < cfg.scatter_count;
           ++r) {
        for (int c = 1; c < cfg.cols && static_cast<int>(chosen.size()) < cfg.scatter_count;
             ++c) {
          bool ok = true;
          for (auto [cr, cc] : chosen)
            if (std::abs(cr - r) + std::abs(cc - c) < 3) { ok = false; break; }
          if (ok) chosen.emplace_back(r, c);
        }
      }
      if (chosen.empty())
        throw std::invalid_argument("gen_pattern: lattice too small for scattered cells");
      for (auto [r, c] : chosen) mask[r * cfg.cols + c] = true;
      return mask;
    }
  }
  return mask;
}

struct SimCovariates {
  Eigen::MatrixXd w_train, w_test, x_train, x_test;
};

// W iid standard normal; X rows drawn from the CAR field at rho_x, columns
// standardized with training moments (applied to both splits) and then
// scaled by sqrt(n_train) per scale_mode.
inline SimCovariates gen_covariates(const SimConfig& cfg, const LatticeGraph& graph,
                                    RngStream& rng) {
  cfg.validate();
  const int K = static_cast<int>(cfg.alpha_star.size());
  const int n = cfg.n_train + cfg.n_test;
  Eigen::MatrixXd w(n, K), x(n, cfg.J());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) w(i, k) = rng.normal();
  CarField field(graph, cfg.rho_x);
  for (int i = 0; i < n; ++i) x.row(i) = field.sample(rng).transpose();

  for (int j = 0; j < cfg.J(); ++j) {
    const auto train_col = x.col(j).head(cfg.n_train);
    const double mean = train_col.mean();
    double sd = std::sqrt((train_col.array() - mean).square().sum() /
                          std::max(1, cfg.n_train - 1));
    if (sd == 0.0) sd = 1.0;
    x.col(j) = (x.col(j).array() - mean) / sd;
    const double root_n = std::sqrt(static_cast<double>(cfg.n_train));
    x.col(j) *= cfg.scale_mode == ScaleMode::Divide ? 1.0 / root_n : root_n;
  }

  SimCovariates out;
  out.w_train = w.topRows(cfg.n_train);
  out.w_test = w.bottomRows(cfg.n_test);
  out.x_train = x.topRows(cfg.n_train);
  out.x_test = x.bottomRows(cfg.n_test);
  return out;
}

inline Eigen::VectorXd gen_response(const SimConfig& cfg, const Eigen::MatrixXd& w,
                                    const Eigen::MatrixXd& x,
                                    const Eigen::VectorXd& beta_star, RngStream& rng) {
  Eigen::VectorXd eta = w * cfg.alpha_star + x * beta_star;
  Eigen::VectorXd y(eta.size());
  for (int i = 0; i < eta.size(); ++i) {
    if (std::abs(eta[i]) > 30.0)
      throw std::runtime_error("gen_response: log-mean overflow at row " +
                               std::to_string(i) + " (|eta|=" + std::to_string(eta[i]) +
                               "); scenario is mis-scaled");
    y[i] = static_cast<double>(rng.poisson(std::exp(eta[i])));
  }
  return y;
}

inline SimDataset generate(const SimConfig& cfg, const LatticeGraph& graph) {
  RngStream rng(cfg.seed);
  SimDataset out;
  out.active_mask = gen_pattern(cfg);
  out.beta_star = Eigen::VectorXd::Zero(cfg.J());
  for (int j = 0; j < cfg.J(); ++j)
    if (out.active_mask[j]) out.beta_star[j] = cfg.b_star;

  SimCovariates cov = gen_covariates(cfg, graph, rng);
  out.train.W = cov.w_train;
  out.train.X = cov.x_train;
  out.train.y = gen_response(cfg, cov.w_train, cov.x_train, out.beta_star, rng);
  out.train.standardized = true;
  out.test.W = cov.w_test;
  out.test.X = cov.x_test;
  out.test.y = cfg.n_test > 0
                   ? gen_response(cfg, cov.w_test, cov.x_test, out.beta_star, rng)
                   : Eigen::VectorXd(0);
  if (cfg.n_test == 0) {
    out.test.W.resize(0, cov.w_train.cols());
    out.test.X.resize(0, cfg.J());
  }
  out.test.standardized = true;
  out.train.validate();
  return out;
}

}  // namespace sgl
