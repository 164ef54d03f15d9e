#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgl/baselines.hpp"
#include "sgl/inference.hpp"
#include "sgl/metrics.hpp"
#include "sgl/model.hpp"
#include "sgl/sampler.hpp"

namespace sgl {

struct YearPrediction {
  int year_index = 0;
  double y_true = 0;
  double y_hat = 0;
  double hpd_lower = 0, hpd_upper = 0;
  bool has_interval = false;
};

struct BacktestModelResult {
  std::string model;
  std::vector<YearPrediction> predictions;
  ForecastReport report;
  std::vector<SelectionResult> yearly_masks;  // MCMC models only
  std::vector<bool> persistent;               // at least two consecutive active years
};

struct BacktestRequest {
  // rows are time-ordered; the target range is [start, end] inclusive
  Eigen::VectorXd y;
  Eigen::MatrixXd w;
  Eigen::MatrixXd x;                    // region-level covariates
  const LatticeGraph* graph = nullptr;  // graph over x columns (or basis coefs)
  std::optional<Eigen::MatrixXd> basis_m;  // regions x L; model acts on X*M when set
  int start = 0, end = 0;
  int ma_window = 5;
  std::vector<bool> fixed_region_mask;  // UA mode
  SamplerConfig sampler;
  double selection_level = 0.95;
};

namespace detail {

inline void check_backtest(const BacktestRequest& req) {
  const int t = static_cast<int>(req.y.size());
  if (req.w.rows() != t || req.x.rows() != t)
    throw std::invalid_argument("backtest: row counts disagree");
  if (req.start < 1 || req.end < req.start || req.end >= t)
    throw std::invalid_argument("backtest: window exceeds data range");
}

}  // namespace detail

// Recursive one-year-ahead loop for one model name. For each target year t,
// the fit sees only rows strictly before t.
inline BacktestModelResult backtest_model(const std::string& model,
                                          const BacktestRequest& req) {
  detail::check_backtest(req);
  BacktestModelResult out;
  out.model = model;
  const bool use_basis = req.basis_m.has_value();
  Eigen::MatrixXd x_eff = use_basis ? (req.x * *req.basis_m).eval() : req.x;

  for (int t = req.start; t <= req.end; ++t) {
    YearPrediction yp;
    yp.year_index = t;
    yp.y_true = req.y[t];

    const auto y_hist = req.y.head(t);
    const auto w_hist = req.w.topRows(t);
    const auto x_hist = req.x.topRows(t);

    if (model == "MA") {
      yp.y_hat = moving_average_forecast(y_hist, req.ma_window);
    } else if (model == "TSTAT") {
      TstatScreenResult screen = tstat_screen(y_hist, w_hist, x_hist);
      std::vector<bool> mask = screen.active;
      if (screen.fallback_all) mask.assign(req.x.cols(), true);
      auto f = fixed_region_forecast(y_hist, w_hist, x_hist, mask, req.w.row(t).transpose(),
                                     req.x.row(t).transpose());
      yp.y_hat = f.prediction;
    } else if (model == "UA") {
      if (req.fixed_region_mask.empty())
        throw std::invalid_argument("backtest: UA mode needs a fixed region mask");
      auto f = fixed_region_forecast(y_hist, w_hist, x_hist, req.fixed_region_mask,
                                     req.w.row(t).transpose(), req.x.row(t).transpose());
      yp.y_hat = f.prediction;
    } else {
      // MCMC shrinkage model
      ModelSpec spec = make_model(model, *req.graph);
      Dataset data;
      data.y = y_hist;
      data.W = w_hist;
      data.X = x_eff.topRows(t);
      SamplerConfig cfg = req.sampler;
      cfg.seed = req.sampler.seed + static_cast<std::uint64_t>(1000 * t);
      ChainOutput chain = run_chain(spec, data, cfg, 0);
      std::vector<const ChainOutput*> chains{&chain};
      RngStream pred_rng = RngStream::derive(cfg.seed, 77);
      PredictiveResult pr = posterior_predictive(chains, req.w.row(t).transpose(),
                                                 x_eff.row(t).transpose(), pred_rng);
      yp.y_hat = pr.point;
      yp.hpd_lower = pr.hpd.lower;
      yp.hpd_upper = pr.hpd.upper;
      yp.has_interval = true;

      // region-level selection for the persistence rule; map basis
      // coefficients back to regions when a basis is in play
      Eigen::MatrixXd beta_draws = pooled_beta_draws(chains);
      if (use_basis) beta_draws = (beta_draws * req.basis_m->transpose()).eval();
      out.yearly_masks.push_back(select_regions_hpd(beta_draws, req.selection_level));
    }
    out.predictions.push_back(yp);
  }

  Eigen::VectorXd truth(out.predictions.size()), pred(out.predictions.size());
  for (std::size_t i = 0; i < out.predictions.size(); ++i) {
    truth[i] = out.predictions[i].y_true;
    pred[i] = out.predictions[i].y_hat;
  }
  if (truth.size() >= 2) out.report = forecast_metrics(truth, pred);
  else {
    out.report.mae = out.report.rmse = out.report.max_ae = std::abs(truth[0] - pred[0]);
  }
  if (out.yearly_masks.size() >= 2) out.persistent = persistently_active(out.yearly_masks);
  return out;
}

}  // namespace sgl
