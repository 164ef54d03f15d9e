#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sgl {

// Coefficient recovery errors. Undefined entries (empty signal or noise
// set) stay absent; they never default to 0.
struct EstimationReport {
  std::optional<double> signal_rmse;
  std::optional<double> noise_rmse;
  double beta_rmse = 0;
};

inline EstimationReport estimation_metrics(const Eigen::VectorXd& beta_hat,
                                           const Eigen::VectorXd& beta_star,
                                           const std::vector<bool>& mask) {
  const int J = static_cast<int>(beta_hat.size());
  if (beta_star.size() != J || static_cast<int>(mask.size()) != J)
    throw std::invalid_argument("estimation_metrics: length mismatch");
  double sig = 0, noise = 0;
  int n_sig = 0;
  for (int j = 0; j < J; ++j) {
    const double e = beta_hat[j] - beta_star[j];
    if (mask[j]) {
      sig += e * e;
      ++n_sig;
    } else {
      noise += e * e;
    }
  }
  EstimationReport out;
  if (n_sig > 0) out.signal_rmse = std::sqrt(sig / n_sig);
  if (J - n_sig > 0) out.noise_rmse = std::sqrt(noise / (J - n_sig));
  out.beta_rmse = std::sqrt((sig + noise) / J);
  return out;
}

struct SelectionReport {
  int tp = 0, fp = 0, tn = 0, fn = 0;
  std::optional<double> fpr;  // FP / (FP + TN)
  std::optional<double> fnr;  // FN / (FN + TP)
};

inline SelectionReport selection_metrics(const std::vector<bool>& active_hat,
                                         const std::vector<bool>& mask) {
  if (active_hat.size() != mask.size())
    throw std::invalid_argument("selection_metrics: length mismatch");
  SelectionReport r;
  for (std::size_t j = 0; j < mask.size(); ++j) {
    if (mask[j])
      (active_hat[j] ? r.tp : r.fn)++;
    else
      (active_hat[j] ? r.fp : r.tn)++;
  }
  if (r.fp + r.tn > 0) r.fpr = static_cast<double>(r.fp) / (r.fp + r.tn);
  if (r.fn + r.tp > 0) r.fnr = static_cast<double>(r.fn) / (r.fn + r.tp);
  return r;
}

struct ForecastReport {
  double mae = 0, rmse = 0, max_ae = 0;
  std::optional<double> sdr;  // absent for a constant truth series
};

// MAE, RMSE, MaxAE over the series, plus the standard deviation ratio
// sqrt(sum (yhat - mean yhat)^2 / sum (y - mean y)^2), each series
// centered at its own mean.
inline ForecastReport forecast_metrics(const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& y_hat) {
  const int t = static_cast<int>(y.size());
  if (y_hat.size() != t || t < 2)
    throw std::invalid_argument("forecast_metrics: equal lengths >= 2 required");
  ForecastReport r;
  double se = 0;
  for (int i = 0; i < t; ++i) {
    const double e = std::abs(y[i] - y_hat[i]);
    r.mae += e;
    se += e * e;
    r.max_ae = std::max(r.max_ae, e);
  }
  r.mae /= t;
  r.rmse = std::sqrt(se / t);
  const double num = (y_hat.array() - y_hat.mean()).square().sum();
  const double den = (y.array() - y.mean()).square().sum();
  if (den > 0) r.sdr = std::sqrt(num / den);
  return r;
}

}  // namespace sgl
