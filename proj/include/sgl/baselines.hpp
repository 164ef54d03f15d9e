#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sgl {

// Climatology baseline: mean over the trailing window.
inline double moving_average_forecast(const Eigen::VectorXd& history, int window = 5) {
  if (window < 1) throw std::invalid_argument("moving_average: window >= 1");
  if (history.size() < window)
    throw std::invalid_argument("moving_average: history shorter than window");
  return history.tail(window).mean();
}

struct GlmFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;
  bool converged = false;
  int iterations = 0;
  std::vector<double> deviance_path;
};

inline double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  double d = 0;
  for (int i = 0; i < y.size(); ++i) {
    if (y[i] > 0) d += y[i] * std::log(y[i] / mu[i]) - (y[i] - mu[i]);
    else d += mu[i];
  }
  return 2.0 * d;
}

// Poisson GLM with log link via iteratively reweighted least squares.
// Step-halving keeps the deviance nonincreasing; standard errors come from
// the inverse Fisher information at the solution.
inline GlmFit fit_poisson_glm_irls(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                   int max_iter = 50, double tol = 1e-8) {
  const int n = static_cast<int>(y.size()), p = static_cast<int>(x.cols());
  if (x.rows() != n) throw std::invalid_argument("glm: dimension mismatch");
  if (n <= p) throw std::invalid_argument("glm: need n > p");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(x.transpose() * x);
  if (lu.rank() < p) throw std::invalid_argument("glm: rank-deficient design");

  GlmFit fit;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd eta = x * beta;
  Eigen::VectorXd mu = eta.array().exp();
  double dev = poisson_deviance(y, mu);
  fit.deviance_path.push_back(dev);

  for (int it = 0; it < max_iter; ++it) {
    // working response z = eta + (y - mu)/mu, weights mu
    Eigen::VectorXd wts = mu;
    Eigen::VectorXd z = eta + (y - mu).cwiseQuotient(mu.cwiseMax(1e-10));
    Eigen::MatrixXd xtwx = x.transpose() * wts.asDiagonal() * x;
    Eigen::VectorXd xtwz = x.transpose() * (wts.cwiseProduct(z));
    Eigen::LDLT<Eigen::MatrixXd> solver(xtwx);
    if (solver.info() != Eigen::Success) break;
    Eigen::VectorXd beta_new = solver.solve(xtwz);

    // step-halve until deviance does not increase
    double step = 1.0;
    Eigen::VectorXd cand, eta_c, mu_c;
    double dev_c = dev;
    bool improved = false;
    for (int h = 0; h < 30; ++h) {
      cand = beta + step * (beta_new - beta);
      eta_c = x * cand;
      if (eta_c.maxCoeff() > 300.0) { step *= 0.5; continue; }
      mu_c = eta_c.array().exp();
      dev_c = poisson_deviance(y, mu_c);
      if (dev_c <= dev + 1e-12) { improved = true; break; }
      step *= 0.5;
    }
    if (!improved) break;  // divergence; report converged=false

    const double delta = (cand - beta).cwiseAbs().maxCoeff();
    beta = cand;
    eta = eta_c;
    mu = mu_c;
    dev = dev_c;
    fit.deviance_path.push_back(dev);
    fit.iterations = it + 1;
    if (delta < tol) { fit.converged = true; break; }
  }

  fit.coefficients = beta;
  Eigen::MatrixXd info = x.transpose() * mu.asDiagonal() * x;
  Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.standard_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return fit;
}

struct TstatScreenResult {
  std::vector<bool> active;
  Eigen::VectorXd pooled;  // row-mean of X over selected locations
  bool fallback_all = false;
};

// Location-wise screening: per location j, fit Poisson GLM of y on (W, X_j)
// and keep locations whose Wald z on the X_j coefficient is significant at
// alpha_level. When nothing is selected, fall back to the all-locations
// average with a flag.
inline TstatScreenResult tstat_screen(const Eigen::VectorXd& y, const Eigen::MatrixXd& w,
                                      const Eigen::MatrixXd& x,
                                      double alpha_level = 0.05) {
  const int J = static_cast<int>(x.cols()), K = static_cast<int>(w.cols());
  // two-sided normal critical value via inverse erf
  auto z_crit = [](double a) {
    // bisection on erfc; alpha in (0,1)
    double lo = 0, hi = 10;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (std::erfc(mid / std::sqrt(2.0)) > a ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double crit = z_crit(alpha_level);

  TstatScreenResult out;
  out.active.assign(J, false);
  Eigen::MatrixXd design(y.size(), K + 1);
  design.leftCols(K) = w;
  for (int j = 0; j < J; ++j) {
    design.col(K) = x.col(j);
    GlmFit fit;
    try {
      fit = fit_poisson_glm_irls(y, design);
    } catch (const std::invalid_argument&) {
      continue;  // degenerate column, leave inactive
    }
    if (!fit.converged || fit.standard_errors[K] <= 0) continue;
    const double zstat = fit.coefficients[K] / fit.standard_errors[K];
    out.active[j] = std::abs(zstat) > crit;
  }

  int n_active = 0;
  for (bool a : out.active) n_active += a;
  out.pooled = Eigen::VectorXd::Zero(y.size());
  if (n_active == 0) {
    out.fallback_all = true;
    out.pooled = x.rowwise().mean();
  } else {
    for (int j = 0; j < J; ++j)
      if (out.active[j]) out.pooled += x.col(j);
    out.pooled /= n_active;
  }
  return out;
}

struct FixedRegionForecast {
  GlmFit fit;
  Eigen::VectorXd scalar;  // row-mean of X over the mask (training rows)
  double prediction = 0;
};

// Fixed-region-average mode: reduce X to the mask average, fit a Poisson
// GLM of y on (W, scalar), predict one step ahead at (w_new, x_new).
inline FixedRegionForecast fixed_region_forecast(const Eigen::VectorXd& y,
                                                 const Eigen::MatrixXd& w,
                                                 const Eigen::MatrixXd& x,
                                                 const std::vector<bool>& mask,
                                                 const Eigen::VectorXd& w_new,
                                                 const Eigen::VectorXd& x_new) {
  const int J = static_cast<int>(x.cols()), K = static_cast<int>(w.cols());
  if (static_cast<int>(mask.size()) != J)
    throw std::invalid_argument("fixed_region_forecast: mask length mismatch");
  int n_mask = 0;
  for (bool m : mask) n_mask += m;
  if (n_mask == 0) throw std::invalid_argument("fixed_region_forecast: empty mask");

  FixedRegionForecast out;
  out.scalar = Eigen::VectorXd::Zero(y.size());
  double scalar_new = 0;
  for (int j = 0; j < J; ++j)
    if (mask[j]) {
      out.scalar += x.col(j);
      scalar_new += x_new[j];
    }
  out.scalar /= n_mask;
  scalar_new /= n_mask;

  Eigen::MatrixXd design(y.size(), K + 1);
  design.leftCols(K) = w;
  design.col(K) = out.scalar;
  out.fit = fit_poisson_glm_irls(y, design);
  double eta = out.fit.coefficients.head(K).dot(w_new) + out.fit.coefficients[K] * scalar_new;
  out.prediction = std::exp(eta);
  return out;
}

}  // namespace sgl
