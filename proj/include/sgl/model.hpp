#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

#include "sgl/graph.hpp"
#include "sgl/priors.hpp"

namespace sgl {

// Count-regression dataset: y (n), scalar covariates W (n x K), spatial or
// basis-expanded covariates X (n x J). Log-factorials are cached since y is
// fixed for the life of the dataset.
struct Dataset {
  Eigen::VectorXd y;  // nonnegative integer counts
  Eigen::MatrixXd W;
  Eigen::MatrixXd X;
  bool standardized = false;

  int n() const { return static_cast<int>(y.size()); }
  int K() const { return static_cast<int>(W.cols()); }
  int J() const { return static_cast<int>(X.cols()); }

  void validate() const {
    if (W.rows() != n() || X.rows() != n())
      throw std::invalid_argument("Dataset: row counts of y, W, X must agree");
    for (int i = 0; i < n(); ++i) {
      if (!(y[i] >= 0) || y[i] != std::floor(y[i]))
        throw std::invalid_argument("Dataset: y must be nonnegative integers");
      }
    if (!y.allFinite() || !W.allFinite() || !X.allFinite())
      throw std::invalid_argument("Dataset: missing or non-finite values");
  }

  double log_y_factorial_sum() const {
    if (!lfact_cached_) {
      double s = 0.0;
      for (int i = 0; i < n(); ++i) s += std::lgamma(y[i] + 1.0);
      lfact_sum_ = s;
      lfact_cached_ = true;
    }
    return lfact_sum_;
  }

private:
  mutable bool lfact_cached_ = false;
  mutable double lfact_sum_ = 0.0;
};

// Positivity handling for tau and lambda. LogScale carries them as
// log-values with exact Jacobians (default, exact posterior). Sigmoid
// carries raw values with the smooth positivity indicator added to the
// log-prior, reproducing the softened-constraint computation.
enum class PositivityMode { LogScale, Sigmoid };

// One point in parameter space. Under LogScale, log_lambda/log_tau store
// log(lambda)/log(tau); under Sigmoid they store the raw scales.
struct ParamState {
  Eigen::VectorXd alpha;       // K
  Eigen::VectorXd beta_tilde;  // J
  Eigen::VectorXd log_lambda;  // J
  double log_tau = 0.0;
  double rho = 0.0;
};

struct ModelSpec {
  ScalePrior tau_prior;
  ScalePrior lambda_prior;
  RhoPrior rho_prior;
  double zeta = 1.0;  // alpha prior sd
  double eta = 50.0;  // sigmoid sharpness
  PositivityMode positivity = PositivityMode::LogScale;
  const LatticeGraph* graph = nullptr;

  void validate() const {
    if (!(zeta > 0.0)) throw std::invalid_argument("ModelSpec: zeta must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("ModelSpec: eta must be positive");
    if (!graph) throw std::invalid_argument("ModelSpec: graph required");
  }

  double lambda_value(const ParamState& s, int j) const {
    return positivity == PositivityMode::LogScale ? std::exp(s.log_lambda[j])
                                                  : s.log_lambda[j];
  }
  double tau_value(const ParamState& s) const {
    return positivity == PositivityMode::LogScale ? std::exp(s.log_tau) : s.log_tau;
  }
};

// Build the five comparison models by name. DLC: log-Cauchy scales with
// free rho; DHS: half-Cauchy with free rho; HS/LC: independent variants
// (rho pinned at 0); CAR: half-Cauchy tau, lambda pinned at 1.
inline ModelSpec make_model(const std::string& name, const LatticeGraph& graph,
                            double zeta = 1.0, double eta = 50.0) {
  ModelSpec m;
  m.graph = &graph;
  m.zeta = zeta;
  m.eta = eta;
  if (name == "DLC") {
    m.tau_prior = ScalePrior::log_cauchy();
    m.lambda_prior = ScalePrior::log_cauchy();
    m.rho_prior = {RhoPriorKind::Uniform01};
  } else if (name == "DHS") {
    m.tau_prior = ScalePrior::half_cauchy();
    m.lambda_prior = ScalePrior::half_cauchy();
    m.rho_prior = {RhoPriorKind::Uniform01};
  } else if (name == "HS") {
    m.tau_prior = ScalePrior::half_cauchy();
    m.lambda_prior = ScalePrior::half_cauchy();
    m.rho_prior = {RhoPriorKind::FixedZero};
  } else if (name == "LC") {
    m.tau_prior = ScalePrior::log_cauchy();
    m.lambda_prior = ScalePrior::log_cauchy();
    m.rho_prior = {RhoPriorKind::FixedZero};
  } else if (name == "CAR") {
    m.tau_prior = ScalePrior::half_cauchy();
    m.lambda_prior = ScalePrior::fixed_one();
    m.rho_prior = {RhoPriorKind::Uniform01};
  } else {
    throw std::invalid_argument("unknown model '" + name +
                                "' (expect DLC|DHS|HS|LC|CAR)");
  }
  return m;
}

// beta_j = tau * lambda_j * beta_tilde_j
inline Eigen::VectorXd beta_from(const ParamState& s, const ModelSpec& spec) {
  const double tau = spec.tau_value(s);
  Eigen::VectorXd beta(s.beta_tilde.size());
  for (int j = 0; j < beta.size(); ++j)
    beta[j] = tau * spec.lambda_value(s, j) * s.beta_tilde[j];
  return beta;
}

// Poisson log-likelihood given a precomputed linear predictor. Linear
// predictors above 700 would overflow exp; the whole likelihood collapses
// to -inf instead of propagating non-finite values.
inline double log_likelihood_eta(const Eigen::VectorXd& eta, const Dataset& data) {
  double s = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    if (eta[i] > 700.0 || !std::isfinite(eta[i])) return kNegInf;
    s += data.y[i] * eta[i] - std::exp(eta[i]);
  }
  return s - data.log_y_factorial_sum();
}

inline Eigen::VectorXd linear_predictor(const ParamState& s, const ModelSpec& spec,
                                        const Dataset& data) {
  return data.W * s.alpha + data.X * beta_from(s, spec);
}

inline double log_likelihood(const ParamState& s, const ModelSpec& spec,
                             const Dataset& data) {
  if (data.n() == 0) return 0.0;
  return log_likelihood_eta(linear_predictor(s, spec, data), data);
}

// beta_tilde' (D - rho*A) beta_tilde via sparse products.
inline double car_quadratic_form(const LatticeGraph& g, double rho,
                                 const Eigen::VectorXd& bt) {
  double diag = 0.0;
  for (int j = 0; j < g.size(); ++j) diag += g.degrees()[j] * bt[j] * bt[j];
  return diag - rho * bt.dot(g.adjacency() * bt);
}

// One scale parameter's prior contribution. LogScale: density at exp(v)
// plus the log-scale Jacobian v. Sigmoid: kernel at |v| plus the smooth
// positivity term, no Jacobian. FixedOne pins the parameter and
// contributes 0.
inline double scale_prior_term(const ScalePrior& prior, double v, PositivityMode mode,
                               double eta) {
  if (prior.fixed()) return 0.0;
  if (mode == PositivityMode::LogScale)
    return scale_prior_log_density_at_log(prior, v) + v;
  const double a = std::abs(v);
  if (a == 0.0) return kNegInf;
  return scale_prior_log_density(prior, a) + soft_positivity_log(v, eta);
}

inline double rho_prior_term(const RhoPrior& prior, double rho) {
  if (prior.kind == RhoPriorKind::FixedZero) return rho == 0.0 ? 0.0 : kNegInf;
  return (rho >= 0.0 && rho < 1.0) ? 0.0 : kNegInf;
}

inline double log_prior(const ParamState& s, const ModelSpec& spec) {
  spec.validate();
  const auto& g = *spec.graph;
  const int J = g.size(), K = static_cast<int>(s.alpha.size());
  double rho_term = rho_prior_term(spec.rho_prior, s.rho);
  if (rho_term == kNegInf) return kNegInf;

  // alpha ~ N(0, zeta^2) iid
  double lp = -0.5 * K * std::log(2.0 * M_PI) - K * std::log(spec.zeta) -
              0.5 * s.alpha.squaredNorm() / (spec.zeta * spec.zeta);

  // beta_tilde ~ N(0, (D - rho*A)^{-1})
  CarField field(g, s.rho);
  lp += -0.5 * J * std::log(2.0 * M_PI) + 0.5 * field.log_det() -
        0.5 * car_quadratic_form(g, s.rho, s.beta_tilde);

  for (int j = 0; j < J; ++j) {
    double t = scale_prior_term(spec.lambda_prior, s.log_lambda[j], spec.positivity,
                                spec.eta);
    if (t == kNegInf) return kNegInf;
    lp += t;
  }
  double tt = scale_prior_term(spec.tau_prior, s.log_tau, spec.positivity, spec.eta);
  if (tt == kNegInf) return kNegInf;
  return lp + tt + rho_term;
}

inline double log_posterior(const ParamState& s, const ModelSpec& spec,
                            const Dataset& data) {
  const double prior = log_prior(s, spec);
  if (prior == kNegInf) return kNegInf;
  const double ll = log_likelihood(s, spec, data);
  if (ll == kNegInf) return kNegInf;
  return prior + ll;
}

// Default chain start: flat coefficients, unit local scales, tau near the
// truncated-Cauchy lower bound 1/J, rho at the prior center.
inline ParamState initial_state(const ModelSpec& spec, int K) {
  const int J = spec.graph->size();
  ParamState s;
  s.alpha = Eigen::VectorXd::Zero(K);
  s.beta_tilde = Eigen::VectorXd::Zero(J);
  const double lam1 = spec.positivity == PositivityMode::LogScale ? 0.0 : 1.0;
  s.log_lambda = Eigen::VectorXd::Constant(J, lam1);
  const double tau0 = 1.0 / J;
  s.log_tau = spec.positivity == PositivityMode::LogScale ? std::log(tau0) : tau0;
  if (spec.tau_prior.fixed()) s.log_tau = lam1;
  s.rho = spec.rho_prior.fixed() ? 0.0 : 0.5;
  return s;
}

}  // namespace sgl
