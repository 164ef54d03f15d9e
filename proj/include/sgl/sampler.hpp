#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgl/model.hpp"
#include "sgl/rng.hpp"

namespace sgl {

struct SamplerConfig {
  int n_iter = 20000;
  int burn_in = 8000;
  int adapt_interval = 500;
  double adapt_factor = 1.1;
  double accept_low = 0.30;
  double accept_high = 0.50;
  double init_step_alpha = 0.1;
  double init_step_beta = 0.1;
  double init_step_lambda = 0.5;
  double init_step_tau = 0.5;
  double init_step_rho = 0.5;
  int n_chains = 1;
  int thin = 10;
  std::uint64_t seed = 1;
  double init_jitter = 0.0;  // sd of the starting-value perturbation

  void validate() const {
    if (burn_in >= n_iter) throw std::invalid_argument("SamplerConfig: burn_in < n_iter required");
    if (!(accept_low > 0 && accept_low < accept_high && accept_high < 1))
      throw std::invalid_argument("SamplerConfig: need 0 < accept_low < accept_high < 1");
    if (!(adapt_factor > 1.0)) throw std::invalid_argument("SamplerConfig: adapt_factor > 1 required");
    if (adapt_interval < 1 || thin < 1 || n_chains < 1)
      throw std::invalid_argument("SamplerConfig: counts must be positive");
  }
};

// Step size review: grow when acceptance runs hot, shrink when cold,
// hold inside the band.
inline double adapt_step(double observed_rate, double step, const SamplerConfig& cfg) {
  if (observed_rate > cfg.accept_high) return step * cfg.adapt_factor;
  if (observed_rate < cfg.accept_low) return step / cfg.adapt_factor;
  return step;
}

struct StepSizes {
  Eigen::VectorXd alpha;   // per coordinate
  Eigen::VectorXd beta;    // per coordinate
  Eigen::VectorXd lambda;  // per coordinate
  double tau = 0.5;
  double rho = 0.5;
};

struct AcceptTally {
  Eigen::VectorXd alpha_acc, alpha_try;
  Eigen::VectorXd beta_acc, beta_try;
  Eigen::VectorXd lambda_acc, lambda_try;
  double tau_acc = 0, tau_try = 0, rho_acc = 0, rho_try = 0;

  AcceptTally(int K, int J)
      : alpha_acc(Eigen::VectorXd::Zero(K)), alpha_try(Eigen::VectorXd::Zero(K)),
        beta_acc(Eigen::VectorXd::Zero(J)), beta_try(Eigen::VectorXd::Zero(J)),
        lambda_acc(Eigen::VectorXd::Zero(J)), lambda_try(Eigen::VectorXd::Zero(J)) {}

  void reset() {
    alpha_acc.setZero(); alpha_try.setZero();
    beta_acc.setZero(); beta_try.setZero();
    lambda_acc.setZero(); lambda_try.setZero();
    tau_acc = tau_try = rho_acc = rho_try = 0;
  }

  void add(const AcceptTally& o) {
    alpha_acc += o.alpha_acc; alpha_try += o.alpha_try;
    beta_acc += o.beta_acc; beta_try += o.beta_try;
    lambda_acc += o.lambda_acc; lambda_try += o.lambda_try;
    tau_acc += o.tau_acc; tau_try += o.tau_try;
    rho_acc += o.rho_acc; rho_try += o.rho_try;
  }
};

struct ChainOutput {
  Eigen::MatrixXd draws;  // retained states, one row per draw
  std::vector<std::string> column_names;
  std::map<std::string, double> accept_rates;      // post-burn-in, per block
  Eigen::MatrixXd step_history;                    // reviews x 5 block means
  std::uint64_t seed = 0;
  int K = 0, J = 0;

  int n_draws() const { return static_cast<int>(draws.rows()); }
  // Column layout: alpha(K), beta_tilde(J), log_lambda(J), log_tau, rho, beta(J)
  int col_alpha(int k) const { return k; }
  int col_beta_tilde(int j) const { return K + j; }
  int col_log_lambda(int j) const { return K + J + j; }
  int col_log_tau() const { return K + 2 * J; }
  int col_rho() const { return K + 2 * J + 1; }
  int col_beta(int j) const { return K + 2 * J + 2 + j; }
};

namespace detail {

// Mutable per-chain scratch: linear predictor split into the W and X parts,
// CAR quadratic-form pieces, and the current likelihood value. All deltas in
// the sweep are computed against these caches; they are rebuilt from scratch
// only on tau/rho structure changes.
struct SweepCache {
  Eigen::VectorXd eta_w;   // W alpha
  Eigen::VectorXd eta_x;   // X beta
  Eigen::VectorXd abt;     // A beta_tilde
  double diag_quad = 0;    // sum_j d_j beta_tilde_j^2
  double cross = 0;        // beta_tilde' A beta_tilde
  double ll = 0;

  void rebuild(const ParamState& s, const ModelSpec& spec, const Dataset& data) {
    const auto& g = *spec.graph;
    eta_w = data.W * s.alpha;
    eta_x = data.X * beta_from(s, spec);
    abt = g.adjacency() * s.beta_tilde;
    diag_quad = 0;
    for (int j = 0; j < g.size(); ++j)
      diag_quad += g.degrees()[j] * s.beta_tilde[j] * s.beta_tilde[j];
    cross = s.beta_tilde.dot(abt);
    ll = data.n() == 0 ? 0.0 : log_likelihood_eta(eta_w + eta_x, data);
  }
};

inline double ll_with_shift(const Eigen::VectorXd& eta_base,
                            const Eigen::VectorXd& col, double delta,
                            const Dataset& data) {
  if (data.n() == 0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    const double e = eta_base[i] + delta * col[i];
    if (e > 700.0 || !std::isfinite(e)) return kNegInf;
    s += data.y[i] * e - std::exp(e);
  }
  return s - data.log_y_factorial_sum();
}

inline bool accept(double log_ratio, RngStream& rng) {
  if (!std::isfinite(log_ratio)) return log_ratio > 0;  // -inf rejects, +inf accepts
  if (log_ratio >= 0) return true;
  return std::log(rng.uniform()) < log_ratio;
}

}  // namespace detail

// One full Metropolis-within-Gibbs sweep. Update order is fixed:
// each alpha_k, each beta_tilde_j, each lambda_j, tau, then rho
// (rho on the logit scale with Jacobian; skipped under a pinned prior).
// Non-finite proposal posteriors reject automatically.
inline void sweep(ParamState& s, const ModelSpec& spec, const Dataset& data,
                  const StepSizes& steps, detail::SweepCache& cache,
                  AcceptTally& tally, RngStream& rng) {
  const auto& g = *spec.graph;
  const int K = static_cast<int>(s.alpha.size());
  const int J = g.size();
  const double zeta2 = spec.zeta * spec.zeta;

  // alpha block
  for (int k = 0; k < K; ++k) {
    const double a = s.alpha[k];
    const double a_new = a + steps.alpha[k] * rng.normal();
    const double ll_new =
        detail::ll_with_shift(cache.eta_x + cache.eta_w, data.W.col(k), a_new - a, data);
    const double d_prior = -(a_new * a_new - a * a) / (2.0 * zeta2);
    tally.alpha_try[k] += 1;
    if (detail::accept(ll_new - cache.ll + d_prior, rng)) {
      cache.eta_w += (a_new - a) * data.W.col(k);
      cache.ll = ll_new;
      s.alpha[k] = a_new;
      tally.alpha_acc[k] += 1;
    }
  }

  const double tau = spec.tau_value(s);

  // beta_tilde block
  for (int j = 0; j < J; ++j) {
    const double b = s.beta_tilde[j];
    const double b_new = b + steps.beta[j] * rng.normal();
    const double db = b_new - b;
    const double dbeta = tau * spec.lambda_value(s, j) * db;
    const double ll_new =
        detail::ll_with_shift(cache.eta_w + cache.eta_x, data.X.col(j), dbeta, data);
    const double dj = g.degrees()[j];
    const double d_quad = dj * (b_new * b_new - b * b) - 2.0 * s.rho * db * cache.abt[j];
    tally.beta_try[j] += 1;
    if (detail::accept(ll_new - cache.ll - 0.5 * d_quad, rng)) {
      cache.eta_x += dbeta * data.X.col(j);
      cache.ll = ll_new;
      cache.diag_quad += dj * (b_new * b_new - b * b);
      cache.cross += 2.0 * db * cache.abt[j];
      for (SpMat::InnerIterator it(g.adjacency(), j); it; ++it)
        cache.abt[it.row()] += db * it.value();
      s.beta_tilde[j] = b_new;
      tally.beta_acc[j] += 1;
    }
  }

  // lambda block
  if (!spec.lambda_prior.fixed()) {
    for (int j = 0; j < J; ++j) {
      const double v = s.log_lambda[j];
      const double v_new = v + steps.lambda[j] * rng.normal();
      const double lam_old = spec.positivity == PositivityMode::LogScale ? std::exp(v) : v;
      const double lam_new =
          spec.positivity == PositivityMode::LogScale ? std::exp(v_new) : v_new;
      const double dbeta = tau * (lam_new - lam_old) * s.beta_tilde[j];
      const double ll_new =
          detail::ll_with_shift(cache.eta_w + cache.eta_x, data.X.col(j), dbeta, data);
      const double d_prior =
          scale_prior_term(spec.lambda_prior, v_new, spec.positivity, spec.eta) -
          scale_prior_term(spec.lambda_prior, v, spec.positivity, spec.eta);
      tally.lambda_try[j] += 1;
      if (detail::accept(ll_new - cache.ll + d_prior, rng)) {
        cache.eta_x += dbeta * data.X.col(j);
        cache.ll = ll_new;
        s.log_lambda[j] = v_new;
        tally.lambda_acc[j] += 1;
      }
    }
  }

  // tau block
  if (!spec.tau_prior.fixed()) {
    const double v = s.log_tau;
    const double v_new = v + steps.tau * rng.normal();
    const double tau_old = spec.tau_value(s);
    const double tau_new =
        spec.positivity == PositivityMode::LogScale ? std::exp(v_new) : v_new;
    // beta scales uniformly, so eta_x scales by tau_new/tau_old
    Eigen::VectorXd eta_x_new;
    if (tau_old != 0.0) {
      eta_x_new = (tau_new / tau_old) * cache.eta_x;
    } else {
      ParamState tmp = s;
      tmp.log_tau = v_new;
      eta_x_new = data.X * beta_from(tmp, spec);
    }
    const double ll_new =
        data.n() == 0 ? 0.0 : log_likelihood_eta(cache.eta_w + eta_x_new, data);
    const double d_prior =
        scale_prior_term(spec.tau_prior, v_new, spec.positivity, spec.eta) -
        scale_prior_term(spec.tau_prior, v, spec.positivity, spec.eta);
    tally.tau_try += 1;
    if (detail::accept(ll_new - cache.ll + d_prior, rng)) {
      cache.eta_x.swap(eta_x_new);
      cache.ll = ll_new;
      s.log_tau = v_new;
      tally.tau_acc += 1;
    }
  }

  // rho block: Gaussian random walk on logit(rho) with Jacobian
  if (!spec.rho_prior.fixed()) {
    const double r = s.rho;
    const double z = std::log(r) - std::log1p(-r);
    const double z_new = z + steps.rho * rng.normal();
    const double r_new = 1.0 / (1.0 + std::exp(-z_new));
    if (r_new > 0.0 && r_new < 1.0) {
      CarField f_old(g, r), f_new(g, r_new);
      const double quad_old = cache.diag_quad - r * cache.cross;
      const double quad_new = cache.diag_quad - r_new * cache.cross;
      const double log_ratio = 0.5 * (f_new.log_det() - f_old.log_det()) -
                               0.5 * (quad_new - quad_old) +
                               std::log(r_new * (1.0 - r_new)) -
                               std::log(r * (1.0 - r));
      tally.rho_try += 1;
      if (detail::accept(log_ratio, rng)) {
        s.rho = r_new;
        tally.rho_acc += 1;
      }
    } else {
      tally.rho_try += 1;  // boundary overflow: automatic reject
    }
  }
}

// Convenience wrapper matching the one-shot contract: builds the cache,
// runs a single sweep, returns the tallies.
inline AcceptTally sweep(ParamState& s, const ModelSpec& spec, const Dataset& data,
                         const StepSizes& steps, RngStream& rng) {
  detail::SweepCache cache;
  cache.rebuild(s, spec, data);
  AcceptTally tally(static_cast<int>(s.alpha.size()), spec.graph->size());
  sweep(s, spec, data, steps, cache, tally, rng);
  return tally;
}

inline ChainOutput run_chain(const ModelSpec& spec, const Dataset& data,
                             const SamplerConfig& cfg, int chain_id) {
  spec.validate();
  cfg.validate();
  data.validate();
  const auto& g = *spec.graph;
  const int K = data.K(), J = g.size();
  if (data.n() > 0 && data.J() != J)
    throw std::invalid_argument("run_chain: X columns must match graph size");

  RngStream rng = RngStream::derive(cfg.seed, static_cast<std::uint64_t>(chain_id));
  ParamState s = initial_state(spec, K);
  if (cfg.init_jitter > 0.0) {
    for (int k = 0; k < K; ++k) s.alpha[k] += cfg.init_jitter * rng.normal();
    for (int j = 0; j < J; ++j) s.beta_tilde[j] += cfg.init_jitter * rng.normal();
    if (!spec.lambda_prior.fixed())
      for (int j = 0; j < J; ++j) s.log_lambda[j] += cfg.init_jitter * rng.normal();
    if (!spec.tau_prior.fixed()) s.log_tau += cfg.init_jitter * rng.normal();
  }

  if (!std::isfinite(log_posterior(s, spec, data)))
    throw std::runtime_error("run_chain: initial log-posterior is not finite; check data scaling");

  StepSizes steps;
  steps.alpha = Eigen::VectorXd::Constant(K, cfg.init_step_alpha);
  steps.beta = Eigen::VectorXd::Constant(J, cfg.init_step_beta);
  steps.lambda = Eigen::VectorXd::Constant(J, cfg.init_step_lambda);
  steps.tau = cfg.init_step_tau;
  steps.rho = cfg.init_step_rho;

  detail::SweepCache cache;
  cache.rebuild(s, spec, data);

  const int n_keep = (cfg.n_iter - cfg.burn_in) / cfg.thin;
  ChainOutput out;
  out.K = K;
  out.J = J;
  out.seed = cfg.seed;
  out.draws.resize(n_keep, K + 3 * J + 2);
  out.column_names.clear();
  for (int k = 0; k < K; ++k) out.column_names.push_back("alpha_" + std::to_string(k));
  for (int j = 0; j < J; ++j) out.column_names.push_back("beta_tilde_" + std::to_string(j));
  for (int j = 0; j < J; ++j) out.column_names.push_back("log_lambda_" + std::to_string(j));
  out.column_names.push_back("log_tau");
  out.column_names.push_back("rho");
  for (int j = 0; j < J; ++j) out.column_names.push_back("beta_" + std::to_string(j));

  AcceptTally window(K, J);  // since last adaptation review
  AcceptTally post(K, J);    // post-burn-in, reported
  std::vector<Eigen::RowVectorXd> reviews;
  auto block_means = [&](const StepSizes& st) {
    Eigen::RowVectorXd r(5);
    r << st.alpha.mean(), st.beta.mean(), st.lambda.mean(), st.tau, st.rho;
    return r;
  };

  int kept = 0;
  for (int it = 0; it < cfg.n_iter; ++it) {
    sweep(s, spec, data, steps, cache, window, rng);

    const bool in_burn = it < cfg.burn_in;
    if (in_burn && (it + 1) % cfg.adapt_interval == 0) {
      auto rate = [](double acc, double tries) { return tries > 0 ? acc / tries : 0.0; };
      for (int k = 0; k < K; ++k)
        steps.alpha[k] = adapt_step(rate(window.alpha_acc[k], window.alpha_try[k]),
                                    steps.alpha[k], cfg);
      for (int j = 0; j < J; ++j)
        steps.beta[j] =
            adapt_step(rate(window.beta_acc[j], window.beta_try[j]), steps.beta[j], cfg);
      if (!spec.lambda_prior.fixed())
        for (int j = 0; j < J; ++j)
          steps.lambda[j] = adapt_step(rate(window.lambda_acc[j], window.lambda_try[j]),
                                       steps.lambda[j], cfg);
      if (window.tau_try > 0)
        steps.tau = adapt_step(window.tau_acc / window.tau_try, steps.tau, cfg);
      if (window.rho_try > 0)
        steps.rho = adapt_step(window.rho_acc / window.rho_try, steps.rho, cfg);
      reviews.push_back(block_means(steps));
      window.reset();
    }
    if (!in_burn) {
      post.add(window);
      window.reset();
      if ((it - cfg.burn_in + 1) % cfg.thin == 0 && kept < n_keep) {
        Eigen::VectorXd beta = beta_from(s, spec);
        auto row = out.draws.row(kept);
        row.segment(0, K) = s.alpha.transpose();
        row.segment(K, J) = s.beta_tilde.transpose();
        row.segment(K + J, J) = s.log_lambda.transpose();
        row[K + 2 * J] = s.log_tau;
        row[K + 2 * J + 1] = s.rho;
        row.segment(K + 2 * J + 2, J) = beta.transpose();
        ++kept;
      }
    }
  }

  auto rate = [](double acc, double tries) { return tries > 0 ? acc / tries : 0.0; };
  out.accept_rates["alpha"] = rate(post.alpha_acc.sum(), post.alpha_try.sum());
  out.accept_rates["beta_tilde"] = rate(post.beta_acc.sum(), post.beta_try.sum());
  out.accept_rates["lambda"] = rate(post.lambda_acc.sum(), post.lambda_try.sum());
  out.accept_rates["tau"] = rate(post.tau_acc, post.tau_try);
  out.accept_rates["rho"] = rate(post.rho_acc, post.rho_try);
  out.step_history.resize(static_cast<int>(reviews.size()) + 1, 5);
  for (std::size_t i = 0; i < reviews.size(); ++i) out.step_history.row(i) = reviews[i];
  out.step_history.row(out.step_history.rows() - 1) = block_means(steps);  // frozen
  return out;
}

// Split potential scale reduction factor over >= 2 chains of equal length.
// Returns +inf when the pooled within-chain variance is degenerate.
inline double gelman_rubin(const std::vector<const ChainOutput*>& chains, int column) {
  if (chains.size() < 2) throw std::invalid_argument("gelman_rubin: need >= 2 chains");
  const int len = chains.front()->n_draws();
  for (const auto* c : chains)
    if (c->n_draws() != len)
      throw std::invalid_argument("gelman_rubin: chains must have equal length");
  const int half = len / 2;
  if (half < 5) throw std::invalid_argument("gelman_rubin: retained length >= 10 required");

  std::vector<Eigen::VectorXd> seqs;
  for (const auto* c : chains) {
    seqs.push_back(c->draws.col(column).head(half));
    seqs.push_back(c->draws.col(column).tail(half));
  }
  const int m = static_cast<int>(seqs.size());
  const double n = half;
  double grand = 0.0;
  std::vector<double> means(m);
  for (int i = 0; i < m; ++i) {
    means[i] = seqs[i].mean();
    grand += means[i];
  }
  grand /= m;
  double w = 0.0, b = 0.0;
  for (int i = 0; i < m; ++i) {
    w += (seqs[i].array() - means[i]).square().sum() / (n - 1.0);
    b += (means[i] - grand) * (means[i] - grand);
  }
  w /= m;
  b *= n / (m - 1.0);
  if (w <= 0.0) return std::numeric_limits<double>::infinity();
  const double var_plus = (n - 1.0) / n * w + b / n;
  return std::sqrt(var_plus / w);
}

}  // namespace sgl
