// Acceptance gate: one PASS/FAIL line per top-level claim, with pinned
// tolerances and wall-clock budgets. Exits nonzero if any criterion fails.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgl/backtest.hpp"
#include "sgl/basis.hpp"
#include "sgl/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct Criterion {
  std::string name;
  double time_budget_s;
  std::function<bool(std::ostream&)> run;
};

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  // n must be even
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// --- 1. scale-prior normalization ------------------------------------------

bool check_prior_normalization(std::ostream& log) {
  bool ok = true;
  // log-Cauchy over (0, inf) via x = exp(pi * tan(theta)); the transformed
  // integrand is evaluated in log space so no overflow occurs near the ends
  auto lc = [](double theta) {
    const double u = M_PI * std::tan(theta);
    const double sec2 = 1.0 + std::tan(theta) * std::tan(theta);
    // beyond |u| ~ 600, exp(u) leaves double range; use the exact algebraic
    // composition density(e^u)*e^u = 1/(pi^2+u^2) for those wings
    const double fx_x = std::abs(u) < 600.0
                            ? std::exp(sgl::log_density_log_cauchy(std::exp(u)) + u)
                            : 1.0 / (M_PI * M_PI + u * u);
    return fx_x * M_PI * sec2;
  };
  const double eps = 1e-9;
  const double i_lc = simpson(lc, -M_PI / 2 + eps, M_PI / 2 - eps, 20000);
  log << "log-Cauchy integral " << i_lc;
  ok &= std::abs(i_lc - 1.0) < 1e-6;

  // half-Cauchy over (0, inf) via x = tan(theta)
  auto hc = [](double theta) {
    const double t = std::tan(theta);
    return std::exp(sgl::log_density_half_cauchy(t)) * (1.0 + t * t);
  };
  const double i_hc = simpson(hc, eps, M_PI / 2 - eps, 20000);
  log << ", half-Cauchy " << i_hc;
  ok &= std::abs(i_hc - 1.0) < 1e-6;

  for (int J : {10, 500}) {
    auto tc = [J](double x) { return std::exp(sgl::log_density_truncated_cauchy(x, J)); };
    const double i_tc = simpson(tc, 1.0 / J, 1.0, 20000);
    log << ", truncated(J=" << J << ") " << i_tc;
    ok &= std::abs(i_tc - 1.0) < 1e-6;
  }
  return ok;
}

// --- 2. CAR log-determinant and sampling -----------------------------------

bool check_car_algebra(std::ostream& log) {
  bool ok = true;
  auto g = sgl::LatticeGraph::lattice(3, 3);
  for (double rho : {0.0, 0.4, 0.8}) {
    sgl::CarField field(g, rho);
    Eigen::MatrixXd q = Eigen::MatrixXd(field.precision());
    // dense oracle: sum of log eigenvalues
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q, Eigen::EigenvaluesOnly);
    const double dense_ld = es.eigenvalues().array().log().sum();
    const double rel = std::abs(field.log_det() - dense_ld) / std::abs(dense_ld);
    log << "rho=" << rho << " logdet rel err " << rel;
    ok &= rel < 1e-8;

    // empirical covariance of 2e5 exact draws vs the dense inverse
    const int n_draw = 200000, J = g.size();
    Eigen::MatrixXd qinv = q.llt().solve(Eigen::MatrixXd::Identity(J, J));
    sgl::RngStream rng(static_cast<std::uint64_t>(1 + 10 * rho));
    Eigen::MatrixXd sum2 = Eigen::MatrixXd::Zero(J, J);
    Eigen::VectorXd sum1 = Eigen::VectorXd::Zero(J);
    for (int i = 0; i < n_draw; ++i) {
      Eigen::VectorXd z = field.sample(rng);
      sum1 += z;
      sum2 += z * z.transpose();
    }
    Eigen::VectorXd mean = sum1 / n_draw;
    Eigen::MatrixXd cov = sum2 / n_draw - mean * mean.transpose();
    const double max_err = (cov - qinv).cwiseAbs().maxCoeff();
    log << ", cov max err " << max_err << "; ";
    ok &= max_err < 0.02;
  }
  return ok;
}

// --- 3. induced prior covariance of beta -----------------------------------

bool check_induced_covariance(std::ostream& log) {
  bool ok = true;
  auto g = sgl::LatticeGraph::lattice(3, 3);
  const double tau = 0.7, rho = 0.6;
  sgl::CarField field(g, rho);
  sgl::RngStream rng(17);
  Eigen::VectorXd lambda(g.size());
  for (int j = 0; j < g.size(); ++j) lambda[j] = 0.5 + rng.uniform();

  Eigen::MatrixXd expect = sgl::induced_covariance(field, tau, lambda);
  const int n_draw = 200000, J = g.size();
  Eigen::MatrixXd sum2 = Eigen::MatrixXd::Zero(J, J);
  Eigen::VectorXd sum1 = Eigen::VectorXd::Zero(J);
  for (int i = 0; i < n_draw; ++i) {
    Eigen::VectorXd beta = tau * lambda.cwiseProduct(field.sample(rng));
    sum1 += beta;
    sum2 += beta * beta.transpose();
  }
  Eigen::VectorXd mean = sum1 / n_draw;
  Eigen::MatrixXd cov = sum2 / n_draw - mean * mean.transpose();
  const double max_err = (cov - expect).cwiseAbs().maxCoeff();
  log << "MC cov max err " << max_err;
  ok &= max_err < 0.02;

  // opposite corners of the 3x3 grid sit at graph distance 4: every path
  // term below that length vanishes
  for (int len = 1; len <= 3; ++len) {
    const double v = sgl::path_series_covariance(field, tau, lambda[0], lambda[8], 0, 8, len);
    ok &= v == 0.0;
  }
  log << ", corner path terms below distance 4 all zero";
  return ok;
}

// --- 4. sampler validity ----------------------------------------------------

bool check_sampler_validity(std::ostream& log) {
  bool ok = true;

  // (a) prior-only run: retained rho draws must match Uniform(0,1)
  auto g = sgl::LatticeGraph::lattice(2, 2);
  {
    auto spec = sgl::make_model("CAR", g);
    sgl::Dataset d;
    d.y = Eigen::VectorXd(0);
    d.W = Eigen::MatrixXd(0, 1);
    d.X = Eigen::MatrixXd(0, 4);
    sgl::SamplerConfig cfg;
    cfg.n_iter = 60000;
    cfg.burn_in = 10000;
    cfg.thin = 1;
    cfg.seed = 11;
    cfg.init_step_alpha = 1.5;
    cfg.init_step_beta = 1.5;
    cfg.init_step_tau = 2.0;
    cfg.init_step_rho = 3.0;
    sgl::ChainOutput out = sgl::run_chain(spec, d, cfg, 0);
    const auto rho = out.draws.col(out.col_rho());
    const double mean = rho.mean();
    const double var = (rho.array() - mean).square().sum() / (rho.size() - 1);
    log << "prior rho mean " << mean << " var " << var;
    ok &= std::abs(mean - 0.5) < 0.02;
    ok &= std::abs(var - 1.0 / 12.0) < 0.01;
  }

  // (b) one-parameter toy posterior vs grid quadrature
  {
    auto g12 = sgl::LatticeGraph::lattice(1, 2);
    sgl::ModelSpec spec;
    spec.graph = &g12;
    spec.tau_prior = sgl::ScalePrior::fixed_one();
    spec.lambda_prior = sgl::ScalePrior::fixed_one();
    spec.rho_prior = {sgl::RhoPriorKind::FixedZero};
    sgl::Dataset d;
    d.y = (Eigen::VectorXd(5) << 1, 2, 0, 3, 1).finished();
    d.W = Eigen::MatrixXd::Ones(5, 1);
    d.X = Eigen::MatrixXd::Zero(5, 2);
    sgl::SamplerConfig cfg;
    cfg.n_iter = 110000;
    cfg.burn_in = 10000;
    cfg.thin = 1;
    cfg.seed = 5;
    cfg.init_step_alpha = 0.5;
    sgl::ChainOutput out = sgl::run_chain(spec, d, cfg, 0);
    Eigen::VectorXd a = out.draws.col(out.col_alpha(0));
    std::sort(a.data(), a.data() + a.size());

    // quadrature: posterior density prop to exp(-a^2/2 + a*sum(y) - n*e^a)
    const int grid_n = 40000;
    const double lo = -6.0, hi = 4.0, h = (hi - lo) / grid_n;
    std::vector<double> dens(grid_n + 1), cdf(grid_n + 1, 0.0);
    for (int i = 0; i <= grid_n; ++i) {
      const double x = lo + i * h;
      dens[i] = std::exp(-0.5 * x * x + 7.0 * x - 5.0 * std::exp(x));
    }
    for (int i = 1; i <= grid_n; ++i)
      cdf[i] = cdf[i - 1] + 0.5 * (dens[i - 1] + dens[i]) * h;
    const double total = cdf[grid_n];
    auto quantile = [&](double p) {
      const double target = p * total;
      int i = 1;
      while (i < grid_n && cdf[i] < target) ++i;
      const double frac = (target - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
      return lo + (i - 1 + frac) * h;
    };
    for (double p : {0.1, 0.5, 0.9}) {
      const double emp = a[static_cast<int>(p * (a.size() - 1))];
      const double exact = quantile(p);
      log << ", q" << p << " " << emp << " vs " << exact;
      ok &= std::abs(emp - exact) < 0.02;
    }
  }

  // (c) five jittered chains agree. The CAR model (local scales pinned at 1)
  // has a fully identified parameterization, so every stored column must
  // converge. For DLC the (tau, lambda_j) decomposition is only weakly
  // identified -- only the product enters the likelihood -- so split-Rhat is
  // required of the identified columns (alpha, beta_tilde, beta, rho) while
  // the raw scale columns are reported for transparency.
  {
    sgl::RngStream rng(123);
    const int n = 200, J = 4;
    sgl::Dataset d;
    d.W.resize(n, 1);
    d.X.resize(n, J);
    d.y.resize(n);
    for (int i = 0; i < n; ++i) {
      d.W(i, 0) = rng.normal();
      for (int j = 0; j < J; ++j) d.X(i, j) = 0.3 * rng.normal();
      d.y[i] = static_cast<double>(
          rng.poisson(std::exp(0.3 * d.W(i, 0) + 2.5 * d.X(i, 0))));
    }
    sgl::SamplerConfig cfg;
    cfg.n_iter = 30000;
    cfg.burn_in = 10000;
    cfg.thin = 2;
    cfg.adapt_interval = 100;
    cfg.n_chains = 5;
    cfg.init_jitter = 0.5;
    cfg.seed = 2;

    sgl::FitResult car_fit = sgl::run_fit(sgl::make_model("CAR", g), d, cfg, 5);
    log << ", 5-chain CAR max Rhat " << car_fit.max_rhat;
    ok &= car_fit.max_rhat < 1.1;

    sgl::FitResult dlc_fit = sgl::run_fit(sgl::make_model("DLC", g), d, cfg, 5);
    double ident = 0, scales = 0;
    for (std::size_t i = 0; i < dlc_fit.rhat.size(); ++i) {
      const std::string& nm = dlc_fit.rhat_names[i];
      if (nm.rfind("log_lambda", 0) == 0 || nm.rfind("log_tau", 0) == 0)
        scales = std::max(scales, dlc_fit.rhat[i]);
      else
        ident = std::max(ident, dlc_fit.rhat[i]);
    }
    log << ", DLC identified-column max Rhat " << ident << " (scale columns "
        << scales << ", product-only identified)";
    ok &= ident < 1.1;
  }
  return ok;
}

// --- 5. small-grid signal recovery -----------------------------------------

struct RecoveryResult {
  double fpr = 0, fnr = 0, beta_rmse = 0;
};

RecoveryResult run_recovery_replicate(const sgl::SimConfig& sim, const std::string& model,
                                      std::uint64_t sim_seed, std::uint64_t chain_seed,
                                      int n_iter, int burn_in,
                                      int adapt_interval = 500,
                                      double init_step_scales = 0.5) {
  sgl::SimConfig sc = sim;
  sc.seed = sim_seed;
  auto graph = sgl::LatticeGraph::lattice(sc.rows, sc.cols);
  sgl::SimDataset ds = sgl::generate(sc, graph);
  auto spec = sgl::make_model(model, graph);
  sgl::SamplerConfig cfg;
  cfg.n_iter = n_iter;
  cfg.burn_in = burn_in;
  cfg.thin = 5;
  cfg.seed = chain_seed;
  cfg.adapt_interval = adapt_interval;
  cfg.init_step_lambda = init_step_scales;
  cfg.init_step_tau = init_step_scales;
  sgl::ChainOutput chain = sgl::run_chain(spec, ds.train, cfg, 0);
  Eigen::MatrixXd draws = sgl::pooled_beta_draws({&chain});
  sgl::SelectionResult sel = sgl::select_regions_hpd(draws, 0.95);
  sgl::SelectionReport rep = sgl::selection_metrics(sel.active, ds.active_mask);
  Eigen::VectorXd beta_hat = draws.colwise().mean();
  RecoveryResult out;
  out.fpr = rep.fpr.value_or(0.0);
  out.fnr = rep.fnr.value_or(0.0);
  out.beta_rmse = sgl::estimation_metrics(beta_hat, ds.beta_star, ds.active_mask).beta_rmse;
  return out;
}

bool check_small_grid_recovery(std::ostream& log) {
  sgl::SimConfig sim;
  sim.rows = 4;
  sim.cols = 4;
  sim.n_train = 400;
  sim.n_test = 0;
  sim.pattern = sgl::SignalPattern::Adjacent;
  sim.block_rows = 2;
  sim.block_cols = 2;  // centered 4-cell block
  sim.b_star = 8.0;

  std::vector<std::future<RecoveryResult>> futs;
  for (int r = 0; r < 5; ++r)
    futs.push_back(std::async(std::launch::async, [&, r] {
      return run_recovery_replicate(sim, "DLC", 100 + r, 1 + r, 20000, 8000);
    }));
  double fpr = 0, fnr = 0;
  for (auto& f : futs) {
    RecoveryResult r = f.get();
    fpr += r.fpr;
    fnr += r.fnr;
  }
  fpr /= 5;
  fnr /= 5;
  log << "avg FNR " << fnr << " (need 0), avg FPR " << fpr << " (need <= " << 1.0 / 12
      << ")";
  return fnr == 0.0 && fpr <= 1.0 / 12.0 + 1e-12;
}

// --- 6. shrinkage-model comparison at reduced scale ------------------------

bool check_model_comparison(std::ostream& log) {
  sgl::SimConfig sim;
  sim.rows = 10;
  sim.cols = 10;
  sim.n_train = 100;
  sim.n_test = 0;
  sim.pattern = sgl::SignalPattern::Adjacent;
  sim.b_star = 6.0;
  sim.rho_x = 0.4;

  // 20000 sweeps with 100 covariates on 100 observations needs responsive
  // step-size adaptation (review every 50 sweeps, scale steps starting at the
  // prior scale) and a long burn-in to reach the stationary regime.
  const int reps = 10;
  std::vector<std::future<RecoveryResult>> dlc, hs;
  for (int r = 0; r < reps; ++r) {
    dlc.push_back(std::async(std::launch::async, [&, r] {
      return run_recovery_replicate(sim, "DLC", 900 + r, 1 + r, 20000, 12000, 50, 1.0);
    }));
    hs.push_back(std::async(std::launch::async, [&, r] {
      return run_recovery_replicate(sim, "HS", 900 + r, 1 + r, 20000, 12000, 50, 1.0);
    }));
  }
  int wins = 0;
  double dlc_fpr = 0;
  for (int r = 0; r < reps; ++r) {
    RecoveryResult a = dlc[r].get(), b = hs[r].get();
    if (a.beta_rmse < b.beta_rmse) ++wins;
    dlc_fpr += a.fpr;
  }
  dlc_fpr /= reps;
  log << "DLC beats HS on beta RMSE in " << wins << "/" << reps
      << " replicates (need >= 7), DLC mean FPR " << dlc_fpr << " (need <= 0.05)";
  return wins >= 7 && dlc_fpr <= 0.05;
}

// --- 7. HPD interval oracle -------------------------------------------------

bool check_hpd_oracle(std::ostream& log) {
  bool ok = true;
  sgl::RngStream rng(4);
  Eigen::VectorXd v(1000000);
  for (int i = 0; i < v.size(); ++i) v[i] = rng.normal();
  sgl::Interval iv = sgl::hpd_interval(v, 0.95);
  log << "95% HPD of 1e6 N(0,1) draws (" << iv.lower << ", " << iv.upper << ")";
  ok &= std::abs(iv.lower + 1.96) < 0.02;
  ok &= std::abs(iv.upper - 1.96) < 0.02;

  // exact agreement with the exhaustive shortest-window scan
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXd s(1000);
    for (int i = 0; i < s.size(); ++i)
      s[i] = rep % 2 ? rng.normal() : -std::log(1.0 - rng.uniform());
    for (double level : {0.5, 0.9, 0.95}) {
      sgl::Interval got = sgl::hpd_interval(s, level);
      Eigen::VectorXd sorted = s;
      std::sort(sorted.data(), sorted.data() + sorted.size());
      const int w = static_cast<int>(std::ceil(level * sorted.size()));
      int best = 0;
      for (int i = 0; i + w <= sorted.size(); ++i)
        if (sorted[i + w - 1] - sorted[i] < sorted[best + w - 1] - sorted[best]) best = i;
      ok &= got.lower == sorted[best] && got.upper == sorted[best + w - 1];
    }
  }
  log << ", exhaustive oracle exact on 1e3-sample inputs";
  return ok;
}

// --- 8. B-spline basis properties ------------------------------------------

double naive_bspline(const std::vector<double>& knots, int i, int p, double t,
                     bool last_span) {
  if (p == 0) {
    if (knots[i] <= t && t < knots[i + 1]) return 1.0;
    if (last_span && t == knots[i + 1] && knots[i] < knots[i + 1]) return 1.0;
    return 0.0;
  }
  double left = 0, right = 0;
  if (knots[i + p] > knots[i])
    left = (t - knots[i]) / (knots[i + p] - knots[i]) *
           naive_bspline(knots, i, p - 1, t, last_span);
  if (knots[i + p + 1] > knots[i + 1])
    right = (knots[i + p + 1] - t) / (knots[i + p + 1] - knots[i + 1]) *
            naive_bspline(knots, i + 1, p - 1, t, last_span);
  return left + right;
}

bool check_bspline(std::ostream& log) {
  bool ok = true;
  auto b = sgl::BSplineBasis1D::uniform(0.0, 10.0, 17, 3);
  sgl::RngStream rng(6);
  double worst_sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double t = 10.0 * rng.uniform();
    Eigen::VectorXd v = b.eval(t);
    worst_sum = std::max(worst_sum, std::abs(v.sum() - 1.0));
  }
  log << "partition-of-unity worst dev " << worst_sum;
  ok &= worst_sum < 1e-10;

  // naive recursion oracle on a smaller basis
  const int degree = 3, n_breaks = 5;
  auto b2 = sgl::BSplineBasis1D::uniform(0.0, 4.0, n_breaks, degree);
  std::vector<double> knots(degree + 1, 0.0);
  for (int i = 1; i < n_breaks - 1; ++i) knots.push_back(static_cast<double>(i));
  knots.insert(knots.end(), degree + 1, 4.0);
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    const double t = 4.0 * rng.uniform();
    Eigen::VectorXd got = b2.eval(t);
    for (int k = 0; k < b2.size(); ++k)
      worst = std::max(worst,
                       std::abs(got[k] - naive_bspline(knots, k, degree, t, t == 4.0)));
  }
  log << ", oracle worst dev " << worst;
  ok &= worst < 1e-12;
  return ok;
}

// --- 9. metric identities ---------------------------------------------------

bool check_metric_identities(std::ostream& log) {
  bool ok = true;
  sgl::RngStream rng(7);
  double worst = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const int J = 3 + static_cast<int>(rng.uniform() * 30);
    Eigen::VectorXd hat(J), star(J);
    std::vector<bool> mask(J);
    for (int j = 0; j < J; ++j) {
      hat[j] = rng.normal();
      star[j] = rng.normal();
      mask[j] = rng.uniform() < 0.5;
    }
    auto r = sgl::estimation_metrics(hat, star, mask);
    int ns = 0;
    for (bool m : mask) ns += m;
    const double lhs = r.beta_rmse * r.beta_rmse * J;
    const double rhs =
        (r.signal_rmse ? *r.signal_rmse * *r.signal_rmse * ns : 0.0) +
        (r.noise_rmse ? *r.noise_rmse * *r.noise_rmse * (J - ns) : 0.0);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  log << "pooled-RMSE identity worst dev " << worst;
  ok &= worst < 1e-12;

  for (int rep = 0; rep < 50; ++rep) {
    const int t = 2 + static_cast<int>(rng.uniform() * 20);
    Eigen::VectorXd y(t), yh(t);
    for (int i = 0; i < t; ++i) {
      y[i] = std::floor(8 * rng.uniform());
      yh[i] = 8 * rng.uniform();
    }
    auto r = sgl::forecast_metrics(y, yh);
    ok &= r.mae <= r.rmse + 1e-12 && r.rmse <= r.max_ae + 1e-12;
  }
  Eigen::VectorXd y = (Eigen::VectorXd(3) << 1, 4, 2).finished();
  ok &= *sgl::forecast_metrics(y, y).sdr == 1.0;
  ok &= *sgl::forecast_metrics(y, Eigen::VectorXd::Constant(3, 2.0)).sdr == 0.0;
  log << "; mae<=rmse<=max_ae held; SDR exact on perfect/constant predictors";
  return ok;
}

// --- 10. rolling-backtest protocol -----------------------------------------

bool check_backtest_protocol(std::ostream& log) {
  int wins = 0;
  const int runs = 5;
  for (int r = 1; r <= runs; ++r) {
    sgl::SimConfig sim;
    sim.rows = 3;
    sim.cols = 3;
    sim.n_train = 30;  // 30-year series
    sim.n_test = 0;
    sim.pattern = sgl::SignalPattern::Custom;
    sim.custom_mask.assign(9, false);
    sim.custom_mask[4] = sim.custom_mask[5] = true;
    sim.b_star = 6.0;
    sim.seed = 500 + r;
    auto graph = sgl::LatticeGraph::lattice(3, 3);
    sgl::SimDataset ds = sgl::generate(sim, graph);

    sgl::BacktestRequest req;
    req.y = ds.train.y;
    req.w = ds.train.W;
    req.x = ds.train.X;
    req.graph = &graph;
    // Earliest origin with enough history to fit 9 spatial covariates stably.
    req.start = 20;
    req.end = 29;
    req.ma_window = 5;
    req.sampler.n_iter = 4000;
    req.sampler.burn_in = 2000;
    req.sampler.thin = 1;
    req.sampler.seed = static_cast<std::uint64_t>(r);
    auto dlc = sgl::backtest_model("DLC", req);
    auto ma = sgl::backtest_model("MA", req);
    log << (r > 1 ? "; " : "") << "run " << r << " MAE DLC " << dlc.report.mae
        << " vs MA " << ma.report.mae;
    if (dlc.report.mae < ma.report.mae) ++wins;
  }
  log << " => " << wins << "/" << runs << " wins (need >= 4)";
  return wins >= 4;
}

// --- 11. rerun determinism of the command-line pipeline ---------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SGL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : (status >> 8) & 0xff;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool check_determinism(std::ostream& log) {
  fs::path work = fs::temp_directory_path() / "sgl_acceptance_determinism";
  fs::remove_all(work);
  fs::create_directories(work);
  {
    std::ofstream cfg(work / "run.json");
    cfg << R"({
  "seed": 9,
  "replicates": 1,
  "simulate": {"rows": 3, "cols": 3, "n_train": 30, "n_test": 8,
               "pattern": "custom", "custom_mask": [0,0,0,0,1,1,0,0,0],
               "b_star": 5.0},
  "sampler": {"n_iter": 800, "burn_in": 400, "thin": 1, "n_chains": 1},
  "backtest": {"start": 20, "end": 24, "models": ["DLC", "MA"]}
})";
  }
  const std::string cfg_arg = " --config " + (work / "run.json").string();

  auto same = [&](const fs::path& a, const fs::path& b, const std::string& f,
                  std::ostream& l) {
    const bool eq = slurp(a / f) == slurp(b / f) && !slurp(a / f).empty();
    if (!eq) l << " [mismatch: " << f << "]";
    return eq;
  };

  bool ok = true;
  for (int pass = 0; pass < 2; ++pass) {
    const std::string suffix = pass ? "_b" : "_a";
    ok &= run_cli("simulate" + cfg_arg + " --out " + (work / ("scen" + suffix)).string()) == 0;
  }
  fs::path scen_a = work / "scen_a" / "scenario_000";
  fs::path scen_b = work / "scen_b" / "scenario_000";
  for (const char* f : {"train.csv", "test.csv", "beta_star.csv", "mask.csv",
                        "scenario.json"})
    ok &= same(scen_a, scen_b, f, log);
  log << "simulate reruns identical";

  for (int pass = 0; pass < 2; ++pass) {
    const std::string suffix = pass ? "_b" : "_a";
    ok &= run_cli("fit" + cfg_arg + " --data " + scen_a.string() + " --out " +
                  (work / ("run" + suffix)).string()) == 0;
  }
  for (const char* f : {"chain_0.csv", "summary.csv", "selection.csv",
                        "selection_grid.csv", "metrics.json"})
    ok &= same(work / "run_a", work / "run_b", f, log);
  log << "; fit reruns identical";

  for (int pass = 0; pass < 2; ++pass) {
    const std::string suffix = pass ? "_b" : "_a";
    ok &= run_cli("backtest" + cfg_arg + " --data " + scen_a.string() + " --out " +
                  (work / ("bt" + suffix)).string()) == 0;
  }
  for (const char* f : {"backtest_table.csv", "predictions_DLC.csv",
                        "predictions_MA.csv"})
    ok &= same(work / "bt_a", work / "bt_b", f, log);
  log << "; backtest reruns identical";
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"prior-normalization", 1.0, check_prior_normalization},
      {"car-algebra", 10.0, check_car_algebra},
      {"induced-covariance", 30.0, check_induced_covariance},
      {"sampler-validity", 120.0, check_sampler_validity},
      {"small-grid-recovery", 600.0, check_small_grid_recovery},
      {"model-comparison-direction", 7200.0, check_model_comparison},
      {"hpd-oracle", 60.0, check_hpd_oracle},
      {"bspline-properties", 30.0, check_bspline},
      {"metric-identities", 10.0, check_metric_identities},
      {"backtest-protocol", 600.0, check_backtest_protocol},
      {"determinism", 300.0, check_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail << " exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.time_budget_s) {
      ok = false;
      detail << " [exceeded " << c.time_budget_s << " s budget]";
    }
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.name << " (" << secs
              << " s): " << detail.str() << "\n";
    std::cout.flush();
    if (!ok) ++failures;
  }
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                              : std::to_string(failures) + " CRITERIA FAILED")
            << "\n";
  return failures == 0 ? 0 : 1;
}
