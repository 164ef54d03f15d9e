// Command-line entry points: scenario simulation, model fitting, region
// selection, prediction, rolling backtests and report aggregation.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sgl/backtest.hpp"
#include "sgl/basis.hpp"
#include "sgl/config.hpp"
#include "sgl/pipeline.hpp"

namespace fs = std::filesystem;
using sgl::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitConvergence = 4;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string data_dir;   // scenario directory (fit/predict)
  std::string run_dir;    // completed fit directory (select/predict)
  std::vector<std::string> report_inputs;
  std::string rule = "";
  double level = 0.0;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool allow_unconverged = false;
};

sgl::RunConfig load_config(const Options& opt) {
  sgl::RunConfig cfg = sgl::load_run_config(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.threads > 0) cfg.threads = opt.threads;
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  if (!opt.rule.empty()) cfg.selection.rule = opt.rule;
  if (opt.level > 0) cfg.selection.level = opt.level;
  return cfg;
}

json sampler_echo(const sgl::SamplerConfig& s) {
  return json{{"n_iter", s.n_iter},
              {"burn_in", s.burn_in},
              {"adapt_interval", s.adapt_interval},
              {"adapt_factor", s.adapt_factor},
              {"accept_low", s.accept_low},
              {"accept_high", s.accept_high},
              {"n_chains", s.n_chains},
              {"thin", s.thin},
              {"seed", s.seed},
              {"init_jitter", s.init_jitter}};
}

int cmd_simulate(const Options& opt) {
  sgl::RunConfig cfg = load_config(opt);
  if (!cfg.sim) throw sgl::ConfigError("simulate: config needs a 'simulate' section");
  fs::create_directories(cfg.output_dir);

  json manifest;
  manifest["replicates"] = cfg.replicates;
  manifest["base_seed"] = cfg.seed;
  for (int r = 0; r < cfg.replicates; ++r) {
    sgl::SimConfig sc = *cfg.sim;
    sc.seed = cfg.seed + static_cast<std::uint64_t>(r);
    sgl::LatticeGraph graph = sgl::LatticeGraph::lattice(sc.rows, sc.cols);
    sgl::SimDataset ds = sgl::generate(sc, graph);
    char name[32];
    std::snprintf(name, sizeof(name), "scenario_%03d", r);
    sgl::write_scenario_dir(fs::path(cfg.output_dir) / name, sc, ds);
    manifest["seeds"].push_back(sc.seed);
  }
  std::ofstream mf(fs::path(cfg.output_dir) / "manifest.json");
  mf << manifest.dump(2) << "\n";
  std::cout << "wrote " << cfg.replicates << " scenario(s) to " << cfg.output_dir << "\n";
  return kExitOk;
}

struct LoadedData {
  sgl::Dataset train, test;
  sgl::LatticeGraph graph;          // graph over model coefficients
  sgl::LatticeGraph region_graph;   // original region lattice (for output grids)
  std::optional<Eigen::MatrixXd> basis_m;
  Eigen::MatrixXd region_x;         // pre-expansion training X (basis mode only)
  Eigen::VectorXd beta_star;        // empty when unknown
  std::vector<bool> active_mask;
  double rho_x = -1, b_star = 0;    // scenario metadata when available
};

// Assemble data + graph from either a scenario directory or config paths,
// applying the tensor-product basis expansion when enabled. Relative data
// paths resolve against the config file's directory.
LoadedData assemble(const sgl::RunConfig& cfg, const std::string& data_dir,
                    const fs::path& config_base) {
  std::optional<sgl::Scenario> scenario;
  sgl::Dataset train, test;
  int rows = 0, cols = 0;
  std::optional<sgl::LatticeGraph> region_graph;

  if (!data_dir.empty()) {
    scenario = sgl::read_scenario_dir(data_dir);
    train = scenario->data.train;
    test = scenario->data.test;
    rows = scenario->rows;
    cols = scenario->cols;
    region_graph = sgl::LatticeGraph::lattice(rows, cols);
  } else if (cfg.data) {
    train = sgl::load_dataset(*cfg.data, config_base);
    region_graph = cfg.data->graph.build(config_base);
    rows = region_graph->rows();
    cols = region_graph->cols();
  } else {
    throw sgl::ConfigError("fit: need --data <scenario dir> or a 'data' config section");
  }

  std::optional<Eigen::MatrixXd> basis_m;
  std::optional<sgl::LatticeGraph> coef_graph;
  Eigen::MatrixXd region_x;
  if (cfg.basis.enabled) {
    if (rows == 0 || cols == 0)
      throw sgl::ConfigError("basis: requires a lattice graph (grid coordinates)");
    double lon_lo = cfg.basis.lon_lo, lon_hi = cfg.basis.lon_hi;
    double lat_lo = cfg.basis.lat_lo, lat_hi = cfg.basis.lat_hi;
    if (lon_hi <= lon_lo) { lon_lo = 0; lon_hi = cols - 1; }
    if (lat_hi <= lat_lo) { lat_lo = 0; lat_hi = rows - 1; }
    sgl::TensorProductBasis basis{
        sgl::BSplineBasis1D::uniform(lon_lo, lon_hi, cfg.basis.lon_nodes, cfg.basis.degree),
        sgl::BSplineBasis1D::uniform(lat_lo, lat_hi, cfg.basis.lat_nodes, cfg.basis.degree)};
    std::vector<std::pair<double, double>> locs;
    for (int j = 0; j < rows * cols; ++j)
      locs.emplace_back(j % cols, j / cols);
    basis_m = sgl::tensor_basis_matrix(locs, basis);
    region_x = train.X;
    train.X = sgl::expand_design(train.X, *basis_m);
    if (test.n() > 0) test.X = sgl::expand_design(test.X, *basis_m);
    // coefficient dependence graph: 4-neighbor lattice over the basis grid
    coef_graph = sgl::LatticeGraph::lattice(static_cast<int>(basis.lon.size()),
                                            static_cast<int>(basis.lat.size()));
  }

  LoadedData out{std::move(train), std::move(test),
                 coef_graph ? *coef_graph : *region_graph, *region_graph,
                 basis_m, std::move(region_x), {}, {}, -1, 0};
  if (scenario) {
    out.beta_star = scenario->data.beta_star;
    out.active_mask = scenario->data.active_mask;
    std::ifstream mf(fs::path(data_dir) / "scenario.json");
    json m;
    mf >> m;
    out.rho_x = m.value("rho_x", -1.0);
    out.b_star = m.value("b_star", 0.0);
  }
  return out;
}

int cmd_fit(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  sgl::RunConfig cfg = load_config(opt);
  LoadedData data = assemble(cfg, opt.data_dir, fs::path(opt.config_path).parent_path());
  sgl::ModelSpec spec = cfg.model.build(data.graph);
  if (cfg.basis.enabled && !cfg.basis.car_on_coefficients)
    spec.rho_prior = {sgl::RhoPriorKind::FixedZero};
  sgl::SamplerConfig scfg = cfg.sampler;
  scfg.seed = cfg.seed;
  if (scfg.n_chains > 1 && scfg.init_jitter == 0.0) scfg.init_jitter = 0.5;

  sgl::FitResult fit = sgl::run_fit(spec, data.train, scfg, cfg.threads);
  fs::create_directories(cfg.output_dir);
  for (int c = 0; c < scfg.n_chains; ++c)
    sgl::write_chain_csv(cfg.output_dir, fit.chains[c], c);
  auto ptrs = fit.chain_ptrs();
  sgl::write_summary_csv(fs::path(cfg.output_dir) / "summary.csv", ptrs,
                         cfg.selection.level);

  Eigen::MatrixXd beta_draws = sgl::pooled_beta_draws(ptrs);
  Eigen::MatrixXd region_beta_draws =
      data.basis_m ? (beta_draws * data.basis_m->transpose()).eval() : beta_draws;
  sgl::SelectionResult sel =
      cfg.selection.rule == "SN" ? sgl::select_regions_sn(region_beta_draws)
                                 : sgl::select_regions_hpd(region_beta_draws,
                                                           cfg.selection.level);
  sgl::write_selection_csv(cfg.output_dir, region_beta_draws, sel, data.region_graph,
                           cfg.selection.level);
  if (data.basis_m) {
    std::vector<std::string> header(data.basis_m->cols());
    for (int l = 0; l < data.basis_m->cols(); ++l) header[l] = "m_" + std::to_string(l);
    sgl::write_csv(fs::path(cfg.output_dir) / "basis_matrix.csv", header, *data.basis_m);
  }

  json manifest;
  manifest["model"] = cfg.model.name;
  manifest["seed"] = cfg.seed;
  manifest["sampler"] = sampler_echo(scfg);
  manifest["graph"] = {{"rows", data.region_graph.rows()},
                       {"cols", data.region_graph.cols()},
                       {"J", data.region_graph.size()}};
  manifest["basis_enabled"] = cfg.basis.enabled;
  for (const auto& [block, rate] : fit.chains.front().accept_rates)
    manifest["accept_rates"][block] = rate;
  if (!fit.rhat.empty()) {
    manifest["max_rhat"] = fit.max_rhat;
    json rt = json::object();
    for (std::size_t i = 0; i < fit.rhat.size(); ++i)
      rt[fit.rhat_names[i]] = fit.rhat[i];
    manifest["rhat"] = rt;
  }
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // planted-truth metrics when fitting a simulated scenario
  if (data.beta_star.size() > 0) {
    Eigen::VectorXd beta_hat = region_beta_draws.colwise().mean();
    sgl::EstimationReport est =
        sgl::estimation_metrics(beta_hat, data.beta_star, data.active_mask);
    sgl::SelectionReport selr = sgl::selection_metrics(sel.active, data.active_mask);
    json metrics;
    metrics["model"] = cfg.model.name;
    metrics["b_star"] = data.b_star;
    metrics["rho_x"] = data.rho_x;
    metrics["beta_rmse"] = est.beta_rmse;
    metrics["signal_rmse"] = est.signal_rmse ? json(*est.signal_rmse) : json(nullptr);
    metrics["noise_rmse"] = est.noise_rmse ? json(*est.noise_rmse) : json(nullptr);
    metrics["fpr"] = selr.fpr ? json(*selr.fpr) : json(nullptr);
    metrics["fnr"] = selr.fnr ? json(*selr.fnr) : json(nullptr);
    if (data.test.n() > 0) {
      sgl::RngStream rng = sgl::RngStream::derive(cfg.seed, 9001);
      double se = 0;
      for (int i = 0; i < data.test.n(); ++i) {
        sgl::PredictiveResult pr = sgl::posterior_predictive(
            ptrs, data.test.W.row(i).transpose(), data.test.X.row(i).transpose(), rng);
        se += (pr.point - data.test.y[i]) * (pr.point - data.test.y[i]);
      }
      metrics["pred_rmse"] = std::sqrt(se / data.test.n());
    } else {
      metrics["pred_rmse"] = nullptr;
    }
    std::ofstream mo(fs::path(cfg.output_dir) / "metrics.json");
    mo << metrics.dump(2) << "\n";
  }

  std::ofstream mf(fs::path(cfg.output_dir) / "manifest.json");
  mf << manifest.dump(2) << "\n";

  if (!fit.converged && !opt.allow_unconverged) {
    std::cerr << "convergence failure: max Rhat = " << fit.max_rhat
              << " (>= 1.1); rerun with --allow-unconverged to keep output\n";
    return kExitConvergence;
  }
  std::cout << "fit complete: " << scfg.n_chains << " chain(s) in " << cfg.output_dir
            << "\n";
  return kExitOk;
}

std::vector<sgl::ChainOutput> read_run_chains(const fs::path& run_dir) {
  std::vector<sgl::ChainOutput> chains;
  for (int c = 0;; ++c) {
    fs::path p = run_dir / ("chain_" + std::to_string(c) + ".csv");
    if (!fs::exists(p)) break;
    chains.push_back(sgl::read_chain_csv(p));
  }
  if (chains.empty())
    throw sgl::DataError("no chain_<id>.csv files in " + run_dir.string());
  return chains;
}

int cmd_select(const Options& opt) {
  fs::path run_dir = opt.run_dir;
  std::ifstream mf(run_dir / "manifest.json");
  if (!mf) throw sgl::DataError("missing manifest.json in " + run_dir.string());
  json manifest;
  mf >> manifest;
  const int rows = manifest.at("graph").at("rows");
  const int cols = manifest.at("graph").at("cols");

  std::vector<sgl::ChainOutput> chains = read_run_chains(run_dir);
  std::vector<const sgl::ChainOutput*> ptrs;
  for (auto& c : chains) ptrs.push_back(&c);
  Eigen::MatrixXd beta_draws = sgl::pooled_beta_draws(ptrs);
  if (manifest.value("basis_enabled", false)) {
    sgl::CsvTable mt = sgl::read_csv(run_dir / "basis_matrix.csv");
    beta_draws = (beta_draws * mt.values.transpose()).eval();
  }
  const std::string rule = opt.rule.empty() ? "HPD" : opt.rule;
  const double level = opt.level > 0 ? opt.level : 0.95;
  sgl::SelectionResult sel = rule == "SN"
                                 ? sgl::select_regions_sn(beta_draws)
                                 : sgl::select_regions_hpd(beta_draws, level);
  sgl::LatticeGraph grid = sgl::LatticeGraph::lattice(rows, cols);
  fs::path out_dir = opt.out_dir.empty() ? run_dir : fs::path(opt.out_dir);
  fs::create_directories(out_dir);
  sgl::write_selection_csv(out_dir, beta_draws, sel, grid, level);
  std::cout << "selection (" << rule << ") written to " << out_dir << "\n";
  return kExitOk;
}

int cmd_predict(const Options& opt) {
  fs::path run_dir = opt.run_dir;
  std::vector<sgl::ChainOutput> chains = read_run_chains(run_dir);
  std::vector<const sgl::ChainOutput*> ptrs;
  for (auto& c : chains) ptrs.push_back(&c);

  sgl::Scenario sc = sgl::read_scenario_dir(opt.data_dir);
  const sgl::Dataset& test = sc.data.test.n() > 0 ? sc.data.test : sc.data.train;
  Eigen::MatrixXd x_eff = test.X;
  std::ifstream mf(run_dir / "manifest.json");
  json manifest;
  if (mf) mf >> manifest;
  if (manifest.value("basis_enabled", false)) {
    sgl::CsvTable mt = sgl::read_csv(run_dir / "basis_matrix.csv");
    x_eff = sgl::expand_design(x_eff, mt.values);
  }

  std::uint64_t seed = manifest.value("seed", 1);
  sgl::RngStream rng = sgl::RngStream::derive(seed, 9001);
  Eigen::MatrixXd table(test.n(), 5);
  for (int i = 0; i < test.n(); ++i) {
    sgl::PredictiveResult pr = sgl::posterior_predictive(
        ptrs, test.W.row(i).transpose(), x_eff.row(i).transpose(), rng);
    table.row(i) << test.y[i], pr.point, std::round(pr.point), pr.hpd.lower,
        pr.hpd.upper;
  }
  fs::path out_dir = opt.out_dir.empty() ? run_dir : fs::path(opt.out_dir);
  fs::create_directories(out_dir);
  sgl::write_csv(out_dir / "predictions.csv",
                 {"y_true", "y_hat", "y_hat_rounded", "hpd_lower", "hpd_upper"}, table);
  std::cout << "predictions written to " << out_dir << "\n";
  return kExitOk;
}

int cmd_backtest(const Options& opt) {
  sgl::RunConfig cfg = load_config(opt);
  if (!cfg.backtest) throw sgl::ConfigError("backtest: config needs a 'backtest' section");
  LoadedData data = assemble(cfg, opt.data_dir, fs::path(opt.config_path).parent_path());

  sgl::BacktestRequest req;
  req.y = data.train.y;
  req.w = data.train.W;
  // the request carries region-level X; basis expansion happens inside
  req.x = data.basis_m ? data.region_x : data.train.X;
  req.basis_m = data.basis_m;
  req.graph = &data.graph;
  req.start = cfg.backtest->start;
  req.end = cfg.backtest->end;
  req.ma_window = cfg.backtest->ma_window;
  req.sampler = cfg.sampler;
  req.sampler.seed = cfg.seed;
  req.selection_level = cfg.selection.level;
  if (!cfg.backtest->fixed_region_mask_csv.empty()) {
    sgl::CsvTable mt = sgl::read_csv(fs::path(opt.config_path).parent_path() /
                                     cfg.backtest->fixed_region_mask_csv);
    const Eigen::VectorXd flat =
        mt.values.rows() == 1 ? mt.values.row(0).transpose().eval() : mt.values.col(0).eval();
    req.fixed_region_mask.resize(flat.size());
    for (int j = 0; j < flat.size(); ++j) req.fixed_region_mask[j] = flat[j] != 0;
  }

  fs::create_directories(cfg.output_dir);
  std::vector<sgl::BacktestModelResult> results;
  for (const std::string& model : cfg.backtest->models)
    results.push_back(sgl::backtest_model(model, req));

  // Table layout: measures as rows, models as columns
  std::ofstream table(fs::path(cfg.output_dir) / "backtest_table.csv");
  table << "measure";
  for (const auto& r : results) table << ',' << r.model;
  table << "\n";
  auto emit = [&](const std::string& name, auto getter) {
    table << name;
    for (const auto& r : results) table << ',' << getter(r);
    table << "\n";
  };
  emit("MAE", [](const auto& r) { return sgl::format_double(r.report.mae); });
  emit("RMSE", [](const auto& r) { return sgl::format_double(r.report.rmse); });
  emit("MaxAE", [](const auto& r) { return sgl::format_double(r.report.max_ae); });
  emit("SDR", [](const auto& r) {
    return r.report.sdr ? sgl::format_double(*r.report.sdr) : std::string("");
  });

  for (const auto& r : results) {
    Eigen::MatrixXd preds(r.predictions.size(), 5);
    for (std::size_t i = 0; i < r.predictions.size(); ++i) {
      const auto& p = r.predictions[i];
      preds.row(static_cast<int>(i)) << p.year_index, p.y_true, p.y_hat, p.hpd_lower,
          p.hpd_upper;
    }
    sgl::write_csv(fs::path(cfg.output_dir) / ("predictions_" + r.model + ".csv"),
                   {"year_index", "y_true", "y_hat", "hpd_lower", "hpd_upper"}, preds);
    if (!r.persistent.empty()) {
      Eigen::MatrixXd pm(r.persistent.size(), 1);
      for (std::size_t j = 0; j < r.persistent.size(); ++j)
        pm(static_cast<int>(j), 0) = r.persistent[j] ? 1 : 0;
      sgl::write_csv(fs::path(cfg.output_dir) / ("persistent_" + r.model + ".csv"),
                     {"active"}, pm);
    }
  }
  std::cout << "backtest written to " << cfg.output_dir << "\n";
  return kExitOk;
}

int cmd_report(const Options& opt) {
  if (opt.report_inputs.empty()) throw sgl::DataError("report: no input directories");
  struct Row {
    double b_star, rho_x;
    std::string model;
    std::map<std::string, std::vector<double>> values;
  };
  std::map<std::string, Row> groups;
  const std::vector<std::string> metric_names = {"signal_rmse", "noise_rmse", "beta_rmse",
                                                 "pred_rmse", "fpr", "fnr"};
  int found = 0;
  for (const auto& root : opt.report_inputs) {
    if (!fs::exists(root)) throw sgl::DataError("report: missing directory " + root);
    for (auto it = fs::recursive_directory_iterator(root);
         it != fs::recursive_directory_iterator(); ++it) {
      if (it->path().filename() != "metrics.json") continue;
      std::ifstream in(it->path());
      json m;
      in >> m;
      ++found;
      const std::string key = std::to_string(m.value("b_star", 0.0)) + "|" +
                              std::to_string(m.value("rho_x", -1.0)) + "|" +
                              m.value("model", std::string("?"));
      Row& row = groups[key];
      row.b_star = m.value("b_star", 0.0);
      row.rho_x = m.value("rho_x", -1.0);
      row.model = m.value("model", std::string("?"));
      for (const auto& name : metric_names)
        if (m.contains(name) && !m[name].is_null())
          row.values[name].push_back(m[name].get<double>());
    }
  }
  if (found == 0) throw sgl::DataError("report: no metrics.json files found");

  fs::path out_dir = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "report.csv");
  out << "b_star,rho_x,model,n_replicates";
  for (const auto& name : metric_names) out << ',' << name << "_mean," << name << "_sd";
  out << "\n";
  for (const auto& [key, row] : groups) {
    std::size_t n_rep = 0;
    for (const auto& [k, v] : row.values) n_rep = std::max(n_rep, v.size());
    out << sgl::format_double(row.b_star) << ',' << sgl::format_double(row.rho_x) << ','
        << row.model << ',' << n_rep;
    for (const auto& name : metric_names) {
      auto it = row.values.find(name);
      if (it == row.values.end() || it->second.empty()) {
        out << ",,";
        continue;
      }
      const auto& v = it->second;
      double mean = 0;
      for (double x : v) mean += x;
      mean /= v.size();
      double sd = 0;
      for (double x : v) sd += (x - mean) * (x - mean);
      sd = v.size() > 1 ? std::sqrt(sd / (v.size() - 1)) : 0.0;
      out << ',' << sgl::format_double(mean) << ',' << sgl::format_double(sd);
    }
    out << "\n";
  }
  std::cout << "aggregated " << found << " replicate(s) into "
            << (out_dir / "report.csv") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatially dependent global-local shrinkage for Poisson regression"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config_path, "JSON run configuration");
    if (needs_config) c->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", opt.seed, "override config seed");
    sub->add_option("--threads", opt.threads, "parallelism cap");
  };

  auto* sim = app.add_subcommand("simulate", "generate synthetic scenarios");
  add_common(sim, true);
  auto* fit = app.add_subcommand("fit", "run the MCMC sampler");
  add_common(fit, true);
  fit->add_option("--data", opt.data_dir, "scenario directory to fit");
  fit->add_flag("--allow-unconverged", opt.allow_unconverged,
                "keep output even when Rhat >= 1.1");
  auto* sel = app.add_subcommand("select", "region selection from a completed run");
  sel->add_option("--run", opt.run_dir, "fit output directory")->required();
  sel->add_option("--rule", opt.rule, "HPD or SN");
  sel->add_option("--level", opt.level, "HPD level");
  sel->add_option("--out", opt.out_dir, "output directory");
  auto* pred = app.add_subcommand("predict", "posterior predictive for a dataset");
  pred->add_option("--run", opt.run_dir, "fit output directory")->required();
  pred->add_option("--data", opt.data_dir, "scenario directory")->required();
  pred->add_option("--out", opt.out_dir, "output directory");
  auto* bt = app.add_subcommand("backtest", "rolling one-year-ahead forecast");
  add_common(bt, true);
  bt->add_option("--data", opt.data_dir, "scenario directory (time-ordered rows)");
  auto* rep = app.add_subcommand("report", "aggregate replicate metrics");
  rep->add_option("--in", opt.report_inputs, "run directories to scan")->required();
  rep->add_option("--out", opt.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(opt);
    if (fit->parsed()) return cmd_fit(opt);
    if (sel->parsed()) return cmd_select(opt);
    if (pred->parsed()) return cmd_predict(opt);
    if (bt->parsed()) return cmd_backtest(opt);
    if (rep->parsed()) return cmd_report(opt);
  } catch (const sgl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sgl::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
