#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sgl/basis.hpp"
#include "sgl/io.hpp"
#include "sgl/model.hpp"
#include "sgl/sampler.hpp"
#include "sgl/simgen.hpp"

namespace sgl {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check_keys(const json& j, const std::set<std::string>& allowed,
                       const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(context + ": unknown key '" + it.key() + "'");
}

struct GraphConfig {
  int rows = 0, cols = 0;          // lattice mode
  std::string edges_csv;           // general-graph mode
  int n_nodes = 0;

  LatticeGraph build(const std::filesystem::path& base) const {
    if (!edges_csv.empty()) {
      if (n_nodes < 2) throw ConfigError("graph: n_nodes required with edges_csv");
      return LatticeGraph(n_nodes, read_edge_list(base / edges_csv));
    }
    return LatticeGraph::lattice(rows, cols);
  }
};

struct DataConfig {
  std::string y_csv, w_csv, x_csv;
  bool standardize = false;
  GraphConfig graph;
};

struct ModelConfig {
  std::string name = "DLC";              // Table-style name, or "custom"
  std::string tau_prior = "LC";
  std::string lambda_prior = "LC";
  std::string rho_prior = "unif01";
  double zeta = 1.0;
  double eta = 50.0;
  std::string positivity = "log";        // log | sigmoid

  ModelSpec build(const LatticeGraph& graph) const {
    ModelSpec m;
    if (name == "custom") {
      m.graph = &graph;
      m.tau_prior = parse_scale_prior(tau_prior, graph.size());
      m.lambda_prior = parse_scale_prior(lambda_prior, graph.size());
      m.rho_prior = parse_rho_prior(rho_prior);
      m.zeta = zeta;
      m.eta = eta;
    } else {
      m = make_model(name, graph, zeta, eta);
    }
    if (positivity == "sigmoid") m.positivity = PositivityMode::Sigmoid;
    else if (positivity != "log") throw ConfigError("model.positivity: log|sigmoid");
    return m;
  }
};

struct BasisConfig {
  bool enabled = false;
  int lon_nodes = 17, lat_nodes = 12;
  double lon_lo = 0, lon_hi = 1, lat_lo = 0, lat_hi = 1;
  int degree = 3;
  bool car_on_coefficients = true;  // CAR graph over the coefficient grid
};

struct SelectionConfig {
  std::string rule = "HPD";  // HPD | SN
  double level = 0.95;
};

struct BacktestConfig {
  int start = 0, end = 0;    // target row range, inclusive
  int ma_window = 5;
  std::vector<std::string> models = {"DLC", "MA"};
  std::string fixed_region_mask_csv;  // single 0/1 row or column, for UA mode
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int threads = 1;
  std::optional<SimConfig> sim;
  int replicates = 1;
  std::optional<DataConfig> data;
  ModelConfig model;
  SamplerConfig sampler;
  BasisConfig basis;
  SelectionConfig selection;
  std::optional<BacktestConfig> backtest;
};

namespace detail {
template <typename T>
void get_to_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}
}  // namespace detail

inline SimConfig parse_sim_config(const json& j) {
  check_keys(j, {"n_train", "n_test", "rows", "cols", "rho_x", "pattern", "custom_mask",
                 "block_rows", "block_cols", "scatter_count", "b_star", "alpha_star",
                 "scale_mode", "seed"},
             "simulate");
  SimConfig c;
  detail::get_to_if(j, "n_train", c.n_train);
  detail::get_to_if(j, "n_test", c.n_test);
  detail::get_to_if(j, "rows", c.rows);
  detail::get_to_if(j, "cols", c.cols);
  detail::get_to_if(j, "rho_x", c.rho_x);
  detail::get_to_if(j, "block_rows", c.block_rows);
  detail::get_to_if(j, "block_cols", c.block_cols);
  detail::get_to_if(j, "scatter_count", c.scatter_count);
  detail::get_to_if(j, "b_star", c.b_star);
  detail::get_to_if(j, "seed", c.seed);
  if (j.contains("pattern")) {
    const std::string p = j.at("pattern");
    if (p == "adjacent") c.pattern = SignalPattern::Adjacent;
    else if (p == "scattered") c.pattern = SignalPattern::Scattered;
    else if (p == "custom") c.pattern = SignalPattern::Custom;
    else throw ConfigError("simulate.pattern: adjacent|scattered|custom");
  }
  if (j.contains("custom_mask")) {
    std::vector<int> m = j.at("custom_mask");
    c.custom_mask.assign(m.begin(), m.end());
  }
  if (j.contains("alpha_star")) {
    std::vector<double> a = j.at("alpha_star");
    c.alpha_star = Eigen::Map<Eigen::VectorXd>(a.data(), a.size());
  }
  if (j.contains("scale_mode")) {
    const std::string s = j.at("scale_mode");
    if (s == "divide") c.scale_mode = ScaleMode::Divide;
    else if (s == "multiply") c.scale_mode = ScaleMode::Multiply;
    else throw ConfigError("simulate.scale_mode: divide|multiply");
  }
  return c;
}

inline RunConfig parse_run_config(const json& j) {
  check_keys(j, {"seed", "output_dir", "threads", "simulate", "replicates", "data",
                 "model", "sampler", "basis", "selection", "backtest"},
             "config");
  RunConfig c;
  detail::get_to_if(j, "seed", c.seed);
  detail::get_to_if(j, "output_dir", c.output_dir);
  detail::get_to_if(j, "threads", c.threads);
  detail::get_to_if(j, "replicates", c.replicates);

  if (j.contains("simulate")) c.sim = parse_sim_config(j.at("simulate"));

  if (j.contains("data")) {
    const json& d = j.at("data");
    check_keys(d, {"y_csv", "w_csv", "x_csv", "standardize", "graph"}, "data");
    DataConfig dc;
    detail::get_to_if(d, "y_csv", dc.y_csv);
    detail::get_to_if(d, "w_csv", dc.w_csv);
    detail::get_to_if(d, "x_csv", dc.x_csv);
    detail::get_to_if(d, "standardize", dc.standardize);
    if (d.contains("graph")) {
      const json& g = d.at("graph");
      check_keys(g, {"rows", "cols", "edges_csv", "n_nodes"}, "data.graph");
      detail::get_to_if(g, "rows", dc.graph.rows);
      detail::get_to_if(g, "cols", dc.graph.cols);
      detail::get_to_if(g, "edges_csv", dc.graph.edges_csv);
      detail::get_to_if(g, "n_nodes", dc.graph.n_nodes);
    }
    c.data = dc;
  }

  if (j.contains("model")) {
    const json& m = j.at("model");
    check_keys(m, {"name", "tau_prior", "lambda_prior", "rho_prior", "zeta", "eta",
                   "positivity"},
               "model");
    detail::get_to_if(m, "name", c.model.name);
    detail::get_to_if(m, "tau_prior", c.model.tau_prior);
    detail::get_to_if(m, "lambda_prior", c.model.lambda_prior);
    detail::get_to_if(m, "rho_prior", c.model.rho_prior);
    detail::get_to_if(m, "zeta", c.model.zeta);
    detail::get_to_if(m, "eta", c.model.eta);
    detail::get_to_if(m, "positivity", c.model.positivity);
  }

  if (j.contains("sampler")) {
    const json& s = j.at("sampler");
    check_keys(s, {"n_iter", "burn_in", "adapt_interval", "adapt_factor", "accept_low",
                   "accept_high", "init_step_alpha", "init_step_beta", "init_step_lambda",
                   "init_step_tau", "init_step_rho", "n_chains", "thin", "seed",
                   "init_jitter"},
               "sampler");
    detail::get_to_if(s, "n_iter", c.sampler.n_iter);
    detail::get_to_if(s, "burn_in", c.sampler.burn_in);
    detail::get_to_if(s, "adapt_interval", c.sampler.adapt_interval);
    detail::get_to_if(s, "adapt_factor", c.sampler.adapt_factor);
    detail::get_to_if(s, "accept_low", c.sampler.accept_low);
    detail::get_to_if(s, "accept_high", c.sampler.accept_high);
    detail::get_to_if(s, "init_step_alpha", c.sampler.init_step_alpha);
    detail::get_to_if(s, "init_step_beta", c.sampler.init_step_beta);
    detail::get_to_if(s, "init_step_lambda", c.sampler.init_step_lambda);
    detail::get_to_if(s, "init_step_tau", c.sampler.init_step_tau);
    detail::get_to_if(s, "init_step_rho", c.sampler.init_step_rho);
    detail::get_to_if(s, "n_chains", c.sampler.n_chains);
    detail::get_to_if(s, "thin", c.sampler.thin);
    detail::get_to_if(s, "seed", c.sampler.seed);
    detail::get_to_if(s, "init_jitter", c.sampler.init_jitter);
  }

  if (j.contains("basis")) {
    const json& b = j.at("basis");
    check_keys(b, {"enabled", "lon_nodes", "lat_nodes", "lon_range", "lat_range",
                   "degree", "car_on_coefficients"},
               "basis");
    detail::get_to_if(b, "enabled", c.basis.enabled);
    detail::get_to_if(b, "lon_nodes", c.basis.lon_nodes);
    detail::get_to_if(b, "lat_nodes", c.basis.lat_nodes);
    detail::get_to_if(b, "degree", c.basis.degree);
    detail::get_to_if(b, "car_on_coefficients", c.basis.car_on_coefficients);
    if (b.contains("lon_range")) {
      std::vector<double> r = b.at("lon_range");
      if (r.size() != 2) throw ConfigError("basis.lon_range: [lo, hi]");
      c.basis.lon_lo = r[0];
      c.basis.lon_hi = r[1];
    }
    if (b.contains("lat_range")) {
      std::vector<double> r = b.at("lat_range");
      if (r.size() != 2) throw ConfigError("basis.lat_range: [lo, hi]");
      c.basis.lat_lo = r[0];
      c.basis.lat_hi = r[1];
    }
  }

  if (j.contains("selection")) {
    const json& s = j.at("selection");
    check_keys(s, {"rule", "level"}, "selection");
    detail::get_to_if(s, "rule", c.selection.rule);
    detail::get_to_if(s, "level", c.selection.level);
    if (c.selection.rule != "HPD" && c.selection.rule != "SN")
      throw ConfigError("selection.rule: HPD|SN");
    if (!(c.selection.level > 0 && c.selection.level < 1))
      throw ConfigError("selection.level in (0,1)");
  }

  if (j.contains("backtest")) {
    const json& b = j.at("backtest");
    check_keys(b, {"start", "end", "ma_window", "models", "fixed_region_mask_csv"},
               "backtest");
    BacktestConfig bc;
    detail::get_to_if(b, "start", bc.start);
    detail::get_to_if(b, "end", bc.end);
    detail::get_to_if(b, "ma_window", bc.ma_window);
    detail::get_to_if(b, "fixed_region_mask_csv", bc.fixed_region_mask_csv);
    if (b.contains("models")) {
      bc.models.clear();
      for (const auto& m : b.at("models")) bc.models.push_back(m.get<std::string>());
    }
    c.backtest = bc;
  }
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return parse_run_config(j);
}

// Column standardization to mean 0, sd 1 (per the standardize-on-load flag).
inline void standardize_columns(Eigen::MatrixXd& m) {
  for (int c = 0; c < m.cols(); ++c) {
    const double mean = m.col(c).mean();
    double sd = std::sqrt((m.col(c).array() - mean).square().sum() /
                          std::max<int>(1, static_cast<int>(m.rows()) - 1));
    if (sd == 0.0) sd = 1.0;
    m.col(c) = (m.col(c).array() - mean) / sd;
  }
}

inline Dataset load_dataset(const DataConfig& cfg, const std::filesystem::path& base) {
  Dataset d;
  CsvTable yt = read_csv(base / cfg.y_csv);
  if (yt.header.size() != 1 || yt.header[0] != "y")
    throw DataError("response CSV must have a single 'y' column");
  d.y = yt.values.col(0);
  CsvTable wt = read_csv(base / cfg.w_csv);
  d.W = wt.values;
  CsvTable xt = read_csv(base / cfg.x_csv);
  d.X = xt.values;
  if (cfg.standardize) {
    standardize_columns(d.W);
    standardize_columns(d.X);
    d.standardized = true;
  }
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  return d;
}

}  // namespace sgl
