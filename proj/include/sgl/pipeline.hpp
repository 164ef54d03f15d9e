#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <vector>

#include "sgl/config.hpp"
#include "sgl/inference.hpp"
#include "sgl/io.hpp"
#include "sgl/model.hpp"
#include "sgl/sampler.hpp"
#include "sgl/simgen.hpp"

namespace sgl {

struct FitResult {
  std::vector<ChainOutput> chains;
  std::vector<double> rhat;             // per monitored column (all columns)
  std::vector<std::string> rhat_names;
  double max_rhat = 0;
  bool converged = true;

  std::vector<const ChainOutput*> chain_ptrs() const {
    std::vector<const ChainOutput*> p;
    for (const auto& c : chains) p.push_back(&c);
    return p;
  }
};

// Run n_chains independent chains (parallel up to thread_cap) and compute
// split-Rhat over every stored parameter column.
inline FitResult run_fit(const ModelSpec& spec, const Dataset& data,
                         const SamplerConfig& cfg, int thread_cap = 1) {
  FitResult out;
  out.chains.resize(cfg.n_chains);
  const int workers = std::max(1, std::min(thread_cap, cfg.n_chains));
  if (workers == 1) {
    for (int c = 0; c < cfg.n_chains; ++c) out.chains[c] = run_chain(spec, data, cfg, c);
  } else {
    std::vector<std::future<ChainOutput>> futs;
    for (int c = 0; c < cfg.n_chains; ++c)
      futs.push_back(std::async(std::launch::async,
                                [&, c] { return run_chain(spec, data, cfg, c); }));
    for (int c = 0; c < cfg.n_chains; ++c) out.chains[c] = futs[c].get();
  }

  if (cfg.n_chains >= 2 && out.chains.front().n_draws() >= 10) {
    auto ptrs = out.chain_ptrs();
    const auto& names = out.chains.front().column_names;
    const int n_cols = static_cast<int>(out.chains.front().draws.cols());
    for (int col = 0; col < n_cols; ++col) {
      // pinned parameters (fixed rho, fixed lambda) have zero variance by
      // construction; skip rather than flag them
      bool pinned = true;
      for (const auto* c : ptrs) {
        const auto v = c->draws.col(col);
        if ((v.array() != v[0]).any()) { pinned = false; break; }
      }
      if (pinned) continue;
      out.rhat.push_back(gelman_rubin(ptrs, col));
      out.rhat_names.push_back(names[col]);
    }
    for (double r : out.rhat) out.max_rhat = std::max(out.max_rhat, r);
    out.converged = out.max_rhat < 1.1;
  }
  return out;
}

inline void write_chain_csv(const std::filesystem::path& dir, const ChainOutput& chain,
                            int chain_id) {
  write_csv(dir / ("chain_" + std::to_string(chain_id) + ".csv"), chain.column_names,
            chain.draws);
}

inline ChainOutput read_chain_csv(const std::filesystem::path& path) {
  CsvTable t = read_csv(path);
  ChainOutput c;
  c.column_names = t.header;
  c.draws = t.values;
  int K = 0, J = 0;
  for (const auto& h : t.header) {
    if (h.rfind("alpha_", 0) == 0) ++K;
    if (h.rfind("beta_tilde_", 0) == 0) ++J;
  }
  c.K = K;
  c.J = J;
  return c;
}

// Per-parameter posterior summary table: mean, sd, HPD bounds.
inline void write_summary_csv(const std::filesystem::path& path,
                              const std::vector<const ChainOutput*>& chains,
                              double level) {
  const auto& names = chains.front()->column_names;
  const int n_cols = static_cast<int>(chains.front()->draws.cols());
  int total = 0;
  for (const auto* c : chains) total += c->n_draws();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open: " + path.string());
  out << "parameter,mean,sd,hpd_lower,hpd_upper\n";
  Eigen::VectorXd pool(total);
  for (int col = 0; col < n_cols; ++col) {
    int at = 0;
    for (const auto* c : chains) {
      pool.segment(at, c->n_draws()) = c->draws.col(col);
      at += c->n_draws();
    }
    PosteriorSummary s = summarize(pool, level);
    out << names[col] << ',' << format_double(s.mean) << ',' << format_double(s.sd)
        << ',' << format_double(s.hpd.lower) << ',' << format_double(s.hpd.upper)
        << "\n";
  }
}

// Selection output: per-region rows plus a gridded 0/1 companion for
// heatmap plotting when the graph is a lattice.
inline void write_selection_csv(const std::filesystem::path& dir,
                                const Eigen::MatrixXd& beta_draws,
                                const SelectionResult& sel, const LatticeGraph& graph,
                                double level) {
  const int J = static_cast<int>(beta_draws.cols());
  std::ofstream out(dir / "selection.csv");
  if (!out) throw std::runtime_error("cannot open selection.csv");
  out << "region_id,row,col,active,hpd_lower,hpd_upper,post_mean,post_sd\n";
  for (int j = 0; j < J; ++j) {
    PosteriorSummary s = summarize(beta_draws.col(j), level);
    const int r = graph.cols() > 0 ? j / graph.cols() : -1;
    const int c = graph.cols() > 0 ? j % graph.cols() : -1;
    out << j << ',' << r << ',' << c << ',' << (sel.active[j] ? 1 : 0) << ','
        << format_double(s.hpd.lower) << ',' << format_double(s.hpd.upper) << ','
        << format_double(s.mean) << ',' << format_double(s.sd) << "\n";
  }
  if (graph.rows() > 0 && graph.cols() > 0) {
    Eigen::MatrixXd grid(graph.rows(), graph.cols());
    for (int j = 0; j < J; ++j)
      grid(j / graph.cols(), j % graph.cols()) = sel.active[j] ? 1 : 0;
    std::vector<std::string> header(graph.cols());
    for (int c = 0; c < graph.cols(); ++c) header[c] = "c" + std::to_string(c);
    write_csv(dir / "selection_grid.csv", header, grid);
  }
}

// Scenario directory layout: train.csv / test.csv with columns
// y, w_0.., x_0.., plus beta_star.csv, mask.csv and a JSON manifest.
inline void write_scenario_dir(const std::filesystem::path& dir, const SimConfig& cfg,
                               const SimDataset& ds) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write_split = [&](const fs::path& path, const Dataset& d) {
    std::vector<std::string> header{"y"};
    for (int k = 0; k < d.K(); ++k) header.push_back("w_" + std::to_string(k));
    for (int j = 0; j < d.J(); ++j) header.push_back("x_" + std::to_string(j));
    Eigen::MatrixXd m(d.n(), 1 + d.K() + d.J());
    m.col(0) = d.y;
    m.middleCols(1, d.K()) = d.W;
    m.rightCols(d.J()) = d.X;
    write_csv(path, header, m);
  };
  write_split(dir / "train.csv", ds.train);
  if (ds.test.n() > 0) write_split(dir / "test.csv", ds.test);
  write_csv(dir / "beta_star.csv", {"beta_star"}, ds.beta_star);
  Eigen::MatrixXd mask(static_cast<int>(ds.active_mask.size()), 1);
  for (std::size_t j = 0; j < ds.active_mask.size(); ++j)
    mask(static_cast<int>(j), 0) = ds.active_mask[j] ? 1 : 0;
  write_csv(dir / "mask.csv", {"active"}, mask);

  json manifest;
  manifest["n_train"] = cfg.n_train;
  manifest["n_test"] = cfg.n_test;
  manifest["rows"] = cfg.rows;
  manifest["cols"] = cfg.cols;
  manifest["rho_x"] = cfg.rho_x;
  manifest["b_star"] = cfg.b_star;
  manifest["seed"] = cfg.seed;
  manifest["pattern"] = cfg.pattern == SignalPattern::Adjacent    ? "adjacent"
                        : cfg.pattern == SignalPattern::Scattered ? "scattered"
                                                                  : "custom";
  manifest["scale_mode"] = cfg.scale_mode == ScaleMode::Divide ? "divide" : "multiply";
  std::ofstream mf(dir / "scenario.json");
  mf << manifest.dump(2) << "\n";
}

struct Scenario {
  SimDataset data;
  int rows = 0, cols = 0;
};

inline Scenario read_scenario_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::ifstream mf(dir / "scenario.json");
  if (!mf) throw DataError("missing scenario.json in " + dir.string());
  json manifest;
  mf >> manifest;
  Scenario sc;
  sc.rows = manifest.at("rows");
  sc.cols = manifest.at("cols");

  auto read_split = [&](const fs::path& path) {
    CsvTable t = read_csv(path);
    int K = 0, J = 0;
    for (const auto& h : t.header) {
      if (h.rfind("w_", 0) == 0) ++K;
      if (h.rfind("x_", 0) == 0) ++J;
    }
    Dataset d;
    d.y = t.values.col(0);
    d.W = t.values.middleCols(1, K);
    d.X = t.values.rightCols(J);
    d.standardized = true;
    return d;
  };
  sc.data.train = read_split(dir / "train.csv");
  if (fs::exists(dir / "test.csv")) sc.data.test = read_split(dir / "test.csv");
  sc.data.beta_star = read_csv(dir / "beta_star.csv").values.col(0);
  CsvTable mask = read_csv(dir / "mask.csv");
  sc.data.active_mask.resize(mask.values.rows());
  for (int j = 0; j < mask.values.rows(); ++j)
    sc.data.active_mask[j] = mask.values(j, 0) != 0;
  return sc;
}

}  // namespace sgl
