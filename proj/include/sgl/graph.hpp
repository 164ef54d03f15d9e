#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sgl/rng.hpp"

namespace sgl {

using SpMat = Eigen::SparseMatrix<double>;

// Areal adjacency structure with degrees; source of the CAR precision
// D - rho*A. Accepts arbitrary connected undirected graphs; lattices are a
// constructor. Immutable after construction and shareable across chains.
class LatticeGraph {
public:
  // Rook (4-neighbor) lattice over a rows x cols grid.
  static LatticeGraph lattice(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols < 2)
      throw std::invalid_argument("lattice: need rows*cols >= 2 (1x1 grid has no neighbors)");
    std::vector<std::pair<int, int>> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
        if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
      }
    LatticeGraph g(rows * cols, edges);
    g.rows_ = rows;
    g.cols_ = cols;
    return g;
  }

  // General graph from an undirected edge list (0-based node indices).
  // Disconnected graphs are rejected: the PD-for-rho-in-[0,1) guarantee
  // assumes a connected graph.
  LatticeGraph(int n_nodes, const std::vector<std::pair<int, int>>& edges)
      : adjacency_(n_nodes, n_nodes) {
    if (n_nodes < 2) throw std::invalid_argument("graph: need at least 2 nodes");
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * edges.size());
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n_nodes || b >= n_nodes)
        throw std::invalid_argument("graph: edge index out of range");
      if (a == b) throw std::invalid_argument("graph: self-loop not allowed");
      trip.emplace_back(a, b, 1.0);
      trip.emplace_back(b, a, 1.0);
    }
    adjacency_.setFromTriplets(trip.begin(), trip.end(),
                               [](double, double) { return 1.0; });  // dedupe
    degrees_.resize(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
      double d = 0;
      for (SpMat::InnerIterator it(adjacency_, j); it; ++it) d += it.value();
      degrees_[j] = static_cast<int>(d);
      if (degrees_[j] == 0)
        throw std::invalid_argument("graph: isolated node " + std::to_string(j));
    }
    if (!connected())
      throw std::invalid_argument(
          "graph: disconnected; supply the largest connected component");
  }

  int size() const { return static_cast<int>(degrees_.size()); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const SpMat& adjacency() const { return adjacency_; }
  const std::vector<int>& degrees() const { return degrees_; }

  // Eigenvalues of D^{-1/2} A D^{-1/2}, computed once and cached so each
  // rho update costs O(J). Dense solve; fine for J up to a few thousand.
  const Eigen::VectorXd& normalized_spectrum() const {
    std::call_once(spectrum_->flag, [this] {
      const int n = size();
      Eigen::MatrixXd m = Eigen::MatrixXd(adjacency_);
      for (int j = 0; j < n; ++j) {
        double dj = 1.0 / std::sqrt(static_cast<double>(degrees_[j]));
        m.row(j) *= dj;
        m.col(j) *= dj;
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
      spectrum_->values = es.eigenvalues();
    });
    return spectrum_->values;
  }

private:
  bool connected() const {
    std::vector<char> seen(size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (SpMat::InnerIterator it(adjacency_, v); it; ++it) {
        int u = static_cast<int>(it.row());
        if (!seen[u]) {
          seen[u] = 1;
          ++count;
          stack.push_back(u);
        }
      }
    }
    return count == size();
  }

  SpMat adjacency_;
  std::vector<int> degrees_;
  int rows_ = 0, cols_ = 0;  // 0 when not built as a lattice
  struct SpectrumCache {
    std::once_flag flag;
    Eigen::VectorXd values;
  };
  std::shared_ptr<SpectrumCache> spectrum_ = std::make_shared<SpectrumCache>();
};

// CAR prior field: precision Q = D - rho*A, positive definite for
// rho in [0,1) on a connected graph.
class CarField {
public:
  CarField(const LatticeGraph& graph, double rho) : graph_(&graph), rho_(rho) {
    if (!(rho >= 0.0 && rho < 1.0))
      throw std::invalid_argument("CarField: rho must lie in [0,1)");
  }

  double rho() const { return rho_; }
  const LatticeGraph& graph() const { return *graph_; }

  SpMat precision() const {
    const auto& g = *graph_;
    SpMat q = -rho_ * g.adjacency();
    for (int j = 0; j < g.size(); ++j) q.coeffRef(j, j) = g.degrees()[j];
    q.makeCompressed();
    return q;
  }

  // log|D - rho*A| = sum_j log(deg_j) + sum_i log(1 - rho*mu_i) over the
  // cached normalized spectrum.
  double log_det() const {
    const auto& g = *graph_;
    double out = 0.0;
    for (int d : g.degrees()) out += std::log(static_cast<double>(d));
    for (double mu : g.normalized_spectrum()) {
      double t = 1.0 - rho_ * mu;
      if (t <= 0.0) throw std::runtime_error("log_det: non-PD precision");
      out += std::log(t);
    }
    return out;
  }

  // Exact N(0, Q^{-1}) draw via sparse Cholesky: solve L^T x = z.
  Eigen::VectorXd sample(RngStream& rng) const {
    ensure_factorized();
    Eigen::VectorXd z(graph_->size());
    for (int j = 0; j < z.size(); ++j) z[j] = rng.normal();
    // P Q P^T = L L^T, so x = P^T L^{-T} z has covariance Q^{-1}
    return llt_->solver.permutationPinv() * llt_->solver.matrixU().solve(z).eval();
  }

private:
  void ensure_factorized() const {
    std::call_once(llt_->flag, [this] {
      llt_->solver.compute(precision());
      if (llt_->solver.info() != Eigen::Success)
        throw std::runtime_error("CarField: sparse Cholesky failed (non-PD precision)");
    });
  }

  struct LltCache {
    std::once_flag flag;
    Eigen::SimplicialLLT<SpMat> solver;
  };

  const LatticeGraph* graph_;
  double rho_;
  std::shared_ptr<LltCache> llt_ = std::make_shared<LltCache>();
};

// tau^2 * Lambda * (D - rho*A)^{-1} * Lambda with Lambda = diag(lambda).
inline Eigen::MatrixXd induced_covariance(const CarField& field, double tau,
                                          const Eigen::VectorXd& lambda) {
  const int n = field.graph().size();
  if (lambda.size() != n)
    throw std::invalid_argument("induced_covariance: lambda length mismatch");
  if (!(tau >= 0.0)) throw std::invalid_argument("induced_covariance: tau must be >= 0");
  for (int j = 0; j < n; ++j)
    if (!(lambda[j] > 0.0))
      throw std::invalid_argument("induced_covariance: lambda must be positive");
  Eigen::MatrixXd qinv =
      Eigen::MatrixXd(field.precision()).llt().solve(Eigen::MatrixXd::Identity(n, n));
  return tau * tau *
         (lambda.asDiagonal() * qinv * lambda.asDiagonal()).selfadjointView<Eigen::Lower>();
}

// Truncated path-count series for the prior covariance between two regions:
//   tau^2 lam_j lam_k / sqrt(Djj Dkk) * sum_{l<=max_len} (A^l)_{jk}
//       / sqrt(Djj^l Dkk^l) * rho^l
// Diagnostic companion to induced_covariance; on irregular-degree graphs the
// two need not agree and their discrepancy is reported, not reconciled.
inline double path_series_covariance(const CarField& field, double tau, double lam_j,
                                     double lam_k, int j, int k, int max_len) {
  const auto& g = field.graph();
  if (j == k) throw std::invalid_argument("path_series_covariance: need j != k");
  if (max_len < 1) throw std::invalid_argument("path_series_covariance: max_len >= 1");
  const double dj = g.degrees()[j], dk = g.degrees()[k];
  Eigen::VectorXd v = Eigen::VectorXd::Zero(g.size());
  v[k] = 1.0;
  double sum = 0.0, rho_pow = 1.0, dpow = 1.0;
  for (int l = 1; l <= max_len; ++l) {
    v = g.adjacency() * v;  // v = A^l e_k
    rho_pow *= field.rho();
    dpow *= dj * dk;
    sum += v[j] / std::sqrt(dpow) * rho_pow;
  }
  return tau * tau * lam_j * lam_k / std::sqrt(dj * dk) * sum;
}

}  // namespace sgl
