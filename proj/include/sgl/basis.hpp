#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgl {

// One-dimensional B-spline basis over strictly increasing breakpoints with
// a clamped (open) uniform knot vector. Basis count = breakpoints - 1 + degree.
class BSplineBasis1D {
public:
  BSplineBasis1D(std::vector<double> breakpoints, int degree)
      : breaks_(std::move(breakpoints)), degree_(degree) {
    if (degree_ < 0) throw std::invalid_argument("bspline: degree >= 0");
    if (breaks_.size() < 2) throw std::invalid_argument("bspline: need >= 2 breakpoints");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      if (!(breaks_[i] > breaks_[i - 1]))
        throw std::invalid_argument("bspline: breakpoints must be strictly increasing");
    // clamped knots: endpoints repeated degree+1 times
    knots_.assign(degree_ + 1, breaks_.front());
    knots_.insert(knots_.end(), breaks_.begin() + 1, breaks_.end() - 1);
    knots_.insert(knots_.end(), degree_ + 1, breaks_.back());
  }

  static BSplineBasis1D uniform(double lo, double hi, int n_breaks, int degree = 3) {
    if (n_breaks < 2) throw std::invalid_argument("bspline: need >= 2 breakpoints");
    std::vector<double> b(n_breaks);
    for (int i = 0; i < n_breaks; ++i)
      b[i] = lo + (hi - lo) * i / static_cast<double>(n_breaks - 1);
    return BSplineBasis1D(std::move(b), degree);
  }

  int size() const { return static_cast<int>(breaks_.size()) - 1 + degree_; }
  int degree() const { return degree_; }
  double lo() const { return breaks_.front(); }
  double hi() const { return breaks_.back(); }

  // All basis values at t (Cox-de Boor, span-local triangular recurrence).
  Eigen::VectorXd eval(double t) const {
    if (t < lo() || t > hi())
      throw std::invalid_argument("bspline: t=" + std::to_string(t) +
                                  " outside breakpoint hull");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
    const int span = find_span(t);
    std::vector<double> nz(degree_ + 1, 0.0), left(degree_ + 1), right(degree_ + 1);
    nz[0] = 1.0;
    for (int j = 1; j <= degree_; ++j) {
      left[j] = t - knots_[span + 1 - j];
      right[j] = knots_[span + j] - t;
      double saved = 0.0;
      for (int r = 0; r < j; ++r) {
        const double tmp = nz[r] / (right[r + 1] + left[j - r]);
        nz[r] = saved + right[r + 1] * tmp;
        saved = left[j - r] * tmp;
      }
      nz[j] = saved;
    }
    for (int r = 0; r <= degree_; ++r) out[span - degree_ + r] = nz[r];
    return out;
  }

private:
  int find_span(double t) const {
    const int last = size();  // one past last basis index == last usable span+1
    if (t >= knots_[last]) return last - 1;
    int lo_i = degree_, hi_i = last;
    while (hi_i - lo_i > 1) {
      const int mid = (lo_i + hi_i) / 2;
      (t < knots_[mid] ? hi_i : lo_i) = mid;
    }
    return lo_i;
  }

  std::vector<double> breaks_;
  std::vector<double> knots_;
  int degree_;
};

// Tensor product of two 1-d bases; basis l = (a, b) has value
// B_a(lon) * B_b(lat), with flattened column index a * L_lat + b.
struct TensorProductBasis {
  BSplineBasis1D lon;
  BSplineBasis1D lat;

  int size() const { return lon.size() * lat.size(); }
  int flat_index(int a, int b) const { return a * lat.size() + b; }
};

// Rows of M are locations, columns tensor basis functions. Out-of-hull
// locations are reported with their index.
inline Eigen::MatrixXd tensor_basis_matrix(
    const std::vector<std::pair<double, double>>& locations,
    const TensorProductBasis& basis) {
  Eigen::MatrixXd m(locations.size(), basis.size());
  for (std::size_t j = 0; j < locations.size(); ++j) {
    const auto [x, y] = locations[j];
    if (x < basis.lon.lo() || x > basis.lon.hi() || y < basis.lat.lo() ||
        y > basis.lat.hi())
      throw std::invalid_argument("tensor_basis_matrix: location " + std::to_string(j) +
                                  " outside hull");
    const Eigen::VectorXd bx = basis.lon.eval(x);
    const Eigen::VectorXd by = basis.lat.eval(y);
    for (int a = 0; a < bx.size(); ++a)
      for (int b = 0; b < by.size(); ++b)
        m(static_cast<int>(j), basis.flat_index(a, b)) = bx[a] * by[b];
  }
  return m;
}

// Basis-expanded design X M; the shrinkage prior then acts on the spline
// coefficients.
inline Eigen::MatrixXd expand_design(const Eigen::MatrixXd& x, const Eigen::MatrixXd& m) {
  if (x.cols() != m.rows())
    throw std::invalid_argument("expand_design: X columns must match M rows");
  return x * m;
}

}  // namespace sgl
