#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sgl {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Scale priors from the model comparison table. None carries free
// hyperparameters except the truncated Cauchy's dimension J.
enum class ScalePriorKind { LogCauchy, HalfCauchy, TruncatedCauchy, FixedOne };
enum class RhoPriorKind { Uniform01, FixedZero };

struct ScalePrior {
  ScalePriorKind kind = ScalePriorKind::LogCauchy;
  int truncation_dim = 0;  // J, used by TruncatedCauchy only

  static ScalePrior log_cauchy() { return {ScalePriorKind::LogCauchy, 0}; }
  static ScalePrior half_cauchy() { return {ScalePriorKind::HalfCauchy, 0}; }
  static ScalePrior truncated_cauchy(int j) {
    if (j < 2) throw std::invalid_argument("truncated_cauchy: J >= 2 required");
    return {ScalePriorKind::TruncatedCauchy, j};
  }
  static ScalePrior fixed_one() { return {ScalePriorKind::FixedOne, 0}; }

  bool fixed() const { return kind == ScalePriorKind::FixedOne; }
};

struct RhoPrior {
  RhoPriorKind kind = RhoPriorKind::Uniform01;
  bool fixed() const { return kind == RhoPriorKind::FixedZero; }
};

// log[(1/x) / (pi^2 + log^2 x)], x > 0. Unbounded at the origin,
// super-heavy polynomial tails.
inline double log_density_log_cauchy(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("log_cauchy: x must be positive");
  const double lx = std::log(x);
  return -lx - std::log(M_PI * M_PI + lx * lx);
}

// log[2 / (pi (1 + x^2))], x > 0.
inline double log_density_half_cauchy(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("half_cauchy: x must be positive");
  return std::log(2.0 / M_PI) - std::log1p(x * x);
}

// Cauchy kernel 1/(1+x^2) restricted and renormalized to [1/J, 1];
// -inf outside the support.
inline double log_density_truncated_cauchy(double x, int J) {
  if (J < 2) throw std::invalid_argument("truncated_cauchy: J >= 2 required");
  const double lo = 1.0 / J;
  if (x < lo || x > 1.0) return kNegInf;
  const double norm = std::atan(1.0) - std::atan(lo);
  return -std::log1p(x * x) - std::log(norm);
}

inline double scale_prior_log_density(const ScalePrior& p, double x) {
  switch (p.kind) {
    case ScalePriorKind::LogCauchy: return log_density_log_cauchy(x);
    case ScalePriorKind::HalfCauchy: return log_density_half_cauchy(x);
    case ScalePriorKind::TruncatedCauchy:
      return log_density_truncated_cauchy(x, p.truncation_dim);
    case ScalePriorKind::FixedOne: return 0.0;  // point mass at 1; state pinned
  }
  return kNegInf;
}

// Log density evaluated at x = exp(v), computed directly in log space so
// extreme v (where exp(v) would under- or overflow a double) stays finite.
inline double scale_prior_log_density_at_log(const ScalePrior& p, double v) {
  switch (p.kind) {
    case ScalePriorKind::LogCauchy:
      return -v - std::log(M_PI * M_PI + v * v);
    case ScalePriorKind::HalfCauchy: {
      const double t = v > 0.0 ? -2.0 * v - std::log1p(std::exp(-2.0 * v))
                               : -std::log1p(std::exp(2.0 * v));
      return std::log(2.0 / M_PI) + t;
    }
    case ScalePriorKind::TruncatedCauchy: {
      if (p.truncation_dim < 2)
        throw std::invalid_argument("truncated_cauchy: J >= 2 required");
      if (v < -std::log(static_cast<double>(p.truncation_dim)) || v > 0.0)
        return kNegInf;
      const double norm = std::atan(1.0) - std::atan(1.0 / p.truncation_dim);
      return -std::log1p(std::exp(2.0 * v)) - std::log(norm);
    }
    case ScalePriorKind::FixedOne:
      return 0.0;
  }
  return kNegInf;
}

// log sigmoid(eta*x): smooth softening of the hard positivity indicator.
// Stable for |eta*x| up to 1e4 and beyond.
inline double soft_positivity_log(double x, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("soft_positivity: eta must be positive");
  const double t = eta * x;
  if (t >= 0.0) return -std::log1p(std::exp(-t));
  return t - std::log1p(std::exp(t));
}

inline ScalePrior parse_scale_prior(const std::string& name, int J) {
  if (name == "LC") return ScalePrior::log_cauchy();
  if (name == "HS") return ScalePrior::half_cauchy();
  if (name == "TC") return ScalePrior::truncated_cauchy(J);
  if (name == "fixed1") return ScalePrior::fixed_one();
  throw std::invalid_argument("unknown scale prior '" + name + "' (expect LC|HS|TC|fixed1)");
}

inline RhoPrior parse_rho_prior(const std::string& name) {
  if (name == "unif01") return {RhoPriorKind::Uniform01};
  if (name == "zero") return {RhoPriorKind::FixedZero};
  throw std::invalid_argument("unknown rho prior '" + name + "' (expect unif01|zero)");
}

}  // namespace sgl
