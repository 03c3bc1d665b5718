#include "rbbr/regularizers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rbbr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(const Vec& u) {
  if (u.size() == 0) throw Error(ErrorKind::Domain, "empty payoff vector");
  if (!u.allFinite()) throw Error(ErrorKind::Domain, "payoff vector has non-finite entries");
}

[[noreturn]] void fail_bracket(const char* who, double lo, double hi, double f) {
  std::ostringstream os;
  os.precision(17);
  os << who << ": no convergence after " << kRootMaxIter << " iterations; bracket [" << lo
     << ", " << hi << "], sum residual " << f;
  throw Error(ErrorKind::Solver, os.str());
}

bool converged(double f, double lo, double hi, std::size_t n) {
  return std::abs(f) <= 1e-15 * static_cast<double>(n) ||
         hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi);
}

// Offsets d_j = max(u) - u_j >= 0; every solver below is parametrised by a
// shifted multiplier t > 0 so large common payoff levels cancel exactly.
Vec gaps(const Vec& u) { return (u.maxCoeff() - u.array()).matrix(); }

Vec shannon_argmax(double e, const Vec& u) {
  const Vec d = gaps(u);
  // lambda - max(u) = e log sum exp(-d/e)
  const double shift = e * std::log((-d.array() / e).exp().sum());
  Vec y = (-(d.array() + shift) / e).exp().matrix();
  return y / y.sum();
}

// sum_j e / (t + d_j) = 1 on t in (0, n e], safeguarded Newton from the left.
Vec burg_argmax(double e, const Vec& u) {
  const Vec d = gaps(u);
  const auto n = static_cast<std::size_t>(u.size());
  double lo = 0.0;
  double hi = e * static_cast<double>(n);
  double t = e;
  double f = kInf;
  for (int it = 0; it < kRootMaxIter; ++it) {
    const Eigen::ArrayXd inv = e / (t + d.array());
    f = inv.sum() - 1.0;
    if (f > 0.0) lo = t; else hi = t;
    if (converged(f, lo, hi, n)) {
      Vec y = inv.matrix();
      return y / y.sum();
    }
    const double df = -(inv.square() / e).sum();
    double next = t - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  if (std::abs(f) <= kRootTol) {
    Vec y = (e / (t + d.array())).matrix();
    return y / y.sum();
  }
  fail_bracket("burg conjugate solver", lo, hi, f);
}

// sum_j c_j(t)^{1/(q-1)} = 1 with c_j = (t + d_j)(1-q)/(e q), by bisection.
Vec tsallis_argmax(double e, double q, const Vec& u) {
  const Vec d = gaps(u);
  const auto n = static_cast<std::size_t>(u.size());
  const double a = (1.0 - q) / (e * q);
  const double p = 1.0 / (q - 1.0);
  auto weights = [&](double t) { return (((t + d.array()) * a).pow(p)).eval(); };
  double lo = 0.0;
  double hi = e * q * std::pow(static_cast<double>(n), 1.0 - q) / (1.0 - q);
  double f = kInf;
  for (int it = 0; it < kRootMaxIter; ++it) {
    const double t = 0.5 * (lo + hi);
    const Eigen::ArrayXd x = weights(t);
    f = x.sum() - 1.0;
    if (f > 0.0) lo = t; else hi = t;
    if (converged(f, lo, hi, n) || (it + 1 == kRootMaxIter && std::abs(f) <= kRootTol)) {
      Vec y = x.matrix();
      return y / y.sum();
    }
  }
  fail_bracket("tsallis conjugate solver", lo, hi, f);
}

}  // namespace

Regularizer Regularizer::shannon() { return {RegularizerKind::Shannon, 0.0, 1.0}; }

Regularizer Regularizer::tsallis(double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::Domain, "Tsallis parameter q must lie in (0,1)");
  return {RegularizerKind::Tsallis, q, 1.0};
}

Regularizer Regularizer::burg() { return {RegularizerKind::Burg, 0.0, 1.0}; }

Regularizer Regularizer::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw Error(ErrorKind::Domain, "regularizer scale must be positive and finite");
  return {kind_, q_, scale_ * factor};
}

std::string Regularizer::name() const {
  switch (kind_) {
    case RegularizerKind::Shannon: return "shannon";
    case RegularizerKind::Tsallis: {
      std::ostringstream os;
      os << "tsallis(q=" << q_ << ")";
      return os.str();
    }
    case RegularizerKind::Burg: return "burg";
  }
  return "unknown";
}

double Regularizer::value(const Vec& x) const {
  double s = 0.0;
  switch (kind_) {
    case RegularizerKind::Shannon:
      for (Eigen::Index j = 0; j < x.size(); ++j)
        if (x(j) > 0.0) s += x(j) * std::log(x(j));
      break;
    case RegularizerKind::Tsallis:
      for (Eigen::Index j = 0; j < x.size(); ++j) s += x(j) - std::pow(x(j), q_);
      s /= 1.0 - q_;
      break;
    case RegularizerKind::Burg:
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (x(j) <= 0.0) return kInf;
        s -= std::log(x(j));
      }
      break;
  }
  return scale_ * s;
}

Vec Regularizer::gradient(const Vec& x) const {
  if (x.size() == 0 || !(x.minCoeff() > 0.0))
    throw Error(ErrorKind::Domain, "regularizer gradient requires an interior point");
  Vec g(x.size());
  switch (kind_) {
    case RegularizerKind::Shannon:
      g = (1.0 + x.array().log()).matrix();
      break;
    case RegularizerKind::Tsallis:
      g = ((1.0 - q_ * x.array().pow(q_ - 1.0)) / (1.0 - q_)).matrix();
      break;
    case RegularizerKind::Burg:
      g = (-1.0 / x.array()).matrix();
      break;
  }
  return scale_ * g;
}

double Regularizer::strong_convexity_modulus() const noexcept {
  return scale_ * (kind_ == RegularizerKind::Tsallis ? q_ : 1.0);
}

NoiseLevel::NoiseLevel(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorKind::Domain, "noise level must be positive and finite");
}

SimplexPoint conjugate_argmax(const Regularizer& v, NoiseLevel eps, const Vec& u) {
  require_finite(u);
  const double e = eps.value() * v.scale();
  switch (v.kind()) {
    case RegularizerKind::Shannon: return SimplexPoint(shannon_argmax(e, u));
    case RegularizerKind::Tsallis: return SimplexPoint(tsallis_argmax(e, v.q(), u));
    case RegularizerKind::Burg: return SimplexPoint(burg_argmax(e, u));
  }
  throw Error(ErrorKind::Domain, "unknown regularizer");
}

double conjugate_value(const Regularizer& v, NoiseLevel eps, const Vec& u) {
  require_finite(u);
  if (v.kind() == RegularizerKind::Shannon) {
    const double e = eps.value() * v.scale();
    const double m = u.maxCoeff();
    return m + e * std::log(((u.array() - m) / e).exp().sum());
  }
  return perturbed_objective(v, eps, u, conjugate_argmax(v, eps, u).entries());
}

SimplexPoint logit_map(NoiseLevel eps, const Vec& u) {
  require_finite(u);
  Vec z = ((u.array() - u.maxCoeff()) / eps.value()).exp().matrix();
  return SimplexPoint(z / z.sum());
}

double kkt_residual(const Regularizer& v, NoiseLevel eps, const Vec& u, const Vec& y) {
  const Vec r = u - eps.value() * v.gradient(y);
  return (r.array() - r.mean()).abs().maxCoeff();
}

double perturbed_objective(const Regularizer& v, NoiseLevel eps, const Vec& u, const Vec& y) {
  return y.dot(u) - eps.value() * v.value(y);
}

}  // namespace rbbr
