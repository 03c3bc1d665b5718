#include "rbbr/simplex.hpp"

#include <cmath>
#include <sstream>

namespace rbbr {

namespace {

std::string describe(const Vec& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index j = 0; j < x.size(); ++j) os << (j ? "," : "") << x(j);
  os << ')';
  return os.str();
}

}  // namespace

bool is_simplex_point(const Vec& x, double tol) {
  if (x.size() == 0 || !x.allFinite()) return false;
  return x.minCoeff() >= 0.0 && std::abs(x.sum() - 1.0) <= tol;
}

SimplexPoint::SimplexPoint(Vec entries) : entries_(std::move(entries)) {
  if (!is_simplex_point(entries_))
    throw Error(ErrorKind::Domain, "not a simplex point: " + describe(entries_));
}

SimplexPoint SimplexPoint::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::Domain, "simplex dimension must be positive");
  return SimplexPoint(Vec::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
}

SimplexPoint SimplexPoint::vertex(std::size_t n, std::size_t k) {
  if (k >= n) throw Error(ErrorKind::Domain, "vertex index out of range");
  Vec e = Vec::Zero(static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(k)) = 1.0;
  return SimplexPoint(std::move(e));
}

TangentVector::TangentVector(Vec entries) : entries_(std::move(entries)) {
  const double scale = std::max(1.0, entries_.cwiseAbs().sum());
  if (!entries_.allFinite() || std::abs(entries_.sum()) > kSimplexTol * scale)
    throw Error(ErrorKind::Domain, "not a tangent vector: " + describe(entries_));
}

TangentVector tangent_project(const Vec& u) {
  if (u.size() < 2) throw Error(ErrorKind::Domain, "tangent_project needs n >= 2");
  if (!u.allFinite()) throw Error(ErrorKind::Domain, "non-finite input " + describe(u));
  return TangentVector(u.array() - u.mean());
}

SimplexPoint renormalize(const Vec& x, double tol) {
  if (is_simplex_point(x)) return SimplexPoint(x);
  if (x.size() == 0 || !x.allFinite() || x.minCoeff() < -tol || std::abs(x.sum() - 1.0) > tol)
    throw DriftError("state left the simplex beyond tolerance: " + describe(x), x);
  Vec y = x.cwiseMax(0.0);
  y /= y.sum();
  return SimplexPoint(std::move(y));
}

Mat tangent_basis(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Mat diffs = Mat::Zero(m, m - 1);
  for (Eigen::Index j = 0; j + 1 < m; ++j) {
    diffs(j, j) = 1.0;
    diffs(j + 1, j) = -1.0;
  }
  Eigen::HouseholderQR<Mat> qr(diffs);
  return qr.householderQ() * Mat::Identity(m, m - 1);
}

}  // namespace rbbr
