#include "theta_extremal/measure.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace theta_extremal {

namespace {

void require_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::domain_error("theta must lie in (0, 1), got " + std::to_string(theta));
  }
}

} // namespace

DiscreteMeasure::DiscreteMeasure(PointSet points, Eigen::VectorXd weights) {
  if (points.rows() != weights.size()) {
    throw std::invalid_argument("DiscreteMeasure: " + std::to_string(points.rows()) +
                                " points but " + std::to_string(weights.size()) +
                                " weights");
  }
  if (points.cols() < 2) {
    throw std::invalid_argument("DiscreteMeasure: points need >= 2 coordinates");
  }
  double total = 0.0;
  int kept = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw std::invalid_argument("DiscreteMeasure: weights must be finite and >= 0");
    }
    if (std::abs(points.row(i).norm() - 1.0) > SpherePoint::kNormTolerance) {
      throw std::invalid_argument("DiscreteMeasure: point " + std::to_string(i) +
                                  " is not on the unit sphere");
    }
    total += weights[i];
    kept += weights[i] > 0.0 ? 1 : 0;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("DiscreteMeasure: weights sum to " +
                                std::to_string(total) + ", expected 1");
  }
  if (kept == 0) {
    throw std::invalid_argument("DiscreteMeasure: empty support");
  }
  points_.resize(kept, points.cols());
  weights_.resize(kept);
  Eigen::Index out = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      points_.row(out) = points.row(i);
      weights_[out] = weights[i];
      ++out;
    }
  }
}

DiscreteMeasure DiscreteMeasure::uniform(PointSet points) {
  const auto n = points.rows();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  // 1/N summed N times may miss 1 by an ulp or two; that is within tolerance.
  return DiscreteMeasure(std::move(points), std::move(w));
}

DiscreteMeasure DiscreteMeasure::normalized(PointSet points, Eigen::VectorXd weights,
                                            double tolerance) {
  if (points.rows() != weights.size()) {
    throw std::invalid_argument("DiscreteMeasure: points/weights size mismatch");
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double norm = points.row(i).norm();
    if (std::abs(norm - 1.0) > tolerance) {
      throw std::invalid_argument("DiscreteMeasure: point " + std::to_string(i) +
                                  " has norm " + std::to_string(norm));
    }
    points.row(i) /= norm;
  }
  const double total = weights.sum();
  if (std::abs(total - 1.0) > tolerance) {
    throw std::invalid_argument("DiscreteMeasure: weights sum to " +
                                std::to_string(total));
  }
  weights /= total;
  return DiscreteMeasure(std::move(points), std::move(weights));
}

DiscreteMeasure DiscreteMeasure::transformed(const Eigen::MatrixXd &q) const {
  if (q.rows() != points_.cols() || q.cols() != points_.cols()) {
    throw std::invalid_argument("transformed: matrix size mismatch");
  }
  PointSet moved = points_ * q;
  for (Eigen::Index i = 0; i < moved.rows(); ++i) {
    moved.row(i).normalize();
  }
  return DiscreteMeasure(std::move(moved), weights_);
}

double theta_energy(const DiscreteMeasure &measure, double theta) {
  require_theta(theta);
  double e = 0.0;
  for (double w : measure.weights()) {
    if (w > 0.0) {
      e += std::pow(w, theta);
    }
  }
  return e;
}

Eigen::VectorXd moment_residual(const DiscreteMeasure &measure,
                                const MomentBasis &basis) {
  return moment_residual(measure.points(), measure.weights(), basis);
}

Feasibility is_feasible(const DiscreteMeasure &measure, const MomentBasis &basis,
                        double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("is_feasible: tolerance must be positive");
  }
  const double norm = moment_residual(measure, basis).norm();
  return {norm < tol, norm};
}

Feasibility is_feasible(const DiscreteMeasure &measure, int m, double tol) {
  return is_feasible(measure, MomentBasis::build(measure.dimension(), m), tol);
}

DiscreteMeasure merge_close_points(const DiscreteMeasure &measure, double dist_tol) {
  if (!(dist_tol >= 0.0)) {
    throw std::invalid_argument("merge_close_points: tolerance must be >= 0");
  }
  const int n = measure.size();
  const PointSet &pts = measure.points();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      auto &p = parent[static_cast<std::size_t>(i)];
      p = parent[static_cast<std::size_t>(p)];
      i = p;
    }
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = geodesic_distance(Eigen::VectorXd(pts.row(i).transpose()),
                                         Eigen::VectorXd(pts.row(j).transpose()));
      if (d <= dist_tol) {
        const int a = find(i);
        const int b = find(j);
        if (a != b) {
          parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
      }
    }
  }

  // Clusters in order of their first atom.
  std::vector<int> cluster_of(static_cast<std::size_t>(n), -1);
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (cluster_of[static_cast<std::size_t>(r)] < 0) {
      cluster_of[static_cast<std::size_t>(r)] = static_cast<int>(roots.size());
      roots.push_back(r);
    }
  }
  const auto k = static_cast<Eigen::Index>(roots.size());
  if (k == n) {
    return measure;
  }
  PointSet sums = PointSet::Zero(k, pts.cols());
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(k);
  for (int i = 0; i < n; ++i) {
    const int c = cluster_of[static_cast<std::size_t>(find(i))];
    sums.row(c) += measure.weights()[i] * pts.row(i);
    weights[c] += measure.weights()[i];
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    const double norm = sums.row(c).norm();
    if (!(norm > 1e-12 * weights[c])) {
      throw std::domain_error(
          "merge_close_points: weighted mean of a cluster vanishes "
          "(antipodal atoms); refusing to merge");
    }
    sums.row(c) /= norm;
  }
  weights /= weights.sum();
  return DiscreteMeasure(std::move(sums), std::move(weights));
}

GramFrame build_gram_frame(const DiscreteMeasure &measure) {
  const int n = measure.dimension().value();
  const int size = measure.size();
  GramFrame frame;
  frame.vectors.resize(size, n + 2);
  for (int i = 0; i < size; ++i) {
    const double w = measure.weights()[i];
    frame.vectors(i, 0) = std::sqrt(w);
    const double scale = std::sqrt((n + 1) * w);
    for (int a = 0; a < n + 1; ++a) {
      frame.vectors(i, a + 1) = scale * measure.points()(i, a);
    }
  }
  return frame;
}

GramCertificate gram_certificate_m2(const DiscreteMeasure &measure, double theta,
                                    double tolerance) {
  require_theta(theta);
  const int n = measure.dimension().value();
  const int k = n + 2;
  const GramFrame frame = build_gram_frame(measure);
  const Eigen::MatrixXd gram = frame.vectors.transpose() * frame.vectors;

  GramCertificate cert;
  cert.max_orthonormality_deviation =
      (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
  cert.parseval_sums = frame.vectors.rowwise().squaredNorm();
  cert.nominal_lower_bound = std::pow(static_cast<double>(k), 1.0 - theta);
  const double lambda_max_bound = 1.0 + k * cert.max_orthonormality_deviation;
  cert.certified_lower_bound =
      cert.nominal_lower_bound * std::pow(lambda_max_bound, theta - 1.0);
  cert.slack = cert.nominal_lower_bound - cert.certified_lower_bound;

  if (measure.size() < k) {
    cert.reason = "support of size " + std::to_string(measure.size()) +
                  " cannot carry " + std::to_string(k) + " orthonormal vectors";
    return cert;
  }
  if (cert.max_orthonormality_deviation >= tolerance) {
    cert.reason = "frame is not orthonormal (measure violates the degree-2 "
                  "moment conditions)";
    return cert;
  }
  if (cert.parseval_sums.maxCoeff() > 1.0 + tolerance) {
    cert.reason = "a Parseval sum exceeds 1";
    return cert;
  }
  cert.applicable = true;
  return cert;
}

CircleCertificate circle_certificate(const DiscreteMeasure &measure, int m,
                                     double theta, double tolerance) {
  require_theta(theta);
  if (measure.dimension().value() != 1) {
    throw std::invalid_argument("circle_certificate: measure must live on S^1");
  }
  if (m < 1) {
    throw std::invalid_argument("circle_certificate: m must be >= 1");
  }
  const int size = measure.size();
  const int k = m + 1;
  Eigen::MatrixXcd u(size, k);
  for (int j = 0; j < size; ++j) {
    const std::complex<double> z(measure.points()(j, 0), measure.points()(j, 1));
    std::complex<double> zk(std::sqrt(measure.weights()[j]), 0.0);
    for (int c = 0; c < k; ++c) {
      u(j, c) = zk;
      zk *= z;
    }
  }
  // <u_k, u_l> = u_k^T conj(u_l)
  const Eigen::MatrixXcd gram = u.transpose() * u.conjugate();

  CircleCertificate cert;
  cert.max_unitarity_deviation =
      (gram - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff();
  cert.parseval_sums = u.rowwise().squaredNorm();
  cert.nominal_lower_bound = std::pow(static_cast<double>(k), 1.0 - theta);
  cert.certified_lower_bound =
      cert.nominal_lower_bound *
      std::pow(1.0 + k * cert.max_unitarity_deviation, theta - 1.0);
  if (size < k) {
    cert.reason = "support of size " + std::to_string(size) + " cannot carry " +
                  std::to_string(k) + " orthonormal vectors in C^N";
    return cert;
  }
  if (cert.max_unitarity_deviation >= tolerance) {
    cert.reason = "vectors are not orthonormal (measure violates the moment "
                  "conditions)";
    return cert;
  }
  cert.applicable = true;
  return cert;
}

} // namespace theta_extremal
