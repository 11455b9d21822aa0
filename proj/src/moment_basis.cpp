#include "theta_extremal/moment_basis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace theta_extremal {

double monomial_sphere_average(Dimension n, std::span<const int> exponents) {
  if (static_cast<int>(exponents.size()) != n.ambient()) {
    throw std::invalid_argument("monomial_sphere_average: expected " +
                                std::to_string(n.ambient()) + " exponents");
  }
  int total = 0;
  double numerator = 1.0;
  for (int a : exponents) {
    if (a < 0) {
      throw std::invalid_argument("monomial_sphere_average: negative exponent");
    }
    if (a % 2 != 0) {
      return 0.0;
    }
    for (int k = a - 1; k > 1; k -= 2) {
      numerator *= k;
    }
    total += a;
  }
  double denominator = 1.0;
  for (int k = 0; k < total / 2; ++k) {
    denominator *= static_cast<double>(n.value() + 1 + 2 * k);
  }
  return numerator / denominator;
}

std::vector<MultiIndex> graded_monomials(int variables, int max_degree) {
  std::vector<MultiIndex> out;
  MultiIndex current(static_cast<std::size_t>(variables), 0);
  // Lexicographically descending compositions of `degree`.
  std::function<void(int, int)> emit = [&](int var, int remaining) {
    if (var == variables - 1) {
      current[static_cast<std::size_t>(var)] = remaining;
      out.push_back(current);
      return;
    }
    for (int a = remaining; a >= 0; --a) {
      current[static_cast<std::size_t>(var)] = a;
      emit(var + 1, remaining - a);
    }
  };
  for (int degree = 1; degree <= max_degree; ++degree) {
    emit(0, degree);
  }
  return out;
}

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) {
    return 0.0;
  }
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

} // namespace

int mean_zero_space_dimension(Dimension n, int m) {
  if (m < 0) {
    throw std::invalid_argument("degree must be nonnegative");
  }
  const int nv = n.value();
  const double dim = binomial(m + nv, nv) + binomial(m + nv - 1, nv) - 1.0;
  return static_cast<int>(std::lround(dim));
}

MomentBasis MomentBasis::build(Dimension n, int m) {
  if (m < 1) {
    throw std::invalid_argument("MomentBasis: degree must be >= 1");
  }
  MomentBasis basis(n, m);
  const int d = n.ambient();
  basis.monomials_ = graded_monomials(d, m);
  const auto count = static_cast<Eigen::Index>(basis.monomials_.size());

  basis.averages_.resize(count);
  for (Eigen::Index a = 0; a < count; ++a) {
    basis.averages_[a] = monomial_sphere_average(
        n, basis.monomials_[static_cast<std::size_t>(a)]);
  }

  // Gram matrix of the centered monomials under the normalized measure.
  Eigen::MatrixXd gram(count, count);
  MultiIndex sum(static_cast<std::size_t>(d));
  for (Eigen::Index a = 0; a < count; ++a) {
    for (Eigen::Index b = a; b < count; ++b) {
      const auto &ma = basis.monomials_[static_cast<std::size_t>(a)];
      const auto &mb = basis.monomials_[static_cast<std::size_t>(b)];
      std::transform(ma.begin(), ma.end(), mb.begin(), sum.begin(), std::plus<>());
      gram(a, b) = monomial_sphere_average(n, sum) -
                   basis.averages_[a] * basis.averages_[b];
      gram(b, a) = gram(a, b);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("MomentBasis: eigen-decomposition failed");
  }
  const Eigen::VectorXd &values = eig.eigenvalues();
  const Eigen::MatrixXd &vectors = eig.eigenvectors();

  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = count - 1; k >= 0; --k) {
    if (values[k] > kEigenCutoff) {
      kept.push_back(k);
    }
  }
  basis.coefficients_.resize(static_cast<Eigen::Index>(kept.size()), count);
  for (std::size_t row = 0; row < kept.size(); ++row) {
    const Eigen::Index k = kept[row];
    Eigen::VectorXd v = vectors.col(k) / std::sqrt(values[k]);
    // Fix the eigenvector sign so the largest entry is positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) {
      v = -v;
    }
    basis.coefficients_.row(static_cast<Eigen::Index>(row)) = v.transpose();
  }
  return basis;
}

Eigen::VectorXd MomentBasis::centered_monomials(const Eigen::VectorXd &x) const {
  const int d = n_.ambient();
  if (x.size() != d) {
    throw std::invalid_argument("MomentBasis: point dimension mismatch");
  }
  Eigen::MatrixXd powers(d, m_ + 1);
  for (int j = 0; j < d; ++j) {
    powers(j, 0) = 1.0;
    for (int k = 1; k <= m_; ++k) {
      powers(j, k) = powers(j, k - 1) * x[j];
    }
  }
  Eigen::VectorXd values(static_cast<Eigen::Index>(monomials_.size()));
  for (std::size_t a = 0; a < monomials_.size(); ++a) {
    double v = 1.0;
    for (int j = 0; j < d; ++j) {
      v *= powers(j, monomials_[a][static_cast<std::size_t>(j)]);
    }
    values[static_cast<Eigen::Index>(a)] = v;
  }
  return values - averages_;
}

Eigen::VectorXd MomentBasis::evaluate(const Eigen::VectorXd &x) const {
  return coefficients_ * centered_monomials(x);
}

Eigen::MatrixXd MomentBasis::evaluate(const PointSet &points) const {
  Eigen::MatrixXd out(points.rows(), rank());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out.row(i) = evaluate(Eigen::VectorXd(points.row(i).transpose())).transpose();
  }
  return out;
}

Eigen::MatrixXd MomentBasis::jacobian(const Eigen::VectorXd &x) const {
  const int d = n_.ambient();
  if (x.size() != d) {
    throw std::invalid_argument("MomentBasis: point dimension mismatch");
  }
  Eigen::MatrixXd powers(d, m_ + 1);
  for (int j = 0; j < d; ++j) {
    powers(j, 0) = 1.0;
    for (int k = 1; k <= m_; ++k) {
      powers(j, k) = powers(j, k - 1) * x[j];
    }
  }
  const auto count = static_cast<Eigen::Index>(monomials_.size());
  Eigen::MatrixXd mono_grad = Eigen::MatrixXd::Zero(count, d);
  for (Eigen::Index a = 0; a < count; ++a) {
    const auto &alpha = monomials_[static_cast<std::size_t>(a)];
    for (int j = 0; j < d; ++j) {
      const int aj = alpha[static_cast<std::size_t>(j)];
      if (aj == 0) {
        continue;
      }
      double v = aj;
      for (int i = 0; i < d; ++i) {
        v *= powers(i, alpha[static_cast<std::size_t>(i)] - (i == j ? 1 : 0));
      }
      mono_grad(a, j) = v;
    }
  }
  return coefficients_ * mono_grad;
}

Eigen::VectorXd moment_residual(const PointSet &points,
                                const Eigen::VectorXd &weights,
                                const MomentBasis &basis) {
  if (points.cols() != basis.dimension().ambient()) {
    throw std::invalid_argument("moment_residual: measure lives on S^" +
                                std::to_string(points.cols() - 1) +
                                " but basis is for S^" +
                                std::to_string(basis.dimension().value()));
  }
  if (points.rows() != weights.size()) {
    throw std::invalid_argument("moment_residual: points/weights size mismatch");
  }
  return basis.evaluate(points).transpose() * weights;
}

} // namespace theta_extremal
