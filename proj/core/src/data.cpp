#include "rose/data.hpp"

#include "rose/error.hpp"
#include "rose/exact_sum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rose {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::ZeroVarianceColumn: return "ZeroVarianceColumn";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BoundaryActive: return "BoundaryActive";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidSplit: return "InvalidSplit";
    case ErrorKind::SingularHessian: return "SingularHessian";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::ZeroNewtonDenominator: return "ZeroNewtonDenominator";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::AllRepsFailed: return "AllRepsFailed";
  }
  return "Unknown";
}

Dataset Dataset::rows(Eigen::Index begin, Eigen::Index end) const {
  return Dataset{x.middleRows(begin, end - begin), y.segment(begin, end - begin)};
}

SupportSet::SupportSet(std::vector<int> indices) : indices_(std::move(indices)) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 0 || (k > 0 && indices_[k] <= indices_[k - 1])) {
      throw Error(ErrorKind::InvalidArgument,
                  "support indices must be nonnegative and strictly increasing",
                  static_cast<long>(k));
    }
  }
}

bool SupportSet::contains(int j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

void SolverConfig::validate(Eigen::Index p) const {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be > 0");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
  if (!(step_size >= 0.0)) throw Error(ErrorKind::InvalidArgument, "step_size must be >= 0");
  if (!(lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be positive");
  if (weights) {
    if (weights->size() != p) {
      throw Error(ErrorKind::DimensionMismatch, "weights length must equal p");
    }
    if ((weights->array() < 0.0).any() || !weights->allFinite()) {
      throw Error(ErrorKind::InvalidArgument, "weights must be finite and >= 0");
    }
  }
}

bool operator==(const SolverConfig& a, const SolverConfig& b) {
  if (a.weights.has_value() != b.weights.has_value()) return false;
  if (a.weights && (a.weights->size() != b.weights->size() || *a.weights != *b.weights)) {
    return false;
  }
  return a.lambda == b.lambda && a.step_size == b.step_size && a.radius == b.radius &&
         a.tol == b.tol && a.max_iter == b.max_iter;
}

void validate_dataset(const Dataset& d) {
  if (d.x.rows() != d.y.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "x has " + std::to_string(d.x.rows()) + " rows but y has length " +
                    std::to_string(d.y.size()));
  }
  if (d.n() < 1 || d.p() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "dataset needs n >= 1 and p >= 1");
  }
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (!std::isfinite(d.y(i))) {
      throw Error(ErrorKind::NonFiniteValue, "y[" + std::to_string(i) + "] is not finite", i);
    }
    for (Eigen::Index j = 0; j < d.p(); ++j) {
      if (!std::isfinite(d.x(i, j))) {
        throw Error(ErrorKind::NonFiniteValue,
                    "x[" + std::to_string(i) + "," + std::to_string(j) + "] is not finite", i);
      }
    }
  }
}

namespace {

struct ColumnMoments {
  Vector mean;
  Vector sd;
};

// Exactly rounded sums make the moments, and so the standardized matrix,
// independent of row order.
ColumnMoments column_moments(const Matrix& x) {
  const double n = static_cast<double>(x.rows());
  ColumnMoments m{Vector(x.cols()), Vector(x.cols())};
  Vector sq(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    m.mean(j) = exact_sum({x.col(j).data(), static_cast<std::size_t>(x.rows())}) / n;
    sq = (x.col(j).array() - m.mean(j)).square();
    m.sd(j) = std::sqrt(exact_sum({sq.data(), static_cast<std::size_t>(sq.size())}) / n);
  }
  return m;
}

bool is_constant(const Matrix& x, Eigen::Index j) {
  return (x.col(j).array() == x(0, j)).all();
}

}  // namespace

CoefVector StandardizeRecord::to_original(const CoefVector& beta_std) const {
  return beta_std.cwiseQuotient(x_scale);
}

Standardized standardize(const Dataset& d) {
  const ColumnMoments m = column_moments(d.x);
  for (Eigen::Index j = 0; j < d.p(); ++j) {
    if (is_constant(d.x, j) || !(m.sd(j) > 0.0)) {
      throw Error(ErrorKind::ZeroVarianceColumn, "column " + std::to_string(j) + " is constant",
                  static_cast<long>(j));
    }
  }
  Standardized out;
  out.record.x_mean = m.mean;
  out.record.x_scale = m.sd;
  out.record.y_mean = d.y.mean();
  out.data.x = (d.x.rowwise() - m.mean.transpose()).array().rowwise() / m.sd.transpose().array();
  out.data.y = d.y.array() - out.record.y_mean;
  return out;
}

Matrix center_scale_columns(const Matrix& x) {
  const ColumnMoments m = column_moments(x);
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (is_constant(x, j) || !(m.sd(j) > 0.0)) {
      out.col(j).setZero();
    } else {
      out.col(j) = (x.col(j).array() - m.mean(j)) / m.sd(j);
    }
  }
  return out;
}

}  // namespace rose
