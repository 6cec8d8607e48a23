#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "remark/tolerances.hpp"

namespace remark {

using Count = std::int64_t;
using CountVector = std::vector<Count>;
using Vector = std::vector<double>;

// Error hierarchy. The CLI maps ParseError to exit code 2 and the
// parameter/domain errors to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Six significant digits, the precision used for all human-facing text.
inline std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline std::string format_vector(const Vector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  return out + ")";
}

/// Dense row-major matrix. Dimensions here are tiny (a handful of colours),
/// so no expression templates or BLAS.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix from_rows(const std::vector<Vector>& rows) {
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw DimensionMismatch("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  Vector column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  std::vector<Vector> to_rows() const {
    std::vector<Vector> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
  return out;
}

inline Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector product: dimensions differ");
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * x[j];
  return out;
}

inline double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product: lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

/// Marking parameter a: entries in [0,1] with |a| <= 1. The slack on the
/// weight is tol::kInvariantSlack.
class ProbVector {
 public:
  ProbVector() = default;
  explicit ProbVector(Vector values) : values_(std::move(values)) { validate(); }
  ProbVector(std::initializer_list<double> values) : values_(values) { validate(); }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const Vector& values() const noexcept { return values_; }

  double weight() const noexcept {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }

  /// Probability of discarding an item, clamped at zero inside the slack.
  double discard() const noexcept { return std::max(0.0, 1.0 - weight()); }

 private:
  void validate() const {
    if (values_.empty()) throw InvalidParameter("a must have at least one entry");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double v = values_[i];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidParameter("a[" + std::to_string(i + 1) + "] = " + format_number(v) +
                               " outside [0, 1]");
      }
    }
    const double w = weight();
    if (w > 1.0 + tol::kInvariantSlack)
      throw InvalidParameter("|a| = " + format_number(w) + " exceeds 1");
  }

  Vector values_;
};

/// Re-marking matrix A (c new colours x d original colours); each column is a
/// ProbVector.
class SubstochasticMatrix {
 public:
  SubstochasticMatrix() = default;
  explicit SubstochasticMatrix(Matrix m) : m_(std::move(m)) { validate(); }
  SubstochasticMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : m_(rows) {
    validate();
  }

  static SubstochasticMatrix identity(std::size_t n) {
    return SubstochasticMatrix(Matrix::identity(n));
  }

  std::size_t rows() const noexcept { return m_.rows(); }
  std::size_t cols() const noexcept { return m_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  ProbVector column(std::size_t j) const { return ProbVector(m_.column(j)); }

 private:
  void validate() const {
    if (m_.rows() == 0 || m_.cols() == 0) throw InvalidParameter("A must be non-empty");
    for (std::size_t j = 0; j < m_.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m_.rows(); ++i) {
        const double v = m_(i, j);
        if (!(v >= 0.0 && v <= 1.0)) {
          throw InvalidParameter("A[" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                 "] = " + format_number(v) + " outside [0, 1]");
        }
        s += v;
      }
      if (s > 1.0 + tol::kInvariantSlack) {
        throw InvalidParameter("column " + std::to_string(j + 1) + " of A sums to " +
                               format_number(s) + ", exceeds 1");
      }
    }
  }

  Matrix m_;
};

/// Vector of nonnegative falling-factorial orders k = (k_1, ..., k_c).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> k) : k_(std::move(k)) { validate(); }
  MultiIndex(std::initializer_list<int> k) : k_(k) { validate(); }

  std::size_t size() const noexcept { return k_.size(); }
  int operator[](std::size_t i) const { return k_[i]; }
  const std::vector<int>& values() const noexcept { return k_; }
  int order() const noexcept {
    int s = 0;
    for (int v : k_) s += v;
    return s;
  }

 private:
  void validate() const {
    for (int v : k_)
      if (v < 0) throw InvalidParameter("multi-index entries must be nonnegative");
  }

  std::vector<int> k_;
};

}  // namespace remark
