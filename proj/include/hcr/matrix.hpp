#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "hcr/error.hpp"

namespace hcr {

// Dense row-major matrix of doubles. Rows are the unit of access throughout
// the library: frames, sub-action representations, cost-matrix rows.
class Matrix {
 public:
  Matrix() = default;

  Matrix(int rows, int cols, double fill = 0.0) {
    if (rows < 0 || cols < 0) {
      throw InvalidArgument("matrix dimensions must be non-negative");
    }
    rows_ = rows;
    cols_ = cols;
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m;
    m.rows_ = static_cast<int>(rows.size());
    m.cols_ = rows.size() == 0 ? 0 : static_cast<int>(rows.begin()->size());
    m.data_.reserve(static_cast<std::size_t>(m.rows_) * m.cols_);
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != m.cols_) {
        throw InvalidArgument("all rows must have the same length");
      }
      m.data_.insert(m.data_.end(), row.begin(), row.end());
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(int r, int c) { return data_[index(r, c)]; }
  double operator()(int r, int c) const { return data_[index(r, c)]; }

  std::span<const double> row(int r) const {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
  }
  std::span<double> row(int r) {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
  }

  const std::vector<double>& values() const { return data_; }
  std::vector<double>& values() { return data_; }

  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_norm(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("euclidean_distance: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Cosine similarity in [-1, 1]; refuses zero-norm inputs rather than invent
// a value for them.
inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw DegenerateVector("cosine similarity undefined for zero-norm vector");
  }
  return dot(a, b) / (na * nb);
}

inline std::vector<double> column_mean(const Matrix& m) {
  if (m.rows() == 0) throw InvalidArgument("column_mean: empty matrix");
  std::vector<double> out(static_cast<std::size_t>(m.cols()), 0.0);
  for (int r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (int c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(c)] += row[static_cast<std::size_t>(c)];
  }
  for (double& v : out) v /= m.rows();
  return out;
}

inline std::vector<double> column_max(const Matrix& m) {
  if (m.rows() == 0) throw InvalidArgument("column_max: empty matrix");
  std::vector<double> out(m.row(0).begin(), m.row(0).end());
  for (int r = 1; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (int c = 0; c < m.cols(); ++c) {
      const auto ci = static_cast<std::size_t>(c);
      if (row[ci] > out[ci]) out[ci] = row[ci];
    }
  }
  return out;
}

}  // namespace hcr
