#include "lsgan/matrix.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "lsgan/error.hpp"

namespace lsgan {

namespace {
using RowMajorMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstRowMajorMap = Eigen::Map<
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
}  // namespace

Matrix::Matrix(int rows, int cols) : Matrix(uninitialized(rows, cols)) {
  fill(0.0);
}

Matrix Matrix::uninitialized(int rows, int cols) {
  if (rows < 0 || cols < 0 || (rows == 0) != (cols == 0)) {
    throw ShapeError("invalid matrix shape (" + std::to_string(rows) + ", " +
                     std::to_string(cols) + ")");
  }
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_.resize(static_cast<std::size_t>(rows) * cols);
  return m;
}

Matrix Matrix::constant(int rows, int cols, double value) {
  Matrix m = uninitialized(rows, cols);
  m.fill(value);
  return m;
}

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

std::string Matrix::shape_str() const {
  std::ostringstream os;
  os << "(" << rows_ << ", " << cols_ << ")";
  return os.str();
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ, " + a.shape_str() + " x " +
                     b.shape_str());
  }
  Matrix c = Matrix::uninitialized(a.rows(), b.cols());
  ConstRowMajorMap ma(a.data(), a.rows(), a.cols());
  ConstRowMajorMap mb(b.data(), b.rows(), b.cols());
  RowMajorMap mc(c.data(), c.rows(), c.cols());
  mc.noalias() = ma * mb;
  return c;
}

double frobenius_norm(const Matrix& m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) acc += m[i] * m[i];
  return std::sqrt(acc);
}

}  // namespace lsgan
