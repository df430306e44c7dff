#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace lsgan {

namespace detail {

// std::vector that skips value-initialization on resize; element lifetimes
// are otherwise identical.
template <class T, class A = std::allocator<T>>
class default_init_allocator : public A {
  using traits = std::allocator_traits<A>;

 public:
  template <class U>
  struct rebind {
    using other =
        default_init_allocator<U, typename traits::template rebind_alloc<U>>;
  };
  using A::A;
  template <class U>
  void construct(U* ptr) noexcept {
    ::new (static_cast<void*>(ptr)) U;
  }
  template <class U, class... Args>
  void construct(U* ptr, Args&&... args) {
    traits::construct(static_cast<A&>(*this), ptr, std::forward<Args>(args)...);
  }
};

using double_buffer = std::vector<double, default_init_allocator<double>>;

}  // namespace detail

/// Dense row-major matrix of 64-bit floats. Rank <= 2: vectors are 1xN or Nx1,
/// scalars are 1x1. This is the only array type the autodiff graph carries.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled

  /// Allocated but not cleared; every entry must be written before use.
  static Matrix uninitialized(int rows, int cols);
  static Matrix constant(int rows, int cols, double value);
  static Matrix scalar(double value) { return constant(1, 1, value); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool is_scalar() const { return rows_ == 1 && cols_ == 1; }

  void fill(double value);
  bool all_finite() const;

  std::string shape_str() const;  // "(r, c)" for diagnostics

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  detail::double_buffer data_;
};

/// C = A * B, shapes (n,k)x(k,m) -> (n,m). Throws ShapeError on mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

/// Frobenius norm.
double frobenius_norm(const Matrix& m);

}  // namespace lsgan
