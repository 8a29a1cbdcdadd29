// Dense row-major tensor. The element type is a template parameter: float
// for training, double for gradient-check tests.
#pragma once

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "phq/error.hpp"

namespace phq {

template <typename T>
struct Tensor {
  std::vector<long> shape;
  std::vector<T> data;

  Tensor() = default;

  explicit Tensor(std::vector<long> s) : shape(std::move(s)) {
    data.assign(static_cast<std::size_t>(numel_of(shape)), T(0));
  }

  Tensor(std::vector<long> s, std::vector<T> d) : shape(std::move(s)), data(std::move(d)) {
    if (static_cast<long>(data.size()) != numel_of(shape))
      throw Error(ErrorKind::kDimension, "tensor data length does not match shape");
  }

  static Tensor zeros(std::vector<long> s) { return Tensor(std::move(s)); }

  static Tensor full(std::vector<long> s, T v) {
    Tensor t(std::move(s));
    for (auto& x : t.data) x = v;
    return t;
  }

  static Tensor scalar(T v) { return Tensor({1}, {v}); }

  long numel() const { return static_cast<long>(data.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  long dim(int i) const { return shape[static_cast<std::size_t>(i)]; }

  // Trailing extent, the feature width for [time, features] layouts.
  long cols() const { return shape.empty() ? 0 : shape.back(); }
  // Product of all leading extents.
  long rows() const { return cols() == 0 ? 0 : numel() / cols(); }

  T* row_ptr(long r) { return data.data() + r * cols(); }
  const T* row_ptr(long r) const { return data.data() + r * cols(); }

  T& operator[](long i) { return data[static_cast<std::size_t>(i)]; }
  const T& operator[](long i) const { return data[static_cast<std::size_t>(i)]; }

  T& at(long r, long c) { return data[static_cast<std::size_t>(r * cols() + c)]; }
  const T& at(long r, long c) const { return data[static_cast<std::size_t>(r * cols() + c)]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  static long numel_of(const std::vector<long>& shape) {
    if (shape.empty()) throw Error(ErrorKind::kDimension, "tensor rank must be >= 1");
    long n = 1;
    for (long e : shape) {
      if (e <= 0) throw Error(ErrorKind::kDimension, "tensor extents must be positive");
      n *= e;
    }
    return n;
  }

  std::string shape_str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
    os << ']';
    return os.str();
  }
};

template <typename T>
Tensor<T> zeros_like(const Tensor<T>& t) {
  return Tensor<T>(t.shape);
}

}  // namespace phq
