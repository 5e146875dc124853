#include "smgan/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace smgan {

namespace {

[[noreturn]] void shape_error(const char* what, const Matrix& a, const Matrix& b) {
  throw std::invalid_argument(std::string(what) + ": incompatible shapes " +
                              std::to_string(a.rows) + "x" + std::to_string(a.cols) + " and " +
                              std::to_string(b.rows) + "x" + std::to_string(b.cols));
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) shape_error("matmul", a, b);
  Matrix c(a.rows, b.cols);
  const std::size_t k = a.cols, n = b.cols;
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (std::size_t p = 0; p < k; ++p) {
      const double v = ai[p];
      if (v == 0.0) continue;  // ReLU activations make inputs sparse
      const double* bp = b.row(p);
      for (std::size_t j = 0; j < n; ++j) ci[j] += v * bp[j];
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) shape_error("matmul_tn", a, b);
  Matrix c(a.cols, b.cols);
  const std::size_t m = a.cols, n = b.cols;
  for (std::size_t p = 0; p < a.rows; ++p) {
    const double* ap = a.row(p);
    const double* bp = b.row(p);
    for (std::size_t i = 0; i < m; ++i) {
      const double v = ap[i];
      if (v == 0.0) continue;
      double* ci = c.row(i);
      for (std::size_t j = 0; j < n; ++j) ci[j] += v * bp[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) shape_error("matmul_nt", a, b);
  return matmul(a, transpose(b));
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

std::vector<double> column_sums(const Matrix& a) {
  std::vector<double> s(a.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    for (std::size_t j = 0; j < a.cols; ++j) s[j] += ai[j];
  }
  return s;
}

bool all_finite(const Matrix& a) {
  for (double v : a.data)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix take_rows(const Matrix& a, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), a.cols);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= a.rows) throw std::out_of_range("take_rows: row index out of range");
    const double* src = a.row(idx[i]);
    double* dst = out.row(i);
    for (std::size_t j = 0; j < a.cols; ++j) dst[j] = src[j];
  }
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.size() == 0 && a.rows == 0) {
    Matrix out = b;
    return out;
  }
  if (b.rows == 0) return a;
  if (a.cols != b.cols) shape_error("vstack", a, b);
  Matrix out(a.rows + b.rows, a.cols);
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

}  // namespace smgan
