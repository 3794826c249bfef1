#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphbo {

using Vec = std::vector<double>;

// Dense row-major double matrix.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double* ptr() { return data.data(); }
  const double* ptr() const { return data.data(); }
  double* row(int i) { return data.data() + static_cast<std::size_t>(i) * cols; }
  const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * cols; }
  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
  int size() const { return rows * cols; }
  void zero() { std::fill(data.begin(), data.end(), 0.0); }
  bool all_finite() const;
};

// c = a*b (allocating and in-place flavors)
Mat matmul(const Mat& a, const Mat& b);
void matmul_into(const Mat& a, const Mat& b, Mat& c);
void matmul_acc(const Mat& a, const Mat& b, Mat& c);     // c += a*b
void matmul_tn_acc(const Mat& a, const Mat& b, Mat& c);  // c += a^T*b
Mat matmul_nt(const Mat& a, const Mat& b);               // a*b^T
Mat transpose(const Mat& a);
void add_inplace(Mat& a, const Mat& b);
void axpy(double alpha, const Mat& x, Mat& y);  // y += alpha*x
void scale_inplace(Mat& a, double alpha);
Mat hadamard(const Mat& a, const Mat& b);
double frob_inner(const Mat& a, const Mat& b);
double sum_squares(const Mat& a);

double dot(const Vec& a, const Vec& b);

enum class Activation { identity, tanh, relu };
Activation activation_from_string(const std::string& s);
const char* activation_name(Activation a);
void activation_eval(Activation a, int n, const double* x, double* y);
// gradient through the activation, expressed in terms of the forward output y
void activation_bwd(Activation a, int n, const double* y, const double* g, double* out);

Mat row_softmax(const Mat& z);
// dz from softmax output s and upstream ds (both n x c)
void row_softmax_bwd(const Mat& s, const Mat& ds, Mat& dz);

// Cholesky factorization of a symmetric positive definite matrix, with a
// bounded jitter-retry policy for marginally conditioned inputs: on failure,
// 1e-10 * mean(diag) is added to the diagonal, up to max_retries times.
struct Cholesky {
  Mat l;  // lower triangular
  double logdet = 0.0;
  int jitter_retries = 0;
};
Cholesky cholesky_spd(const Mat& a, int max_retries = 3);
Vec solve_cholesky(const Cholesky& c, const Vec& b);
double quad_form_inv(const Cholesky& c, const Vec& b);  // b^T A^{-1} b

struct AdamState {
  int t = 0;
  Vec m, v;
  explicit AdamState(int n = 0) : m(static_cast<std::size_t>(n), 0.0), v(static_cast<std::size_t>(n), 0.0) {}
};
struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};
// one optimizer step over a flat parameter/gradient pair
void adam_step(AdamState& st, const AdamConfig& cfg, int n, double* p, const double* g);

}  // namespace graphbo
