#include "graphbo/mat.hpp"

#include <cmath>
#include <cstring>

#include "graphbo/kernels.hpp"

namespace graphbo {

namespace {
using kernels::active;

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

bool Mat::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

Mat matmul(const Mat& a, const Mat& b) {
  Mat c(a.rows, b.cols);
  matmul_into(a, b, c);
  return c;
}

void matmul_into(const Mat& a, const Mat& b, Mat& c) {
  check(a.cols == b.rows && c.rows == a.rows && c.cols == b.cols, "matmul: shape mismatch");
  active().matmul_nn(a.rows, a.cols, b.cols, a.ptr(), b.ptr(), c.ptr());
}

void matmul_acc(const Mat& a, const Mat& b, Mat& c) {
  check(a.cols == b.rows && c.rows == a.rows && c.cols == b.cols, "matmul_acc: shape mismatch");
  active().matmul_nn_acc(a.rows, a.cols, b.cols, a.ptr(), b.ptr(), c.ptr());
}

void matmul_tn_acc(const Mat& a, const Mat& b, Mat& c) {
  check(a.rows == b.rows && c.rows == a.cols && c.cols == b.cols, "matmul_tn_acc: shape mismatch");
  active().matmul_tn_acc(a.cols, a.rows, b.cols, a.ptr(), b.ptr(), c.ptr());
}

Mat matmul_nt(const Mat& a, const Mat& b) {
  check(a.cols == b.cols, "matmul_nt: shape mismatch");
  Mat c(a.rows, b.rows);
  active().matmul_nt(a.rows, a.cols, b.rows, a.ptr(), b.ptr(), c.ptr());
  return c;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

void add_inplace(Mat& a, const Mat& b) {
  check(a.rows == b.rows && a.cols == b.cols, "add: shape mismatch");
  active().axpy(a.size(), 1.0, b.ptr(), a.ptr());
}

void axpy(double alpha, const Mat& x, Mat& y) {
  check(x.rows == y.rows && x.cols == y.cols, "axpy: shape mismatch");
  active().axpy(x.size(), alpha, x.ptr(), y.ptr());
}

void scale_inplace(Mat& a, double alpha) { active().scale(a.size(), alpha, a.ptr()); }

Mat hadamard(const Mat& a, const Mat& b) {
  check(a.rows == b.rows && a.cols == b.cols, "hadamard: shape mismatch");
  Mat c(a.rows, a.cols);
  active().hadamard(a.size(), a.ptr(), b.ptr(), c.ptr());
  return c;
}

double frob_inner(const Mat& a, const Mat& b) {
  check(a.rows == b.rows && a.cols == b.cols, "frob_inner: shape mismatch");
  return active().dot(a.size(), a.ptr(), b.ptr());
}

double sum_squares(const Mat& a) { return active().dot(a.size(), a.ptr(), a.ptr()); }

double dot(const Vec& a, const Vec& b) {
  check(a.size() == b.size(), "dot: length mismatch");
  return active().dot(static_cast<int>(a.size()), a.data(), b.data());
}

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::identity;
  if (s == "tanh") return Activation::tanh;
  if (s == "relu") return Activation::relu;
  throw std::invalid_argument("unknown activation: " + s);
}

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
  }
  return "?";
}

void activation_eval(Activation a, int n, const double* x, double* y) {
  switch (a) {
    case Activation::identity:
      if (y != x) std::memcpy(y, x, sizeof(double) * static_cast<std::size_t>(n));
      return;
    case Activation::tanh: active().tanh_eval(n, x, y); return;
    case Activation::relu: active().relu_eval(n, x, y); return;
  }
}

void activation_bwd(Activation a, int n, const double* y, const double* g, double* out) {
  switch (a) {
    case Activation::identity:
      if (out != g) std::memcpy(out, g, sizeof(double) * static_cast<std::size_t>(n));
      return;
    case Activation::tanh: active().tanh_bwd(n, y, g, out); return;
    case Activation::relu: active().relu_bwd(n, y, g, out); return;
  }
}

Mat row_softmax(const Mat& z) {
  Mat s(z.rows, z.cols);
  Vec shifted(static_cast<std::size_t>(z.cols));
  for (int i = 0; i < z.rows; ++i) {
    const double* zi = z.row(i);
    double* si = s.row(i);
    const double m = active().max(z.cols, zi);
    for (int j = 0; j < z.cols; ++j) shifted[static_cast<std::size_t>(j)] = zi[j] - m;
    active().exp_eval(z.cols, shifted.data(), si);
    const double total = active().sum(z.cols, si);
    active().scale(z.cols, 1.0 / total, si);
  }
  return s;
}

void row_softmax_bwd(const Mat& s, const Mat& ds, Mat& dz) {
  check(s.rows == ds.rows && s.cols == ds.cols, "row_softmax_bwd: shape mismatch");
  dz = Mat(s.rows, s.cols);
  for (int i = 0; i < s.rows; ++i) {
    const double* si = s.row(i);
    const double* di = ds.row(i);
    double* oi = dz.row(i);
    const double inner = active().dot(s.cols, di, si);
    for (int j = 0; j < s.cols; ++j) oi[j] = si[j] * (di[j] - inner);
  }
}

namespace {

// plain lower-triangular factorization; returns false on a non-positive pivot
bool try_cholesky(const Mat& a, Mat& l) {
  const int n = a.rows;
  l = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a.at(i, j);
      const double* li = l.row(i);
      const double* lj = l.row(j);
      for (int k = 0; k < j; ++k) s -= li[k] * lj[k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        l.at(i, i) = std::sqrt(s);
      } else {
        l.at(i, j) = s / l.at(j, j);
      }
    }
  }
  return true;
}

}  // namespace

Cholesky cholesky_spd(const Mat& a, int max_retries) {
  if (a.rows != a.cols) throw std::invalid_argument("cholesky_spd: matrix not square");
  Cholesky out;
  Mat work = a;
  double mean_diag = 0.0;
  for (int i = 0; i < a.rows; ++i) mean_diag += a.at(i, i);
  mean_diag /= a.rows > 0 ? a.rows : 1;
  const double jitter = 1e-10 * mean_diag;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    if (attempt > 0)
      for (int i = 0; i < a.rows; ++i) work.at(i, i) += jitter;
    if (try_cholesky(work, out.l)) {
      out.jitter_retries = attempt;
      out.logdet = 0.0;
      for (int i = 0; i < a.rows; ++i) out.logdet += 2.0 * std::log(out.l.at(i, i));
      return out;
    }
  }
  throw std::runtime_error("cholesky_spd: matrix not positive definite after jitter retries");
}

Vec solve_cholesky(const Cholesky& c, const Vec& b) {
  const int n = c.l.rows;
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("solve_cholesky: size mismatch");
  Vec y(b);
  for (int i = 0; i < n; ++i) {
    double s = y[static_cast<std::size_t>(i)];
    const double* li = c.l.row(i);
    for (int k = 0; k < i; ++k) s -= li[k] * y[static_cast<std::size_t>(k)];
    y[static_cast<std::size_t>(i)] = s / li[i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < n; ++k) s -= c.l.at(k, i) * y[static_cast<std::size_t>(k)];
    y[static_cast<std::size_t>(i)] = s / c.l.at(i, i);
  }
  return y;
}

double quad_form_inv(const Cholesky& c, const Vec& b) {
  // b^T A^{-1} b = ||L^{-1} b||^2
  const int n = c.l.rows;
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("quad_form_inv: size mismatch");
  Vec y(b);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = y[static_cast<std::size_t>(i)];
    const double* li = c.l.row(i);
    for (int k = 0; k < i; ++k) s -= li[k] * y[static_cast<std::size_t>(k)];
    const double yi = s / li[i];
    y[static_cast<std::size_t>(i)] = yi;
    acc += yi * yi;
  }
  return acc;
}

void adam_step(AdamState& st, const AdamConfig& cfg, int n, double* p, const double* g) {
  if (static_cast<int>(st.m.size()) != n) throw std::invalid_argument("adam_step: state size mismatch");
  st.t += 1;
  const double c1 = 1.0 / (1.0 - std::pow(cfg.beta1, st.t));
  const double c2 = 1.0 / (1.0 - std::pow(cfg.beta2, st.t));
  kernels::active().adam_update(n, p, g, st.m.data(), st.v.data(),
                                cfg.lr, cfg.beta1, cfg.beta2, cfg.eps, c1, c2);
}

}  // namespace graphbo
