#include "graphbo/kernels.hpp"

#include <cmath>
#include <cstring>

namespace graphbo::kernels {
namespace {

void s_matmul_nn(int m, int k, int n, const double* a, const double* b, double* c) {
  std::memset(c, 0, sizeof(double) * static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i) {
    const double* ai = a + static_cast<std::size_t>(i) * k;
    double* ci = c + static_cast<std::size_t>(i) * n;
    for (int l = 0; l < k; ++l) {
      const double av = ai[l];
      const double* bl = b + static_cast<std::size_t>(l) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bl[j];
    }
  }
}

void s_matmul_nn_acc(int m, int k, int n, const double* a, const double* b, double* c) {
  for (int i = 0; i < m; ++i) {
    const double* ai = a + static_cast<std::size_t>(i) * k;
    double* ci = c + static_cast<std::size_t>(i) * n;
    for (int l = 0; l < k; ++l) {
      const double av = ai[l];
      const double* bl = b + static_cast<std::size_t>(l) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bl[j];
    }
  }
}

void s_matmul_tn_acc(int m, int k, int n, const double* a, const double* b, double* c) {
  for (int l = 0; l < k; ++l) {
    const double* al = a + static_cast<std::size_t>(l) * m;
    const double* bl = b + static_cast<std::size_t>(l) * n;
    for (int i = 0; i < m; ++i) {
      const double av = al[i];
      double* ci = c + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bl[j];
    }
  }
}

void s_matmul_nt(int m, int k, int n, const double* a, const double* b, double* c) {
  for (int i = 0; i < m; ++i) {
    const double* ai = a + static_cast<std::size_t>(i) * k;
    double* ci = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* bj = b + static_cast<std::size_t>(j) * k;
      double acc = 0.0;
      for (int l = 0; l < k; ++l) acc += ai[l] * bj[l];
      ci[j] = acc;
    }
  }
}

void s_axpy(int n, double alpha, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void s_scale(int n, double alpha, double* x) {
  for (int i = 0; i < n; ++i) x[i] *= alpha;
}

void s_hadamard(int n, const double* x, const double* y, double* out) {
  for (int i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

double s_dot(int n, const double* x, const double* y) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double s_sum(int n, const double* x) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double s_max(int n, const double* x) {
  double m = x[0];
  for (int i = 1; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

void s_exp(int n, const double* x, double* out) {
  for (int i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void s_tanh(int n, const double* x, double* out) {
  for (int i = 0; i < n; ++i) out[i] = std::tanh(x[i]);
}

void s_tanh_bwd(int n, const double* y, const double* g, double* out) {
  for (int i = 0; i < n; ++i) out[i] = g[i] * (1.0 - y[i] * y[i]);
}

void s_relu(int n, const double* x, double* out) {
  for (int i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void s_relu_bwd(int n, const double* y, const double* g, double* out) {
  for (int i = 0; i < n; ++i) out[i] = y[i] > 0.0 ? g[i] : 0.0;
}

void s_adam(int n, double* p, const double* g, double* m, double* v,
            double lr, double beta1, double beta2, double eps, double c1, double c2) {
  for (int i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = m[i] * c1;
    const double vhat = v[i] * c2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t = {
      "scalar",
      s_matmul_nn, s_matmul_nn_acc, s_matmul_tn_acc, s_matmul_nt,
      s_axpy, s_scale, s_hadamard, s_dot, s_sum, s_max,
      s_exp, s_tanh, s_tanh_bwd, s_relu, s_relu_bwd,
      s_adam,
  };
  return t;
}

}  // namespace graphbo::kernels
