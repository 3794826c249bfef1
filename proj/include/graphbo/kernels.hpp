#pragma once

// Low-level dense kernels. Two lanes: a scalar reference lane and an AVX2/FMA
// lane compiled in its own TU. The active lane is picked once at startup from
// CPUID, overridable with GRAPHBO_KERNELS=scalar|avx2. All matrices are
// row-major double.

namespace graphbo::kernels {

struct KernelTable {
  const char* name;

  // c(m x n) = a(m x k) * b(k x n)
  void (*matmul_nn)(int m, int k, int n, const double* a, const double* b, double* c);
  // c += a * b
  void (*matmul_nn_acc)(int m, int k, int n, const double* a, const double* b, double* c);
  // c(m x n) += a^T * b, with a stored k x m
  void (*matmul_tn_acc)(int m, int k, int n, const double* a, const double* b, double* c);
  // c(m x n) = a(m x k) * b^T, with b stored n x k
  void (*matmul_nt)(int m, int k, int n, const double* a, const double* b, double* c);

  void (*axpy)(int n, double alpha, const double* x, double* y);  // y += alpha*x
  void (*scale)(int n, double alpha, double* x);
  void (*hadamard)(int n, const double* x, const double* y, double* out);
  double (*dot)(int n, const double* x, const double* y);
  double (*sum)(int n, const double* x);
  double (*max)(int n, const double* x);  // n >= 1

  void (*exp_eval)(int n, const double* x, double* out);
  void (*tanh_eval)(int n, const double* x, double* out);
  // out = g * (1 - y^2), y = tanh output
  void (*tanh_bwd)(int n, const double* y, const double* g, double* out);
  void (*relu_eval)(int n, const double* x, double* out);
  // out = g * [y > 0]
  void (*relu_bwd)(int n, const double* y, const double* g, double* out);

  // in-place Adam step; c1 = 1/(1-beta1^t), c2 = 1/(1-beta2^t)
  void (*adam_update)(int n, double* p, const double* g, double* m, double* v,
                      double lr, double beta1, double beta2, double eps,
                      double c1, double c2);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr if the binary or CPU lacks AVX2+FMA
const KernelTable& active();      // selected once, stable for process lifetime
const char* active_lane_name();

}  // namespace graphbo::kernels
