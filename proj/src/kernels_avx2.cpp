// AVX2/FMA kernel lane. This TU is compiled with -mavx2 -mfma; nothing here
// may run vector code before avx2_table() has checked CPUID.

#include "graphbo/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace graphbo::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// ---- exp, rational approximation with Cody-Waite range reduction ----

const __m256d kExpHi = _mm256_set1_pd(709.08);
const __m256d kExpLo = _mm256_set1_pd(-708.39);
const __m256d kLog2E = _mm256_set1_pd(1.4426950408889634073599);
const __m256d kHalf = _mm256_set1_pd(0.5);
const __m256d kC1 = _mm256_set1_pd(6.93145751953125e-1);
const __m256d kC2 = _mm256_set1_pd(1.42860682030941723212e-6);
const __m256d kP0 = _mm256_set1_pd(1.26177193074810590878e-4);
const __m256d kP1 = _mm256_set1_pd(3.02994407707441961300e-2);
const __m256d kP2 = _mm256_set1_pd(9.99999999999999999910e-1);
const __m256d kQ0 = _mm256_set1_pd(3.00198505138664455042e-6);
const __m256d kQ1 = _mm256_set1_pd(2.52448340349684104192e-3);
const __m256d kQ2 = _mm256_set1_pd(2.27265548208155028766e-1);
const __m256d kQ3 = _mm256_set1_pd(2.00000000000000000005e0);
const __m256d kOne = _mm256_set1_pd(1.0);
const __m256d kTwo = _mm256_set1_pd(2.0);

inline __m256d exp_pd(__m256d x) {
  const __m256d underflow = _mm256_cmp_pd(x, kExpLo, _CMP_LT_OQ);
  x = _mm256_min_pd(x, kExpHi);
  x = _mm256_max_pd(x, kExpLo);

  const __m256d px = _mm256_floor_pd(_mm256_fmadd_pd(x, kLog2E, kHalf));
  const __m128i n32 = _mm256_cvttpd_epi32(px);
  x = _mm256_fnmadd_pd(px, kC1, x);
  x = _mm256_fnmadd_pd(px, kC2, x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_fmadd_pd(kP0, xx, kP1);
  p = _mm256_fmadd_pd(p, xx, kP2);
  p = _mm256_mul_pd(p, x);
  __m256d q = _mm256_fmadd_pd(kQ0, xx, kQ1);
  q = _mm256_fmadd_pd(q, xx, kQ2);
  q = _mm256_fmadd_pd(q, xx, kQ3);
  const __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  __m256d r = _mm256_fmadd_pd(kTwo, e, kOne);

  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  n64 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  r = _mm256_mul_pd(r, _mm256_castsi256_pd(n64));
  return _mm256_andnot_pd(underflow, r);
}

const __m256d kSignMask = _mm256_set1_pd(-0.0);
const __m256d kTanhClamp = _mm256_set1_pd(19.1);

inline __m256d tanh_pd(__m256d x) {
  const __m256d sign = _mm256_and_pd(x, kSignMask);
  __m256d a = _mm256_andnot_pd(kSignMask, x);
  a = _mm256_min_pd(a, kTanhClamp);
  const __m256d t = exp_pd(_mm256_mul_pd(a, _mm256_set1_pd(-2.0)));
  const __m256d y = _mm256_div_pd(_mm256_sub_pd(kOne, t), _mm256_add_pd(kOne, t));
  return _mm256_or_pd(y, sign);
}

// ---- matmul ----

// c(m x n) += a(m x k) * b(k x n), 2-row by 16-column register tiles
void a_matmul_nn_acc(int m, int k, int n, const double* a, const double* b, double* c) {
  int i = 0;
  for (; i + 2 <= m; i += 2) {
    const double* a0 = a + static_cast<std::size_t>(i) * k;
    const double* a1 = a0 + k;
    double* c0 = c + static_cast<std::size_t>(i) * n;
    double* c1 = c0 + n;
    int j = 0;
    for (; j + 16 <= n; j += 16) {
      __m256d q00 = _mm256_loadu_pd(c0 + j);
      __m256d q01 = _mm256_loadu_pd(c0 + j + 4);
      __m256d q02 = _mm256_loadu_pd(c0 + j + 8);
      __m256d q03 = _mm256_loadu_pd(c0 + j + 12);
      __m256d q10 = _mm256_loadu_pd(c1 + j);
      __m256d q11 = _mm256_loadu_pd(c1 + j + 4);
      __m256d q12 = _mm256_loadu_pd(c1 + j + 8);
      __m256d q13 = _mm256_loadu_pd(c1 + j + 12);
      for (int l = 0; l < k; ++l) {
        const double* bl = b + static_cast<std::size_t>(l) * n + j;
        const __m256d b0 = _mm256_loadu_pd(bl);
        const __m256d b1 = _mm256_loadu_pd(bl + 4);
        const __m256d b2 = _mm256_loadu_pd(bl + 8);
        const __m256d b3 = _mm256_loadu_pd(bl + 12);
        const __m256d v0 = _mm256_set1_pd(a0[l]);
        const __m256d v1 = _mm256_set1_pd(a1[l]);
        q00 = _mm256_fmadd_pd(v0, b0, q00);
        q01 = _mm256_fmadd_pd(v0, b1, q01);
        q02 = _mm256_fmadd_pd(v0, b2, q02);
        q03 = _mm256_fmadd_pd(v0, b3, q03);
        q10 = _mm256_fmadd_pd(v1, b0, q10);
        q11 = _mm256_fmadd_pd(v1, b1, q11);
        q12 = _mm256_fmadd_pd(v1, b2, q12);
        q13 = _mm256_fmadd_pd(v1, b3, q13);
      }
      _mm256_storeu_pd(c0 + j, q00);
      _mm256_storeu_pd(c0 + j + 4, q01);
      _mm256_storeu_pd(c0 + j + 8, q02);
      _mm256_storeu_pd(c0 + j + 12, q03);
      _mm256_storeu_pd(c1 + j, q10);
      _mm256_storeu_pd(c1 + j + 4, q11);
      _mm256_storeu_pd(c1 + j + 8, q12);
      _mm256_storeu_pd(c1 + j + 12, q13);
    }
    for (; j + 4 <= n; j += 4) {
      __m256d q0 = _mm256_loadu_pd(c0 + j);
      __m256d q1 = _mm256_loadu_pd(c1 + j);
      for (int l = 0; l < k; ++l) {
        const __m256d bv = _mm256_loadu_pd(b + static_cast<std::size_t>(l) * n + j);
        q0 = _mm256_fmadd_pd(_mm256_set1_pd(a0[l]), bv, q0);
        q1 = _mm256_fmadd_pd(_mm256_set1_pd(a1[l]), bv, q1);
      }
      _mm256_storeu_pd(c0 + j, q0);
      _mm256_storeu_pd(c1 + j, q1);
    }
    for (; j < n; ++j) {
      double s0 = c0[j], s1 = c1[j];
      for (int l = 0; l < k; ++l) {
        const double bv = b[static_cast<std::size_t>(l) * n + j];
        s0 += a0[l] * bv;
        s1 += a1[l] * bv;
      }
      c0[j] = s0;
      c1[j] = s1;
    }
  }
  if (i < m) {
    const double* a0 = a + static_cast<std::size_t>(i) * k;
    double* c0 = c + static_cast<std::size_t>(i) * n;
    int j = 0;
    for (; j + 4 <= n; j += 4) {
      __m256d q0 = _mm256_loadu_pd(c0 + j);
      for (int l = 0; l < k; ++l)
        q0 = _mm256_fmadd_pd(_mm256_set1_pd(a0[l]),
                             _mm256_loadu_pd(b + static_cast<std::size_t>(l) * n + j), q0);
      _mm256_storeu_pd(c0 + j, q0);
    }
    for (; j < n; ++j) {
      double s0 = c0[j];
      for (int l = 0; l < k; ++l) s0 += a0[l] * b[static_cast<std::size_t>(l) * n + j];
      c0[j] = s0;
    }
  }
}

void a_matmul_nn(int m, int k, int n, const double* a, const double* b, double* c) {
  std::memset(c, 0, sizeof(double) * static_cast<std::size_t>(m) * n);
  a_matmul_nn_acc(m, k, n, a, b, c);
}

void a_matmul_tn_acc(int m, int k, int n, const double* a, const double* b, double* c) {
  for (int l = 0; l < k; ++l) {
    const double* al = a + static_cast<std::size_t>(l) * m;
    const double* bl = b + static_cast<std::size_t>(l) * n;
    for (int i = 0; i < m; ++i) {
      const __m256d av = _mm256_set1_pd(al[i]);
      double* ci = c + static_cast<std::size_t>(i) * n;
      int j = 0;
      for (; j + 4 <= n; j += 4)
        _mm256_storeu_pd(ci + j, _mm256_fmadd_pd(av, _mm256_loadu_pd(bl + j),
                                                 _mm256_loadu_pd(ci + j)));
      for (; j < n; ++j) ci[j] += al[i] * bl[j];
    }
  }
}

void a_matmul_nt(int m, int k, int n, const double* a, const double* b, double* c) {
  for (int i = 0; i < m; ++i) {
    const double* ai = a + static_cast<std::size_t>(i) * k;
    double* ci = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* bj = b + static_cast<std::size_t>(j) * k;
      __m256d q = _mm256_setzero_pd();
      int l = 0;
      for (; l + 4 <= k; l += 4)
        q = _mm256_fmadd_pd(_mm256_loadu_pd(ai + l), _mm256_loadu_pd(bj + l), q);
      double s = hsum(q);
      for (; l < k; ++l) s += ai[l] * bj[l];
      ci[j] = s;
    }
  }
}

void a_axpy(int n, double alpha, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(alpha);
  int i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void a_scale(int n, double alpha, double* x) {
  const __m256d av = _mm256_set1_pd(alpha);
  int i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void a_hadamard(int n, const double* x, const double* y, double* out) {
  int i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

double a_dot(int n, const double* x, const double* y) {
  __m256d q = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4)
    q = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), q);
  double s = hsum(q);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double a_sum(int n, const double* x) {
  __m256d q = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4) q = _mm256_add_pd(q, _mm256_loadu_pd(x + i));
  double s = hsum(q);
  for (; i < n; ++i) s += x[i];
  return s;
}

double a_max(int n, const double* x) {
  if (n < 4) {
    double m = x[0];
    for (int i = 1; i < n; ++i)
      if (x[i] > m) m = x[i];
    return m;
  }
  __m256d q = _mm256_loadu_pd(x);
  int i = 4;
  for (; i + 4 <= n; i += 4) q = _mm256_max_pd(q, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, q);
  double m = lanes[0];
  for (int l = 1; l < 4; ++l)
    if (lanes[l] > m) m = lanes[l];
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

void a_exp(int n, const double* x, double* out) {
  int i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
  if (i < n) {
    alignas(32) double buf[4] = {0, 0, 0, 0};
    for (int l = i; l < n; ++l) buf[l - i] = x[l];
    alignas(32) double res[4];
    _mm256_store_pd(res, exp_pd(_mm256_load_pd(buf)));
    for (int l = i; l < n; ++l) out[l] = res[l - i];
  }
}

void a_tanh(int n, const double* x, double* out) {
  int i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, tanh_pd(_mm256_loadu_pd(x + i)));
  if (i < n) {
    alignas(32) double buf[4] = {0, 0, 0, 0};
    for (int l = i; l < n; ++l) buf[l - i] = x[l];
    alignas(32) double res[4];
    _mm256_store_pd(res, tanh_pd(_mm256_load_pd(buf)));
    for (int l = i; l < n; ++l) out[l] = res[l - i];
  }
}

void a_tanh_bwd(int n, const double* y, const double* g, double* out) {
  const __m256d one = _mm256_set1_pd(1.0);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yv = _mm256_loadu_pd(y + i);
    const __m256d d = _mm256_fnmadd_pd(yv, yv, one);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(g + i), d));
  }
  for (; i < n; ++i) out[i] = g[i] * (1.0 - y[i] * y[i]);
}

void a_relu(int n, const double* x, double* out) {
  const __m256d zero = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void a_relu_bwd(int n, const double* y, const double* g, double* out) {
  const __m256d zero = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(y + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(mask, _mm256_loadu_pd(g + i)));
  }
  for (; i < n; ++i) out[i] = y[i] > 0.0 ? g[i] : 0.0;
}

void a_adam(int n, double* p, const double* g, double* m, double* v,
            double lr, double beta1, double beta2, double eps, double c1, double c2) {
  const __m256d b1 = _mm256_set1_pd(beta1);
  const __m256d b2 = _mm256_set1_pd(beta2);
  const __m256d ob1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d ob2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d c1v = _mm256_set1_pd(c1);
  const __m256d c2v = _mm256_set1_pd(c2);
  const __m256d lrv = _mm256_set1_pd(lr);
  const __m256d epsv = _mm256_set1_pd(eps);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    __m256d mv = _mm256_loadu_pd(m + i);
    __m256d vv = _mm256_loadu_pd(v + i);
    mv = _mm256_fmadd_pd(b1, mv, _mm256_mul_pd(ob1, gv));
    vv = _mm256_fmadd_pd(b2, vv, _mm256_mul_pd(ob2, _mm256_mul_pd(gv, gv)));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_mul_pd(mv, c1v);
    const __m256d vhat = _mm256_mul_pd(vv, c2v);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), epsv);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(lrv, mhat), denom);
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    p[i] -= lr * (m[i] * c1) / (std::sqrt(v[i] * c2) + eps);
  }
}

const KernelTable kAvx2Table = {
    "avx2",
    a_matmul_nn, a_matmul_nn_acc, a_matmul_tn_acc, a_matmul_nt,
    a_axpy, a_scale, a_hadamard, a_dot, a_sum, a_max,
    a_exp, a_tanh, a_tanh_bwd, a_relu, a_relu_bwd,
    a_adam,
};

}  // namespace

const KernelTable* avx2_table() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2Table;
  return nullptr;
}

}  // namespace graphbo::kernels
