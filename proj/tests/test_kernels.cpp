#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "graphbo/kernels.hpp"

using graphbo::kernels::KernelTable;

namespace {

std::vector<double> random_vec(int n, unsigned seed, double lo = -3.0, double hi = 3.0) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = dist(eng);
  return v;
}

void naive_matmul(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += a[i * k + l] * b[l * n + j];
      c[i * n + j] = s;
    }
}

std::vector<const KernelTable*> lanes() {
  std::vector<const KernelTable*> out = {&graphbo::kernels::scalar_table()};
  if (const KernelTable* avx2 = graphbo::kernels::avx2_table()) out.push_back(avx2);
  return out;
}

}  // namespace

TEST_CASE("lane names and active selection") {
  CHECK(std::string(graphbo::kernels::scalar_table().name) == "scalar");
  CHECK(std::string(graphbo::kernels::active_lane_name()) ==
        std::string(graphbo::kernels::active().name));
  if (const KernelTable* avx2 = graphbo::kernels::avx2_table())
    CHECK(std::string(avx2->name) == "avx2");
}

TEST_CASE("matmul matches the naive triple loop on awkward shapes") {
  for (const KernelTable* t : lanes()) {
    for (auto [m, k, n] : {std::tuple<int, int, int>{1, 1, 1}, {2, 3, 4}, {5, 7, 9},
                           {16, 16, 16}, {17, 5, 33}, {3, 48, 50}, {1, 13, 1}, {2, 40, 16}}) {
      auto a = random_vec(m * k, 100u + static_cast<unsigned>(m * 7 + k));
      auto b = random_vec(k * n, 200u + static_cast<unsigned>(n));
      std::vector<double> want(static_cast<std::size_t>(m) * n);
      naive_matmul(a.data(), b.data(), want.data(), m, k, n);

      std::vector<double> got(static_cast<std::size_t>(m) * n, 7.0);
      t->matmul_nn(m, k, n, a.data(), b.data(), got.data());
      for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));

      std::vector<double> acc(static_cast<std::size_t>(m) * n, 1.5);
      t->matmul_nn_acc(m, k, n, a.data(), b.data(), acc.data());
      for (std::size_t i = 0; i < acc.size(); ++i)
        CHECK(acc[i] == doctest::Approx(want[i] + 1.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("transposed matmul variants match explicit transposition") {
  for (const KernelTable* t : lanes()) {
    const int m = 6, k = 5, n = 7;
    auto a = random_vec(k * m, 11);  // stored k x m, used as a^T
    auto b = random_vec(k * n, 12);
    std::vector<double> at(static_cast<std::size_t>(m) * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < m; ++j) at[static_cast<std::size_t>(j) * k + i] = a[i * m + j];
    std::vector<double> want(static_cast<std::size_t>(m) * n);
    naive_matmul(at.data(), b.data(), want.data(), m, k, n);
    std::vector<double> got(static_cast<std::size_t>(m) * n, 0.0);
    t->matmul_tn_acc(m, k, n, a.data(), b.data(), got.data());
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));

    auto c = random_vec(m * k, 13);
    auto d = random_vec(n * k, 14);  // stored n x k, used as d^T
    std::vector<double> dt(static_cast<std::size_t>(k) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) dt[static_cast<std::size_t>(j) * n + i] = d[i * k + j];
    std::vector<double> want2(static_cast<std::size_t>(m) * n);
    naive_matmul(c.data(), dt.data(), want2.data(), m, k, n);
    std::vector<double> got2(static_cast<std::size_t>(m) * n);
    t->matmul_nt(m, k, n, c.data(), d.data(), got2.data());
    for (std::size_t i = 0; i < got2.size(); ++i)
      CHECK(got2[i] == doctest::Approx(want2[i]).epsilon(1e-12));
  }
}

TEST_CASE("elementwise kernels match reference math") {
  for (const KernelTable* t : lanes()) {
    const int n = 37;  // odd size exercises vector tails
    auto x = random_vec(n, 21);
    auto y = random_vec(n, 22);

    std::vector<double> out = y;
    t->axpy(n, 0.75, x.data(), out.data());
    for (int i = 0; i < n; ++i)
      CHECK(out[i] == doctest::Approx(y[i] + 0.75 * x[i]).epsilon(1e-14));

    out = x;
    t->scale(n, -1.25, out.data());
    for (int i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(-1.25 * x[i]).epsilon(1e-14));

    out.assign(static_cast<std::size_t>(n), 0.0);
    t->hadamard(n, x.data(), y.data(), out.data());
    for (int i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(x[i] * y[i]).epsilon(1e-14));

    double dref = 0.0, sref = 0.0, mref = x[0];
    for (int i = 0; i < n; ++i) {
      dref += x[i] * y[i];
      sref += x[i];
      mref = std::max(mref, x[i]);
    }
    CHECK(t->dot(n, x.data(), y.data()) == doctest::Approx(dref).epsilon(1e-13));
    CHECK(t->sum(n, x.data()) == doctest::Approx(sref).epsilon(1e-13));
    CHECK(t->max(n, x.data()) == doctest::Approx(mref));
  }
}

TEST_CASE("exp and tanh lanes agree with the standard library") {
  for (const KernelTable* t : lanes()) {
    std::vector<double> xs;
    for (double v = -30.0; v <= 30.0; v += 0.37) xs.push_back(v);
    for (double v : {-700.0, -100.0, -1e-12, 0.0, 1e-12, 100.0, 700.0, 19.2, -19.2})
      xs.push_back(v);
    const int n = static_cast<int>(xs.size());
    std::vector<double> eout(xs.size()), tout(xs.size());
    t->exp_eval(n, xs.data(), eout.data());
    t->tanh_eval(n, xs.data(), tout.data());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(eout[i] == doctest::Approx(std::exp(xs[i])).epsilon(1e-12));
      CHECK(tout[i] == doctest::Approx(std::tanh(xs[i])).epsilon(1e-12));
      CHECK(std::abs(tout[i]) <= 1.0);
    }
  }
}

TEST_CASE("activation backward kernels") {
  for (const KernelTable* t : lanes()) {
    const int n = 19;
    auto y = random_vec(n, 31, -0.99, 0.99);  // tanh outputs
    auto g = random_vec(n, 32);
    std::vector<double> out(static_cast<std::size_t>(n));
    t->tanh_bwd(n, y.data(), g.data(), out.data());
    for (int i = 0; i < n; ++i)
      CHECK(out[i] == doctest::Approx(g[i] * (1.0 - y[i] * y[i])).epsilon(1e-14));

    auto rx = random_vec(n, 33);
    std::vector<double> ry(static_cast<std::size_t>(n));
    t->relu_eval(n, rx.data(), ry.data());
    for (int i = 0; i < n; ++i) CHECK(ry[i] == std::max(rx[i], 0.0));
    t->relu_bwd(n, ry.data(), g.data(), out.data());
    for (int i = 0; i < n; ++i) CHECK(out[i] == (ry[i] > 0.0 ? g[i] : 0.0));
  }
}

TEST_CASE("adam update matches the reference formula on every lane") {
  const int n = 23;
  auto p0 = random_vec(n, 41);
  auto g = random_vec(n, 42);
  auto m0 = random_vec(n, 43, -0.1, 0.1);
  auto v0 = random_vec(n, 44, 0.0, 0.1);
  const double lr = 3e-3, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  const int step = 7;
  const double c1 = 1.0 / (1.0 - std::pow(b1, step));
  const double c2 = 1.0 / (1.0 - std::pow(b2, step));

  for (const KernelTable* t : lanes()) {
    auto p = p0;
    auto m = m0;
    auto v = v0;
    t->adam_update(n, p.data(), g.data(), m.data(), v.data(), lr, b1, b2, eps, c1, c2);
    for (int i = 0; i < n; ++i) {
      const double mw = b1 * m0[i] + (1 - b1) * g[i];
      const double vw = b2 * v0[i] + (1 - b2) * g[i] * g[i];
      const double pw = p0[i] - lr * (mw * c1) / (std::sqrt(vw * c2) + eps);
      CHECK(m[i] == doctest::Approx(mw).epsilon(1e-14));
      CHECK(v[i] == doctest::Approx(vw).epsilon(1e-14));
      CHECK(p[i] == doctest::Approx(pw).epsilon(1e-12));
    }
  }
}

TEST_CASE("lanes agree with each other") {
  const KernelTable* avx2 = graphbo::kernels::avx2_table();
  if (!avx2) return;  // nothing to compare on this host
  const KernelTable& scalar = graphbo::kernels::scalar_table();
  const int m = 13, k = 29, n = 31;
  auto a = random_vec(m * k, 51);
  auto b = random_vec(k * n, 52);
  std::vector<double> c1v(static_cast<std::size_t>(m) * n), c2v(c1v.size());
  scalar.matmul_nn(m, k, n, a.data(), b.data(), c1v.data());
  avx2->matmul_nn(m, k, n, a.data(), b.data(), c2v.data());
  for (std::size_t i = 0; i < c1v.size(); ++i)
    CHECK(c1v[i] == doctest::Approx(c2v[i]).epsilon(1e-13));
}
