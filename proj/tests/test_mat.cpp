#include <doctest.h>

#include <cmath>
#include <random>

#include "graphbo/mat.hpp"

using namespace graphbo;

namespace {

Mat random_mat(int r, int c, unsigned seed, double lo = -2.0, double hi = 2.0) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Mat m(r, c);
  for (double& x : m.data) x = dist(eng);
  return m;
}

Mat random_spd(int n, unsigned seed) {
  Mat a = random_mat(n, n, seed);
  Mat s = matmul(transpose(a), a);
  for (int i = 0; i < n; ++i) s.at(i, i) += static_cast<double>(n);
  return s;
}

}  // namespace

TEST_CASE("matmul family against explicit compositions") {
  Mat a = random_mat(4, 6, 1);
  Mat b = random_mat(6, 5, 2);
  Mat c = matmul(a, b);
  REQUIRE(c.rows == 4);
  REQUIRE(c.cols == 5);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j) {
      double want = 0.0;
      for (int k = 0; k < 6; ++k) want += a.at(i, k) * b.at(k, j);
      CHECK(c.at(i, j) == doctest::Approx(want).epsilon(1e-13));
    }

  Mat acc = random_mat(4, 5, 3);
  Mat acc_copy = acc;
  matmul_acc(a, b, acc);
  for (int i = 0; i < acc.size(); ++i)
    CHECK(acc.data[i] == doctest::Approx(acc_copy.data[i] + c.data[i]).epsilon(1e-12));

  Mat at = transpose(a);  // 6 x 4
  Mat tn(4, 5);
  matmul_tn_acc(at, b, tn);  // (a^T)^T b = a b
  for (int i = 0; i < tn.size(); ++i) CHECK(tn.data[i] == doctest::Approx(c.data[i]).epsilon(1e-12));

  Mat bt = transpose(b);  // 5 x 6
  Mat nt = matmul_nt(a, bt);
  for (int i = 0; i < nt.size(); ++i) CHECK(nt.data[i] == doctest::Approx(c.data[i]).epsilon(1e-12));
}

TEST_CASE("shape mismatches throw") {
  Mat a(2, 3), b(4, 2);
  CHECK_THROWS_AS(matmul(a, b), std::invalid_argument);
  Mat c(3, 3);
  CHECK_THROWS_AS(matmul_into(a, b, c), std::invalid_argument);
  Mat x(2, 2), y(3, 3);
  CHECK_THROWS_AS(add_inplace(x, y), std::invalid_argument);
  CHECK_THROWS_AS(axpy(1.0, x, y), std::invalid_argument);
  CHECK_THROWS_AS(frob_inner(x, y), std::invalid_argument);
  CHECK_THROWS_AS(dot(Vec{1.0, 2.0}, Vec{1.0}), std::invalid_argument);
}

TEST_CASE("elementwise helpers") {
  Mat a = random_mat(3, 4, 5);
  Mat b = random_mat(3, 4, 6);
  Mat h = hadamard(a, b);
  double fi = 0.0, ss = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    CHECK(h.data[i] == doctest::Approx(a.data[i] * b.data[i]));
    fi += a.data[i] * b.data[i];
    ss += a.data[i] * a.data[i];
  }
  CHECK(frob_inner(a, b) == doctest::Approx(fi).epsilon(1e-13));
  CHECK(sum_squares(a) == doctest::Approx(ss).epsilon(1e-13));

  Mat s = a;
  scale_inplace(s, 0.5);
  for (int i = 0; i < a.size(); ++i) CHECK(s.data[i] == doctest::Approx(0.5 * a.data[i]));

  Mat y = b;
  axpy(-1.5, a, y);
  for (int i = 0; i < a.size(); ++i)
    CHECK(y.data[i] == doctest::Approx(b.data[i] - 1.5 * a.data[i]));
}

TEST_CASE("all_finite flags bad entries") {
  Mat a(2, 2);
  CHECK(a.all_finite());
  a.at(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(a.all_finite());
  a.at(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(a.all_finite());
}

TEST_CASE("activation evaluation and backward match finite differences") {
  for (Activation act : {Activation::identity, Activation::tanh}) {
    const int n = 9;
    Mat x = random_mat(1, n, 7);
    Vec y(n), g(n, 1.0), back(n);
    activation_eval(act, n, x.ptr(), y.data());
    activation_bwd(act, n, y.data(), g.data(), back.data());
    for (int i = 0; i < n; ++i) {
      const double h = 1e-6;
      double up, down;
      double xi = x.data[i] + h;
      activation_eval(act, 1, &xi, &up);
      xi = x.data[i] - h;
      activation_eval(act, 1, &xi, &down);
      CHECK(back[i] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-5));
    }
  }
  CHECK(activation_from_string("tanh") == Activation::tanh);
  CHECK(activation_from_string("identity") == Activation::identity);
  CHECK(activation_from_string("relu") == Activation::relu);
  CHECK_THROWS_AS(activation_from_string("gelu"), std::invalid_argument);
  CHECK(std::string(activation_name(Activation::relu)) == "relu");
}

TEST_CASE("row softmax and its backward") {
  Mat z = random_mat(4, 3, 8, -5.0, 5.0);
  Mat s = row_softmax(z);
  for (int i = 0; i < 4; ++i) {
    double total = 0.0;
    int argmax_z = 0, argmax_s = 0;
    for (int j = 0; j < 3; ++j) {
      CHECK(s.at(i, j) > 0.0);
      total += s.at(i, j);
      if (z.at(i, j) > z.at(i, argmax_z)) argmax_z = j;
      if (s.at(i, j) > s.at(i, argmax_s)) argmax_s = j;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(argmax_z == argmax_s);
  }

  // large inputs stay finite (max-shifted exponentials)
  Mat big(1, 3);
  big.at(0, 0) = 1000.0;
  big.at(0, 1) = 999.0;
  big.at(0, 2) = -1000.0;
  Mat sb = row_softmax(big);
  CHECK(sb.all_finite());
  CHECK(sb.at(0, 0) > sb.at(0, 1));

  // backward vs finite differences of a scalar head sum(w . softmax(z))
  Mat w = random_mat(4, 3, 9);
  auto head = [&](const Mat& zz) {
    Mat ss = row_softmax(zz);
    return frob_inner(w, ss);
  };
  Mat ds = w;  // d head / d s = w
  Mat dz(4, 3);
  row_softmax_bwd(s, ds, dz);
  for (int i = 0; i < z.size(); ++i) {
    const double h = 1e-6;
    Mat zp = z, zm = z;
    zp.data[i] += h;
    zm.data[i] -= h;
    const double fd = (head(zp) - head(zm)) / (2 * h);
    CHECK(dz.data[i] == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("cholesky factorization, solve and quadratic form") {
  for (int n : {1, 2, 5, 12}) {
    Mat a = random_spd(n, 10u + static_cast<unsigned>(n));
    Cholesky c = cholesky_spd(a);
    CHECK(c.jitter_retries == 0);

    Mat rec(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k <= std::min(i, j); ++k) s += c.l.at(i, k) * c.l.at(j, k);
        rec.at(i, j) = s;
      }
    for (int i = 0; i < n * n; ++i)
      CHECK(rec.data[i] == doctest::Approx(a.data[i]).epsilon(1e-10));

    double want_logdet = 0.0;
    for (int i = 0; i < n; ++i) want_logdet += 2.0 * std::log(c.l.at(i, i));
    CHECK(c.logdet == doctest::Approx(want_logdet).epsilon(1e-12));

    Vec b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = std::sin(i + 1.0);
    Vec x = solve_cholesky(c, b);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += a.at(i, j) * x[static_cast<std::size_t>(j)];
      CHECK(s == doctest::Approx(b[static_cast<std::size_t>(i)]).epsilon(1e-9));
    }

    double want_quad = 0.0;
    for (int i = 0; i < n; ++i) want_quad += b[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    CHECK(quad_form_inv(c, b) == doctest::Approx(want_quad).epsilon(1e-9));
  }
}

TEST_CASE("cholesky jitter retries and hard failures") {
  // marginally indefinite: jitter should rescue a tiny negative eigenvalue
  Mat a(2, 2);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = 1.0;
  a.at(1, 0) = 1.0;
  a.at(1, 1) = 1.0 - 1e-14;
  Cholesky c = cholesky_spd(a);
  CHECK(c.jitter_retries >= 1);

  Mat bad(2, 2);
  bad.at(0, 0) = 1.0;
  bad.at(1, 1) = -5.0;
  CHECK_THROWS_AS(cholesky_spd(bad), std::runtime_error);

  Mat nonsquare(2, 3);
  CHECK_THROWS_AS(cholesky_spd(nonsquare), std::invalid_argument);
}

TEST_CASE("adam step trajectory matches the closed-form recursion") {
  const int n = 4;
  Vec p = {1.0, -2.0, 0.5, 3.0};
  Vec g = {0.1, -0.2, 0.3, -0.4};
  AdamState st(n);
  AdamConfig cfg;
  cfg.lr = 0.01;

  Vec m(static_cast<std::size_t>(n), 0.0), v(static_cast<std::size_t>(n), 0.0), want = p;
  for (int step = 1; step <= 3; ++step) {
    adam_step(st, cfg, n, p.data(), g.data());
    for (int i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      m[k] = cfg.beta1 * m[k] + (1 - cfg.beta1) * g[k];
      v[k] = cfg.beta2 * v[k] + (1 - cfg.beta2) * g[k] * g[k];
      const double mhat = m[k] / (1 - std::pow(cfg.beta1, step));
      const double vhat = v[k] / (1 - std::pow(cfg.beta2, step));
      want[k] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
      CHECK(p[k] == doctest::Approx(want[k]).epsilon(1e-12));
    }
    CHECK(st.t == step);
  }
}
