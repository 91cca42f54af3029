#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "qnl/fft.hpp"
#include "qnl/field.hpp"
#include "qnl/operators.hpp"
#include "test_util.hpp"

using namespace qnl;

namespace {
SpectralGrid g2(int n = 32) { return SpectralGrid::isotropic(2, n); }
}  // namespace

TEST_CASE("fft constant field concentrates at mode zero") {
  ScalarField f(g2(16), Rep::Physical);
  f.fill([](const double*) { return 3.5; });
  transform(f);
  CHECK(std::abs(f.data()[0] - cplx(3.5 * 256.0, 0.0)) < 1e-9);
  double off = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) off = std::max(off, std::abs(f.data()[i]));
  CHECK(off < 1e-9);
}

TEST_CASE("fft single harmonic gives two conjugate modes") {
  SpectralGrid g = g2(16);
  ScalarField f(g, Rep::Physical);
  f.fill([](const double* x) { return std::sin(x[0]); });
  transform(f);
  const double nd = static_cast<double>(g.size());
  int cnt = 0;
  for_each_mode(g, [&](std::size_t idx, const double* k) {
    const cplx c = f.data()[idx] / nd;
    if (std::abs(c) < 1e-12) return;
    ++cnt;
    CHECK(k[1] == 0.0);
    CHECK(std::abs(std::abs(k[0]) - 1.0) < 1e-12);
    CHECK(std::abs(c - cplx(0.0, -0.5 * k[0])) < 1e-12);
  });
  CHECK(cnt == 2);
}

TEST_CASE("fft round trip against direct summation on N=8") {
  SpectralGrid g = SpectralGrid::isotropic(2, 8);
  ScalarField f = testutil::random_scalar(g, 7);
  ScalarField hat = in_rep(f, Rep::Fourier);
  // direct O(N^2) DFT oracle
  const int n = 8;
  double worst = 0.0;
  for (int j0 = -n / 2; j0 < n / 2; ++j0)
    for (int j1 = -n / 2; j1 < n / 2; ++j1) {
      cplx acc(0.0, 0.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double th = -2.0 * kPi * (j0 * a + j1 * b) / n;
          const std::size_t idx = static_cast<std::size_t>(a) * n + b;
          acc += f.data()[idx] * cplx(std::cos(th), std::sin(th));
        }
      const int w0 = j0 >= 0 ? j0 : n + j0;
      const int w1 = j1 >= 0 ? j1 : n + j1;
      worst = std::max(worst, std::abs(acc - hat.data()[static_cast<std::size_t>(w0) * n + w1]));
    }
  CHECK(worst / l2_norm(f) < 1e-12);
  ScalarField back = in_rep(hat, Rep::Physical);
  CHECK(l2_norm(back - f) / l2_norm(f) < 1e-12);
}

TEST_CASE("parseval identity") {
  SpectralGrid g = g2();
  ScalarField f = testutil::random_scalar(g, 11);
  ScalarField hat = in_rep(f, Rep::Fourier);
  double sum = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) sum += std::norm(hat.data()[i]);
  sum *= g.volume() / (static_cast<double>(g.size()) * static_cast<double>(g.size()));
  const double l2 = l2_norm(f);
  CHECK(std::abs(sum - l2 * l2) / (l2 * l2) < 1e-12);
}

TEST_CASE("grad of sin is cos along e1") {
  SpectralGrid g = g2();
  ScalarField f(g, Rep::Physical);
  f.fill([](const double* x) { return std::sin(x[0]); });
  VectorField gr = grad(f);
  ScalarField want(g, Rep::Physical);
  want.fill([](const double* x) { return std::cos(x[0]); });
  CHECK(l2_norm(gr.comp(0) - want) < 1e-12);
  CHECK(l2_norm(gr.comp(1)) < 1e-12);
}

TEST_CASE("inv_laplacian inverts laplacian up to the mean") {
  SpectralGrid g = g2();
  ScalarField f = testutil::random_scalar(g, 3);
  ScalarField got = inv_laplacian(laplacian(f));
  ScalarField want = f;
  const cplx mn = mean(f);
  for (auto& z : want) z -= mn;
  CHECK(l2_norm(got - want) / l2_norm(f) < 1e-12);
}

TEST_CASE("inv_laplacian rejects nonzero mean") {
  ScalarField f(g2(), Rep::Physical);
  f.fill([](const double*) { return 1.0; });
  CHECK_THROWS_AS(inv_laplacian(f), CompatibilityError);
}

TEST_CASE("div of a curl-type field vanishes") {
  SpectralGrid g = g2();
  ScalarField psi = testutil::random_scalar(g, 5);
  VectorField v(g, Rep::Physical);
  VectorField gp = grad(psi);
  v.comp(0) = gp.comp(1) * cplx(-1.0, 0.0);
  v.comp(1) = gp.comp(0);
  CHECK(l2_norm(div(v)) / l2_norm(v) < 1e-12);
  // curl-type fields are fixed by P
  CHECK(l2_norm(leray_P(v) - v) / l2_norm(v) < 1e-12);
}

TEST_CASE("leray projectors on a gradient field") {
  SpectralGrid g = g2();
  ScalarField phi(g, Rep::Physical);
  phi.fill([](const double* x) { return std::sin(x[0]); });
  VectorField v = grad(phi);
  CHECK(l2_norm(leray_Q(v) - v) / l2_norm(v) < 1e-12);
  CHECK(l2_norm(leray_P(v)) / l2_norm(v) < 1e-12);
}

TEST_CASE("projector algebra on seeded random fields") {
  SpectralGrid g = g2();
  for (unsigned long s = 0; s < 5; ++s) {
    VectorField v = testutil::random_vector(g, 100 + s);
    const double n = l2_norm(v);
    VectorField p = leray_P(v), q = leray_Q(v);
    CHECK(l2_norm((p + q) - v) / n < 1e-12);
    CHECK(l2_norm(leray_P(p) - p) / n < 1e-12);
    CHECK(l2_norm(leray_P(q)) / n < 1e-12);
    CHECK(l2_norm(div(p)) / n < 1e-12);
  }
}

TEST_CASE("grad and div are skew adjoint") {
  SpectralGrid g = g2();
  ScalarField phi = testutil::random_scalar(g, 21);
  VectorField v = testutil::random_vector(g, 22);
  const cplx a = inner(grad(phi), v);
  const cplx b = inner(phi, div(v));
  CHECK(std::abs(a + b) / std::abs(a) < 1e-12);
}

TEST_CASE("sobolev norm special cases") {
  SpectralGrid g = g2();
  ScalarField c(g, Rep::Physical);
  c.fill([](const double*) { return -2.0; });
  CHECK(sobolev_norm(c, 1.7, 2) == doctest::Approx(2.0 * std::sqrt(g.volume())).epsilon(1e-12));

  ScalarField m(g, Rep::Physical);
  m.fill([](const double* x) { return std::cos(2.0 * x[0]) * std::sqrt(2.0); });
  // |m|_{L2} = vol^{1/2}; s = -1 multiplies by (1+|k|^2)^{-1/2}, |k|^2 = 4
  CHECK(sobolev_norm(m, -1.0, 2) ==
        doctest::Approx(std::sqrt(g.volume() / 5.0)).epsilon(1e-12));

  ScalarField f = testutil::random_scalar(g, 9);
  CHECK(sobolev_norm(f, 0.0, 2) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
}

TEST_CASE("mollify basics") {
  SpectralGrid g = g2();
  ScalarField c(g, Rep::Physical);
  c.fill([](const double*) { return 4.0; });
  CHECK(l2_norm(mollify(c, 0.3) - c) < 1e-12);
  CHECK_THROWS_AS(mollify(c, 1.5), ParameterError);
  CHECK_THROWS_AS(mollify(c, 0.0), ParameterError);

  ScalarField f(g, Rep::Physical);
  f.fill([](const double* x) { return std::sin(x[0]); });
  double prev = -1.0;
  for (double alpha : {0.05, 0.1, 0.2, 0.4}) {
    const double err = l2_norm(f - mollify(f, alpha));
    CHECK(err >= prev);
    prev = err;
  }
  // single mode: output a pure rescaling with multiplier in (0,1]
  ScalarField mf = mollify(f, 0.2);
  const double ratio = l2_norm(mf) / l2_norm(f);
  CHECK(ratio <= 1.0);
  CHECK(ratio > 0.9);
  CHECK(l2_norm(mf - f * cplx(ratio, 0.0)) < 1e-10);
}

TEST_CASE("partial matches grad components") {
  SpectralGrid g = g2();
  ScalarField f = testutil::random_scalar(g, 33);
  VectorField gr = grad(f);
  CHECK(l2_norm(partial(f, 0) - gr.comp(0)) < 1e-12);
  CHECK(l2_norm(partial(f, 1) - gr.comp(1)) < 1e-12);
}
