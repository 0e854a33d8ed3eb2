// Copyright (c) 2026 The finr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "finr/error.hpp"
#include "finr/kernels.hpp"
#include "test_util.hpp"

using namespace finr;
using finr::test::max_abs_diff;
using finr::test::random_vector;
namespace k = finr::kernels;

namespace {

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 33, 100, 1023};

double rel_tol(double ref) { return 1e-13 * std::max(1.0, std::abs(ref)); }

}  // namespace

TEST_CASE("scalar is always available and listed first") {
  const auto isas = k::available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == k::Isa::scalar);
}

TEST_CASE("isa names round-trip") {
  for (k::Isa isa : {k::Isa::scalar, k::Isa::avx2, k::Isa::neon}) {
    CHECK(k::parse_isa(k::isa_name(isa)) == isa);
  }
  CHECK_THROWS_AS(k::parse_isa("sse9"), InvalidArgument);
}

TEST_CASE("set_isa switches the active table and rejects unavailable ones") {
  const k::Isa before = k::active_isa();
  k::set_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  CHECK(&k::active() == &k::scalar_table());
  const auto isas = k::available_isas();
  for (k::Isa isa : {k::Isa::avx2, k::Isa::neon}) {
    if (std::find(isas.begin(), isas.end(), isa) == isas.end()) {
      CHECK_THROWS_AS(k::set_isa(isa), InvalidArgument);
    }
  }
  k::set_isa(before);
}

TEST_CASE("scalar reference kernels against direct loops") {
  const auto& t = k::scalar_table();
  const auto a = random_vector(37, 1);
  const auto b = random_vector(37, 2);
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  CHECK(t.dot(a.data(), b.data(), a.size()) == doctest::Approx(dot).epsilon(1e-14));

  // 3x4 gemv with bias
  const std::vector<double> w = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  const std::vector<double> x = {1, -1, 2, 0.5};
  const std::vector<double> bias = {0.5, -0.5, 1};
  std::vector<double> y(3);
  t.gemv(w.data(), 3, 4, x.data(), bias.data(), y.data());
  CHECK(y[0] == doctest::Approx(1 - 2 + 6 + 2 + 0.5));
  CHECK(y[1] == doctest::Approx(5 - 6 + 14 + 4 - 0.5));
  CHECK(y[2] == doctest::Approx(9 - 10 + 22 + 6 + 1));

  std::vector<double> out(4, 1.0);
  const std::vector<double> delta = {1, 0, -1};
  t.gemv_t_acc(w.data(), 3, 4, delta.data(), out.data());
  CHECK(out == std::vector<double>{1 - 8, 1 - 8, 1 - 8, 1 - 8});

  std::vector<double> g(6, 0.0);
  const std::vector<double> u = {1, 2};
  const std::vector<double> v = {3, 4, 5};
  t.ger(g.data(), 2, 3, 2.0, u.data(), v.data());
  CHECK(g == std::vector<double>{6, 8, 10, 12, 16, 20});

  std::vector<double> ss = {0.0, 0.125, 0.25, 0.5, -0.75, 3.3};
  std::vector<double> c(ss.size());
  std::vector<double> s(ss.size());
  t.sincos_2pi(ss.data(), c.data(), s.data(), ss.size());
  for (std::size_t i = 0; i < ss.size(); ++i) {
    CHECK(std::abs(c[i] - std::cos(2 * std::numbers::pi * ss[i])) < 1e-15);
    CHECK(std::abs(s[i] - std::sin(2 * std::numbers::pi * ss[i])) < 1e-15);
  }
  // exact at quarter turns
  CHECK(c[2] == 0.0);
  CHECK(s[2] == 1.0);
  CHECK(c[3] == -1.0);
  CHECK(s[3] == 0.0);
}

TEST_CASE("sincos_2pi is accurate over a wide phase range") {
  const auto& t = k::scalar_table();
  const auto phases = random_vector(20000, 3, -500.0, 500.0);
  std::vector<double> c(phases.size());
  std::vector<double> s(phases.size());
  t.sincos_2pi(phases.data(), c.data(), s.data(), phases.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    // reduce in long double so the reference is not limited by 2 pi t rounding
    const long double r = phases[i] - std::round(static_cast<long double>(phases[i]));
    const long double angle = 2.0L * std::numbers::pi_v<long double> * r;
    worst = std::max(worst, static_cast<double>(std::abs(c[i] - std::cos(angle))));
    worst = std::max(worst, static_cast<double>(std::abs(s[i] - std::sin(angle))));
  }
  CHECK(worst < 1e-15);
}

TEST_CASE("every available ISA matches the scalar reference") {
  const auto& ref = k::scalar_table();
  for (k::Isa isa : k::available_isas()) {
    CAPTURE(k::isa_name(isa));
    const auto& t = k::table_for(isa);
    for (std::size_t n : kLengths) {
      CAPTURE(n);
      const auto a = random_vector(n, 10 + n);
      const auto b = random_vector(n, 20 + n);

      const double d0 = ref.dot(a.data(), b.data(), n);
      CHECK(std::abs(t.dot(a.data(), b.data(), n) - d0) <= rel_tol(d0));

      const double q0 = ref.sum_sq_diff(a.data(), b.data(), n);
      CHECK(std::abs(t.sum_sq_diff(a.data(), b.data(), n) - q0) <= rel_tol(q0));

      auto y0 = b;
      auto y1 = b;
      ref.axpy(0.37, a.data(), y0.data(), n);
      t.axpy(0.37, a.data(), y1.data(), n);
      CHECK(max_abs_diff(y0, y1) <= 1e-15);

      std::vector<double> m0(n);
      std::vector<double> m1(n);
      ref.mul(a.data(), b.data(), m0.data(), n);
      t.mul(a.data(), b.data(), m1.data(), n);
      CHECK(m0 == m1);

      const auto phases = random_vector(n, 30 + n, -40.0, 40.0);
      std::vector<double> c0(n), s0(n), c1(n), s1(n);
      ref.sincos_2pi(phases.data(), c0.data(), s0.data(), n);
      t.sincos_2pi(phases.data(), c1.data(), s1.data(), n);
      CHECK(max_abs_diff(c0, c1) <= 2e-16);
      CHECK(max_abs_diff(s0, s1) <= 2e-16);

      // in-place form: sines overwrite the phases
      auto inplace = phases;
      std::vector<double> c2(n);
      t.sincos_2pi(inplace.data(), c2.data(), inplace.data(), n);
      CHECK(max_abs_diff(inplace, s1) == 0.0);
      CHECK(max_abs_diff(c2, c1) == 0.0);

      auto p0 = a;
      auto p1 = a;
      std::vector<double> mm0(n, 0.1), mm1(n, 0.1), v0(n, 0.2), v1(n, 0.2);
      ref.adam(p0.data(), b.data(), mm0.data(), v0.data(), n, 1e-3, 0.9, 0.999, 1e-8, 0.19, 0.002);
      t.adam(p1.data(), b.data(), mm1.data(), v1.data(), n, 1e-3, 0.9, 0.999, 1e-8, 0.19, 0.002);
      CHECK(max_abs_diff(p0, p1) <= 1e-15);
      CHECK(max_abs_diff(mm0, mm1) <= 1e-15);
      CHECK(max_abs_diff(v0, v1) <= 1e-15);
    }

    for (std::size_t rows : {1, 3, 8}) {
      for (std::size_t cols : {1, 4, 5, 17, 64}) {
        CAPTURE(rows);
        CAPTURE(cols);
        const auto w = random_vector(rows * cols, rows * 100 + cols);
        const auto x = random_vector(cols, 7);
        const auto bias = random_vector(rows, 8);
        const auto delta = random_vector(rows, 9);
        std::vector<double> y0(rows), y1(rows);
        ref.gemv(w.data(), rows, cols, x.data(), bias.data(), y0.data());
        t.gemv(w.data(), rows, cols, x.data(), bias.data(), y1.data());
        CHECK(max_abs_diff(y0, y1) <= 1e-13);
        ref.gemv(w.data(), rows, cols, x.data(), nullptr, y0.data());
        t.gemv(w.data(), rows, cols, x.data(), nullptr, y1.data());
        CHECK(max_abs_diff(y0, y1) <= 1e-13);

        std::vector<double> o0(cols, 0.5), o1(cols, 0.5);
        ref.gemv_t_acc(w.data(), rows, cols, delta.data(), o0.data());
        t.gemv_t_acc(w.data(), rows, cols, delta.data(), o1.data());
        CHECK(max_abs_diff(o0, o1) <= 1e-13);

        auto g0 = w;
        auto g1 = w;
        ref.ger(g0.data(), rows, cols, -0.3, delta.data(), x.data());
        t.ger(g1.data(), rows, cols, -0.3, delta.data(), x.data());
        CHECK(max_abs_diff(g0, g1) <= 1e-15);
      }
    }
  }
}
