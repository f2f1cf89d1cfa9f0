#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/QR>

#include "core/spectrum.hpp"
#include "test_support.hpp"

using namespace rankgauge;
using testsupport::random_gaussian;
using testsupport::wrap;

namespace {

Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::uint64_t seed) {
  const Eigen::MatrixXd g = random_gaussian(n, n, seed);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ();
}

void check_paths_agree(const SingularSpectrum& direct, const SingularSpectrum& gram,
                       double rel, double abs_floor) {
  REQUIRE(direct.size() == gram.size());
  const double top = direct.values.empty() ? 0.0 : direct.values.front();
  for (std::size_t i = 0; i < direct.size(); ++i) {
    const double tol = rel * direct.values[i] + abs_floor * top;
    CHECK(std::abs(direct.values[i] - gram.values[i]) <= tol);
  }
}

}  // namespace

TEST_CASE("simple constructions") {
  SUBCASE("2x2 identity") {
    const SingularSpectrum s = singular_values(wrap(Eigen::MatrixXd::Identity(2, 2)));
    REQUIRE(s.size() == 2);
    CHECK(s.values[0] == doctest::Approx(1.0));
    CHECK(s.values[1] == doctest::Approx(1.0));
  }

  SUBCASE("3x2 zero matrix") {
    const SingularSpectrum s = singular_values(wrap(Eigen::MatrixXd::Zero(3, 2)));
    REQUIRE(s.size() == 2);
    CHECK(s.values[0] == 0.0);
    CHECK(s.values[1] == 0.0);
  }

  SUBCASE("diagonal 3x2 via both paths") {
    Eigen::MatrixXd m(3, 2);
    m << 3, 0, 0, 4, 0, 0;
    for (SpectrumPath path : {SpectrumPath::Direct, SpectrumPath::Gram}) {
      const SingularSpectrum s = singular_values(wrap(m), path);
      REQUIRE(s.size() == 2);
      CHECK(s.values[0] == doctest::Approx(4.0).epsilon(1e-12));
      CHECK(s.values[1] == doctest::Approx(3.0).epsilon(1e-12));
      CHECK(s.path == path);
    }
  }
}

TEST_CASE("spectrum invariants on random matrices") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    testsupport::Gaussian g(seed * 1000);
    const Eigen::Index rows = 2 + static_cast<Eigen::Index>(g.uniform() * 98);
    const Eigen::Index cols = 2 + static_cast<Eigen::Index>(g.uniform() * 62);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = 2.0 * g.uniform() - 1.0;

    const SingularSpectrum s = singular_values(wrap(m), SpectrumPath::Direct);

    CAPTURE(seed);
    REQUIRE(s.size() == static_cast<std::size_t>(std::min(rows, cols)));

    SUBCASE("sorted nonincreasing, nonnegative") {
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s.values[i] >= 0.0);
        if (i > 0) CHECK(s.values[i] <= s.values[i - 1]);
      }
    }

    SUBCASE("paths agree within rel 1e-6, abs floor 1e-9") {
      const SingularSpectrum gram = singular_values(wrap(m), SpectrumPath::Gram);
      check_paths_agree(s, gram, 1e-6, 1e-9);
    }

    SUBCASE("sum of squares equals squared Frobenius norm") {
      double sum = 0.0;
      for (const double v : s.values) sum += v * v;
      CHECK(sum == doctest::Approx(m.squaredNorm()).epsilon(1e-10));
    }

    SUBCASE("scaling equivariance") {
      const double c = 3.7;
      const SingularSpectrum scaled = singular_values(wrap(c * m), SpectrumPath::Direct);
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(scaled.values[i] == doctest::Approx(c * s.values[i]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("cross-path oracle on a 100x8 matrix") {
  const Eigen::MatrixXd m = random_gaussian(100, 8, 99);
  const SingularSpectrum direct = singular_values(wrap(m), SpectrumPath::Direct);
  const SingularSpectrum gram = singular_values(wrap(m), SpectrumPath::Gram);
  check_paths_agree(direct, gram, 1e-6, 0.0);
}

TEST_CASE("orthogonal invariance") {
  const Eigen::MatrixXd m = random_gaussian(24, 12, 5);
  const SingularSpectrum base = singular_values(wrap(m), SpectrumPath::Direct);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd u = random_orthogonal(24, 100 + seed);
    const Eigen::MatrixXd v = random_orthogonal(12, 200 + seed);
    const SingularSpectrum rotated = singular_values(wrap(u * m * v), SpectrumPath::Direct);
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(rotated.values[i] ==
            doctest::Approx(base.values[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("auto path prefers Gram only for strongly rectangular input") {
  CHECK(resolve_path(25600, 2048, SpectrumPath::Auto) == SpectrumPath::Gram);
  CHECK(resolve_path(1000, 100, SpectrumPath::Auto) == SpectrumPath::Gram);
  CHECK(resolve_path(100, 80, SpectrumPath::Auto) == SpectrumPath::Direct);
  CHECK(resolve_path(100, 1000, SpectrumPath::Auto) == SpectrumPath::Gram);
  CHECK(resolve_path(64, 64, SpectrumPath::Auto) == SpectrumPath::Direct);
  CHECK(resolve_path(10, 10, SpectrumPath::Direct) == SpectrumPath::Direct);
  CHECK(resolve_path(10, 10, SpectrumPath::Gram) == SpectrumPath::Gram);
}

TEST_CASE("covariance eigenvalues") {
  SUBCASE("two opposite rows, centered") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 0, -1, 0;
    const EigenSpectrum e = covariance_eigenvalues(wrap(m), true);
    REQUIRE(e.size() == 2);
    CHECK(e.values[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(0.0));
    CHECK(e.centered);
  }

  SUBCASE("constant matrix centers to zero") {
    const EigenSpectrum e = covariance_eigenvalues(wrap(Eigen::MatrixXd::Constant(5, 3, 2.5)), true);
    for (const double v : e.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("centering needs two rows") {
    CHECK_THROWS_AS(covariance_eigenvalues(wrap(Eigen::MatrixXd::Ones(1, 3)), true), Error);
    CHECK_NOTHROW(covariance_eigenvalues(wrap(Eigen::MatrixXd::Ones(1, 3)), false));
  }

  SUBCASE("matches squared singular values of the centered matrix") {
    const Eigen::MatrixXd m = random_gaussian(200, 5, 77);
    const EigenSpectrum e = covariance_eigenvalues(wrap(m), true);

    const Eigen::RowVectorXd mean = m.colwise().mean();
    const Eigen::MatrixXd centered = m.rowwise() - mean;
    const SingularSpectrum s = singular_values(wrap(centered), SpectrumPath::Direct);

    REQUIRE(e.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      const double expected = s.values[i] * s.values[i] / (200 - 1);
      CHECK(e.values[i] == doctest::Approx(expected).epsilon(1e-8));
    }
  }

  SUBCASE("uncentered covariance is sigma^2 / N") {
    const Eigen::MatrixXd m = random_gaussian(50, 4, 78);
    const EigenSpectrum e = covariance_eigenvalues(wrap(m), false);
    const SingularSpectrum s = singular_values(wrap(m), SpectrumPath::Direct);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(e.values[i] == doctest::Approx(s.values[i] * s.values[i] / 50).epsilon(1e-8));
    }
  }
}
