#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vseg/hessian.hpp"
#include "vseg/mfat.hpp"
#include "vseg/phantom.hpp"

using namespace vseg;

namespace {

Volume3 tube_volume(const Dims& d, double radius, double noise, std::uint64_t seed) {
  Volume3 v(d);
  BinaryMask3 m(d);
  const double cy = static_cast<double>(d.ny) / 2, cz = static_cast<double>(d.nz) / 2;
  generate_tube({{2, cy, cz}, {static_cast<double>(d.nx) - 3, cy, cz}}, radius, 1.0, v, m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, noise);
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = static_cast<float>(v[n] + g(rng));
  return v;
}

}  // namespace

TEST_CASE("regularized eigenvalue examples") {
  CHECK(regularize_eigen(-1.0, -1.0, 0.02) == -1.0);
  CHECK(regularize_eigen(-0.01, -1.0, 0.02) == doctest::Approx(-0.02));
  CHECK(regularize_eigen(0.5, -1.0, 0.02) == 0.0);
  CHECK(regularize_eigen(0.0, -1.0, 0.02) == 0.0);
  CHECK(regularize_eigen(-0.02, -1.0, 0.02) == doctest::Approx(-0.02));
}

TEST_CASE("fractional anisotropy examples") {
  CHECK(fat_vesselness(-2, -2, -2, -2, -2) == doctest::Approx(0.0));
  CHECK(fat_vesselness(0, -1, -1, -1, -1) == doctest::Approx(std::sqrt(1.0 / 6.0)));
  CHECK(fat_vesselness(0, 0, 0, 0, 0) == 0.0);
  CHECK(fat_vesselness(0.1, -1, -3, -3, -3) == doctest::Approx(fat_vesselness(0.4, -4, -12, -12, -12)));
}

TEST_CASE("R_lambda examples and branch order") {
  CHECK(r_lambda(0.1, -1, 0.3, 5) == 0.0);
  CHECK(r_lambda(-1, 0.0, 0.3, 5) == 0.0);
  CHECK(r_lambda(-1, -3, 0.3, 5) == doctest::Approx(0.7));  // gap -2 below the maximum
  CHECK(r_lambda(-2, -1, 0.4, 1.0) == 1.0);
  CHECK(r_lambda(-2, -1, 0.4, 3.0) == doctest::Approx(0.6));
  CHECK(r_lambda(-2, -1, 0.4, 1.0 + 1e-13) == 1.0);
}

TEST_CASE("constant volume gives zero vesselness") {
  const VesselnessResult r = mfat(Volume3({10, 10, 10}, {}, 3.0f), MfatConfig{});
  for (std::size_t n = 0; n < r.v_mfat.size(); ++n) REQUIRE(r.v_mfat[n] == 0.0f);
  const Vesselness2D r2 = mfat_2d(Image2(12, 9, 5.0f), MfatConfig{});
  for (float x : r2.v_mfat.data) REQUIRE(x == 0.0f);
}

TEST_CASE("single scale: v_MFAT equals R_lambda") {
  std::mt19937_64 rng(31);
  const Volume3 v = oracle::random_volume(rng, {12, 11, 10});
  MfatConfig cfg;
  cfg.sigmas = {0.75};
  const VesselnessResult r = mfat(v, cfg);

  // R_lambda rebuilt from the Hessian
  const HessianVolumes h = hessian_at_scale(v, 0.75);
  std::vector<EigenSystem> es(v.size());
  double min_l3 = INFINITY, max_gap = -INFINITY;
  for (std::size_t n = 0; n < v.size(); ++n) {
    es[n] = eig_sym3(h.at(n));
    min_l3 = std::min(min_l3, static_cast<double>(static_cast<float>(es[n].lambda3)));
  }
  for (std::size_t n = 0; n < v.size(); ++n) {
    const double l2 = static_cast<float>(es[n].lambda2), l3 = static_cast<float>(es[n].lambda3);
    max_gap = std::max(max_gap, regularize_eigen(l3, min_l3, cfg.tau_rho) - l2);
  }
  for (std::size_t n = 0; n < v.size(); ++n) {
    const double l1 = static_cast<float>(es[n].lambda1), l2 = static_cast<float>(es[n].lambda2),
                 l3 = static_cast<float>(es[n].lambda3);
    const double rho = regularize_eigen(l3, min_l3, cfg.tau_rho), nu = regularize_eigen(l3, min_l3, cfg.tau_nu);
    const double R = std::clamp(r_lambda(l2, rho, fat_vesselness(l1, l2, l3, rho, nu), max_gap), 0.0, 1.0);
    REQUIRE(r.v_mfat[n] == static_cast<float>(R));
    REQUIRE(r.ani[n] == doctest::Approx(std::abs(r.lambda2[n] * r.lambda3[n])));
  }
}

TEST_CASE("invariants after every scale on random volumes") {
  std::mt19937_64 rng(32);
  const MfatConfig cfg;
  const double m = static_cast<double>(cfg.sigmas.size());
  const double bound = 1.0 + (m - 1) * cfg.delta * std::tanh(1.0 - cfg.delta);
  for (int t = 0; t < 10; ++t) {
    const Volume3 v = oracle::random_volume(rng, {14, 13, 12});
    std::vector<MfatScaleCheck> checks;
    MfatOptions opts;
    opts.checks = &checks;
    const VesselnessResult r = mfat(v, cfg, opts);
    REQUIRE(checks.size() == cfg.sigmas.size());
    for (const auto& c : checks) {
      REQUIRE(c.min_v_minus_r >= 0.0);
      REQUIRE(c.max_r_unclamped <= 1.0 + 1e-9);
      REQUIRE(c.min_v >= 0.0);
    }
    for (std::size_t n = 0; n < v.size(); ++n) {
      REQUIRE(r.v_mfat[n] <= bound);
      REQUIRE(r.ani[n] == std::abs(r.lambda2[n] * r.lambda3[n]));
      REQUIRE(r.winning_scale[n] < cfg.sigmas.size());
      const auto& u = r.v1[n];
      REQUIRE(std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("bright tube: centreline response well above background") {
  const Dims d{48, 40, 40};
  const Volume3 v = tube_volume(d, 2.0, 0.02, 5);
  const VesselnessResult r = mfat(v, MfatConfig{});
  double centre = 0, bg = 0;
  std::size_t nc = 0, nb = 0;
  for (std::size_t i = 8; i < 40; ++i) {
    centre += r.v_mfat.at(i, 20, 20);
    ++nc;
  }
  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 0; j < d.ny; ++j)
      for (std::size_t i = 8; i < 40; ++i) {
        const double dist = std::hypot(static_cast<double>(j) - 20, static_cast<double>(k) - 20);
        if (dist > 8) {
          bg += r.v_mfat.at(i, j, k);
          ++nb;
        }
      }
  centre /= static_cast<double>(nc);
  bg /= static_cast<double>(nb);
  MESSAGE("tube centreline / background = " << centre / bg);
  CHECK(centre > 5.0 * bg);

  // the winning eigenvector follows the tube
  CHECK(std::abs(r.v1[lin(24, 20, 20, d)][0]) > 0.95f);
}

TEST_CASE("reduction domain restricts the per-scale statistics") {
  const Dims d{24, 24, 24};
  const Volume3 v = tube_volume(d, 2.0, 0.0, 1);
  BinaryMask3 all(d);
  for (std::size_t n = 0; n < all.size(); ++n) all.set(n);
  MfatOptions o;
  o.reduction_domain = &all;
  const VesselnessResult a = mfat(v, MfatConfig{}, o), b = mfat(v, MfatConfig{});
  for (std::size_t n = 0; n < v.size(); ++n) REQUIRE(a.v_mfat[n] == b.v_mfat[n]);
  BinaryMask3 wrong(Dims{2, 2, 2});
  o.reduction_domain = &wrong;
  CHECK_THROWS_AS(mfat(v, MfatConfig{}, o), GeometryError);
}

TEST_CASE("2D: bright ridge responds, dark ridge does not") {
  Image2 bright(40, 40, 0.0f), dark(40, 40, 1.0f);
  for (std::size_t y = 0; y < 40; ++y)
    for (std::size_t x = 0; x < 40; ++x) {
      const double dy = static_cast<double>(y) - 20;
      const float p = static_cast<float>(std::exp(-dy * dy / 2.0));
      bright.at(x, y) = p;
      dark.at(x, y) = 1.0f - p;
    }
  const Vesselness2D rb = mfat_2d(bright, MfatConfig{});
  const Vesselness2D rd = mfat_2d(dark, MfatConfig{});
  double on = 0, off = 0;
  for (std::size_t x = 5; x < 35; ++x) {
    on += rb.v_mfat.at(x, 20);
    off += rb.v_mfat.at(x, 5);
    REQUIRE(rd.v_mfat.at(x, 20) == 0.0f);
  }
  CHECK(on / 30 > 0.5);
  CHECK(on > 10 * off);
  CHECK(std::abs(rb.v1[20 + 40 * 20][0]) > 0.99f);

  std::vector<std::uint8_t> bad(3, 1);
  CHECK_THROWS_AS(mfat_2d(bright, MfatConfig{}, bad), GeometryError);
}

TEST_CASE("config validation") {
  MfatConfig c;
  c.sigmas = {};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.sigmas = {1.0, 0.5};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.sigmas = {0.5, 1.0};
  c.tau_rho = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.tau_rho = 0.02;
  c.delta = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
