#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vseg/spectral.hpp"

using namespace vseg;

namespace {

double max_abs(std::span<const float> x) {
  double m = 0;
  for (float f : x) m = std::max(m, std::abs(static_cast<double>(f)));
  return m;
}

}  // namespace

TEST_CASE("inpaint: constant inside gives constant everywhere") {
  const Dims d{12, 10, 8};
  Volume3 v(d, {}, 0.0f);
  BinaryMask3 m(d);
  for (std::size_t k = 2; k < 6; ++k)
    for (std::size_t j = 3; j < 7; ++j)
      for (std::size_t i = 4; i < 8; ++i) {
        m.set(i, j, k);
        v.at(i, j, k) = 3.25f;
      }
  const Volume3 out = inpaint_outside_mask(v, m);
  for (std::size_t n = 0; n < out.size(); ++n) REQUIRE(out[n] == doctest::Approx(3.25).epsilon(1e-9));
}

TEST_CASE("inpaint: inside untouched, maximum principle outside") {
  std::mt19937_64 rng(1);
  const Dims d{16, 14, 12};
  Volume3 v = oracle::random_volume(rng, d, -5, 5);
  BinaryMask3 slab(d);
  double lo = 1e9, hi = -1e9;
  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 0; j < d.ny; ++j)
      for (std::size_t i = 5; i < 10; ++i) {
        slab.set(i, j, k);
        v.at(i, j, k) = static_cast<float>(0.5 * static_cast<double>(i) + 0.1 * static_cast<double>(k));
        lo = std::min<double>(lo, v.at(i, j, k));
        hi = std::max<double>(hi, v.at(i, j, k));
      }
  const Volume3 out = inpaint_outside_mask(v, slab, {2000, 1e-8});
  for (std::size_t n = 0; n < out.size(); ++n) {
    if (slab[n]) {
      REQUIRE(out[n] == v[n]);
    } else {
      REQUIRE(out[n] >= lo - 1e-6);
      REQUIRE(out[n] <= hi + 1e-6);
    }
  }
  // a boundary that is constant on each face extends to that constant
  Volume3 ramp(d);
  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 0; j < d.ny; ++j)
      for (std::size_t i = 5; i < 10; ++i) ramp.at(i, j, k) = static_cast<float>(0.5 * static_cast<double>(i));
  const Volume3 ext = inpaint_outside_mask(ramp, slab, {2000, 1e-8});
  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 0; j < d.ny; ++j) {
      for (std::size_t i = 0; i < 5; ++i) REQUIRE(ext.at(i, j, k) == doctest::Approx(2.5).epsilon(1e-5));
      for (std::size_t i = 10; i < d.nx; ++i) REQUIRE(ext.at(i, j, k) == doctest::Approx(4.5).epsilon(1e-5));
    }

  CHECK_THROWS_AS(inpaint_outside_mask(v, BinaryMask3(d)), InputError);
  CHECK_THROWS_AS(inpaint_outside_mask(v, BinaryMask3(Dims{2, 2, 2})), GeometryError);
}

TEST_CASE("inverse hamming weight examples") {
  const InverseHammingSpec s{10, 20, 30};
  CHECK(inverse_hamming_weight(0, 0, 0, s) == 0.0);
  CHECK(inverse_hamming_weight(10, 0, 0, s) == doctest::Approx(1.2));
  CHECK(inverse_hamming_weight(0, -20, 0, s) == doctest::Approx(1.2));
  CHECK(inverse_hamming_weight(0, 0, 30, s) == doctest::Approx(1.2));
  CHECK(inverse_hamming_weight(11, 0, 0, s) == 1.0);
  CHECK(inverse_hamming_weight(100, 100, 100, s) == 1.0);
  CHECK(inverse_hamming_weight(5, 0, 0, s) == doctest::Approx(0.6));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-40, 40);
  for (int t = 0; t < 1000; ++t) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const double w = inverse_hamming_weight(a, b, c, s);
    REQUIRE(w == inverse_hamming_weight(-a, b, c, s));
    REQUIRE(w == inverse_hamming_weight(a, -b, c, s));
    REQUIRE(w == inverse_hamming_weight(a, b, -c, s));
    REQUIRE(w >= 0.0);
    REQUIRE(w <= 1.2 + 1e-12);
  }
  CHECK_THROWS_AS((InverseHammingSpec{0, 1, 1}.validate()), ConfigError);
}

TEST_CASE("centered frequency") {
  CHECK(centered_frequency(0, 16) == 0);
  CHECK(centered_frequency(7, 16) == 7);
  CHECK(centered_frequency(8, 16) == -8);
  CHECK(centered_frequency(15, 16) == -1);
  CHECK(centered_frequency(7, 15) == 7);
  CHECK(centered_frequency(8, 15) == -7);
}

TEST_CASE("high-pass: constant input is removed") {
  const Volume3 c({16, 12, 10}, {}, 4.0f);
  const Volume3 out = highpass_inverse_hamming(c, {80, 80, 80});
  CHECK(max_abs(out.data()) < 1e-6 * 4.0);
}

TEST_CASE("high-pass matches a direct DFT, even and odd sizes") {
  std::mt19937_64 rng(4);
  for (const Dims d : {Dims{16, 16, 16}, Dims{9, 8, 7}}) {
    for (const InverseHammingSpec s : {InverseHammingSpec{4, 5, 6}, InverseHammingSpec{80, 80, 80}}) {
      const Volume3 v = oracle::random_volume(rng, d);
      const Volume3 got = highpass_inverse_hamming(v, s);
      const std::vector<double> ref = oracle::direct_dft_highpass(v, s.hx, s.hy, s.hz);
      double err = 0, mag = 0;
      for (std::size_t n = 0; n < ref.size(); ++n) {
        err = std::max(err, std::abs(got[n] - ref[n]));
        mag = std::max(mag, std::abs(ref[n]));
      }
      CHECK(err <= 1e-5 * mag);
    }
  }
}

TEST_CASE("high-pass is linear") {
  std::mt19937_64 rng(6);
  const Dims d{10, 12, 8};
  const InverseHammingSpec s{3, 3, 3};
  const Volume3 a = oracle::random_volume(rng, d), b = oracle::random_volume(rng, d);
  Volume3 ab(d);
  for (std::size_t n = 0; n < ab.size(); ++n) ab[n] = static_cast<float>(2.0 * a[n] - 0.5 * b[n]);
  const Volume3 fa = highpass_inverse_hamming(a, s), fb = highpass_inverse_hamming(b, s),
                fab = highpass_inverse_hamming(ab, s);
  for (std::size_t n = 0; n < ab.size(); ++n) REQUIRE(fab[n] == doctest::Approx(2.0 * fa[n] - 0.5 * fb[n]).epsilon(1e-5));
}

TEST_CASE("high-pass commutes with mirroring (even weight)") {
  std::mt19937_64 rng(8);
  const Dims d{11, 10, 9};
  const InverseHammingSpec s{3, 4, 2};
  const Volume3 v = oracle::random_volume(rng, d);
  Volume3 mirrored(d);
  // circular mirror x -> -x mod n
  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 0; j < d.ny; ++j)
      for (std::size_t i = 0; i < d.nx; ++i) mirrored.at((d.nx - i) % d.nx, j, k) = v.at(i, j, k);
  const Volume3 fv = highpass_inverse_hamming(v, s), fm = highpass_inverse_hamming(mirrored, s);
  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 0; j < d.ny; ++j)
      for (std::size_t i = 0; i < d.nx; ++i)
        REQUIRE(fm.at((d.nx - i) % d.nx, j, k) == doctest::Approx(fv.at(i, j, k)).epsilon(1e-5).scale(1.0));
}
