#include <cmath>
#include <cstring>

#include "doctest.h"
#include "vseg/components.hpp"
#include "vseg/hessian.hpp"
#include "vseg/phantom.hpp"

using namespace vseg;

namespace {

bool same_bytes(const Volume3& a, const Volume3& b) {
  return a.dims() == b.dims() && std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(float)) == 0;
}

}  // namespace

TEST_CASE("straight tube mask volume is close to the cylinder") {
  const Dims d{96, 24, 24};
  Volume3 v(d);
  BinaryMask3 m(d);
  const double r = 3.0, len = 80.0;
  generate_tube({{8, 12, 12}, {8 + len, 12, 12}}, r, 1.0, v, m);
  const double cyl = M_PI * r * r * len;
  MESSAGE("tube voxels " << m.count() << ", cylinder " << cyl);
  CHECK(std::abs(static_cast<double>(m.count()) - cyl) <= 0.15 * cyl);
  CHECK(v.at(40, 12, 12) == 1.0f);
  // outside the rim the profile decays
  CHECK(v.at(40, 12, 15) == 1.0f);
  CHECK(v.at(40, 12, 16) > 0.0f);
  CHECK(v.at(40, 12, 16) < 1.0f);
  CHECK(v.at(40, 12, 17) < v.at(40, 12, 16));
}

TEST_CASE("tube edge cases") {
  const Dims d{20, 20, 20};
  Volume3 v(d);
  BinaryMask3 m(d);
  generate_tube({{5, 5, 5}, {5, 5, 5}}, 2.0, 1.0, v, m);
  generate_tube({{5, 5, 5}}, 2.0, 1.0, v, m);
  CHECK(m.empty());
  for (std::size_t n = 0; n < v.size(); ++n) REQUIRE(v[n] == 0.0f);

  generate_tube({{2, 4, 4}, {17, 4, 4}}, 1.5, 1.0, v, m);
  generate_tube({{2, 14, 14}, {17, 14, 14}}, 1.5, 1.0, v, m);
  CHECK(connected_components(m).count() == 2);

  CHECK_THROWS_AS(generate_tube({{2, 4, 4}, {25, 4, 4}}, 1.0, 1.0, v, m), ConfigError);
  CHECK_THROWS_AS(generate_tube({{2, 4, 4}, {5, 4, 4}}, 0.0, 1.0, v, m), ConfigError);
}

TEST_CASE("blob mask volume, zero intensity, additivity") {
  const Dims d{24, 24, 24};
  Volume3 v(d);
  BinaryMask3 m(d);
  generate_blob({12, 12, 12}, 5.0, 1.0, v, m);
  const double sphere = 4.0 / 3.0 * M_PI * 125.0;
  CHECK(std::abs(static_cast<double>(m.count()) - sphere) <= 0.15 * sphere);
  CHECK(v.at(12, 12, 12) == 1.0f);

  Volume3 z(d);
  BinaryMask3 mz(d);
  generate_blob({12, 12, 12}, 5.0, 0.0, z, mz);
  for (std::size_t n = 0; n < z.size(); ++n) REQUIRE(z[n] == 0.0f);
  CHECK(mz == m);

  Volume3 a(d), b(d);
  BinaryMask3 ma(d), mb(d);
  generate_blob({10, 12, 12}, 4.0, 1.0, a, ma);
  generate_blob({10, 12, 12}, 4.0, 1.0, b, mb);
  generate_blob({14, 12, 12}, 4.0, 0.5, b, mb);
  Volume3 c(d);
  BinaryMask3 mc(d);
  generate_blob({14, 12, 12}, 4.0, 0.5, c, mc);
  for (std::size_t n = 0; n < b.size(); ++n) REQUIRE(b[n] == doctest::Approx(a[n] + c[n]).epsilon(1e-6));

  CHECK_THROWS_AS(generate_blob({30, 12, 12}, 4.0, 1.0, v, m), ConfigError);
}

TEST_CASE("scene: empty spec is noise only") {
  SceneSpec s;
  s.dims = {16, 16, 16};
  s.background = {0.3, 0.2, 0.2};
  const PhantomScene sc = generate_scene(s, 1);
  CHECK(sc.gt_vessels.empty());
  CHECK(sc.gt_blobs.empty());
  CHECK_FALSE(sc.brain.empty());
  for (std::size_t n = 0; n < sc.brain.size(); ++n)
    REQUIRE(sc.r2star_like[n] == (sc.brain[n] ? 0.3f : 0.0f));
}

TEST_CASE("scene determinism and seed dependence") {
  SceneSpec s = scaled_acceptance_scene({96, 96, 96});
  const PhantomScene a = generate_scene(s, 7), b = generate_scene(s, 7), c = generate_scene(s, 8);
  CHECK(same_bytes(a.r2star_like, b.r2star_like));
  CHECK(same_bytes(a.chi_para_like, b.chi_para_like));
  CHECK(same_bytes(a.chi_dia_like, b.chi_dia_like));
  CHECK(a.gt_vessels == b.gt_vessels);

  CHECK(a.gt_vessels == c.gt_vessels);
  CHECK(a.gt_blobs == c.gt_blobs);
  CHECK(a.brain == c.brain);
  CHECK_FALSE(same_bytes(a.r2star_like, c.r2star_like));
  // the difference is noise: zero mean, std about sqrt(2) * 2% of the unit tube intensity
  double sum = 0, ss = 0;
  std::size_t n = 0;
  for (std::size_t v = 0; v < a.brain.size(); ++v)
    if (a.brain[v]) {
      const double e = static_cast<double>(a.r2star_like[v]) - c.r2star_like[v];
      sum += e;
      ss += e * e;
      ++n;
    }
  const double mean = sum / static_cast<double>(n), sd = std::sqrt(ss / static_cast<double>(n) - mean * mean);
  CHECK(std::abs(mean) < 1e-3);
  CHECK(sd == doctest::Approx(0.02 * std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("acceptance scene: disjoint ground truths, validation") {
  const PhantomScene sc = generate_scene(default_acceptance_scene(), 1234);
  CHECK(sc.gt_vessels.count() > 0);
  CHECK(sc.gt_blobs.count() > 0);
  CHECK(mask_intersection(sc.gt_vessels, sc.gt_blobs).empty());
  CHECK(connected_components(sc.gt_blobs).count() == 2);

  SceneSpec bad = default_acceptance_scene();
  bad.tubes[0].path[1] = {200, 10, 10};
  CHECK_THROWS_AS(generate_scene(bad, 1), ConfigError);
  bad = default_acceptance_scene();
  bad.blobs[0].center = {3, 3, 3};
  CHECK_THROWS_AS(generate_scene(bad, 1), ConfigError);
  bad = default_acceptance_scene();
  bad.noise_fraction = -1;
  CHECK_THROWS_AS(generate_scene(bad, 1), ConfigError);
}

TEST_CASE("tubes are more anisotropic than blob interiors") {
  const SceneSpec spec = default_acceptance_scene();
  const PhantomScene sc = generate_scene(spec, 1234);
  const HessianVolumes h = hessian_at_scale(sc.r2star_like, 1.0);
  BinaryMask3 interior(sc.brain.dims());
  const Dims& d = sc.brain.dims();
  for (const auto& b : spec.blobs)
    for (std::size_t k = 0; k < d.nz; ++k)
      for (std::size_t j = 0; j < d.ny; ++j)
        for (std::size_t i = 0; i < d.nx; ++i) {
          const double x = static_cast<double>(i) - b.center[0], y = static_cast<double>(j) - b.center[1],
                       z = static_cast<double>(k) - b.center[2];
          if (std::sqrt(x * x + y * y + z * z) <= b.radius_mm / 2) interior.set(i, j, k);
        }
  auto mean_ani = [&](const BinaryMask3& m) {
    double s = 0;
    for (std::size_t n = 0; n < m.size(); ++n)
      if (m[n]) {
        const EigenSystem e = eig_sym3(h.at(n));
        s += std::abs(e.lambda2 * e.lambda3);
      }
    return s / static_cast<double>(m.count());
  };
  const double tube = mean_ani(sc.gt_vessels), blob = mean_ani(interior);
  MESSAGE("mean |l2 l3|: tubes " << tube << ", blob interiors " << blob);
  CHECK(tube > blob);
}
