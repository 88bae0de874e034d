#include "vseg/hessian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "vseg/kernels.hpp"
#include "vseg/parallel.hpp"

namespace vseg {

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("Gaussian sigma must be positive");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(2 * r + 1);
  for (int t = -r; t <= r; ++t) w[t + r] = std::exp(-0.5 * t * t / (sigma * sigma));
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
  return w;
}

std::vector<double> smooth_to_double(std::span<const float> data, const Dims& dims, double sigma) {
  const auto w = gaussian_kernel(sigma);
  std::vector<double> a(data.begin(), data.end());
  std::vector<double> b(a.size());
  const auto& kern = kernels::active();
  kern.convolve_axis(a.data(), b.data(), dims, 0, w);
  if (dims.ny > 1) {
    kern.convolve_axis(b.data(), a.data(), dims, 1, w);
  } else {
    std::swap(a, b);
  }
  if (dims.nz > 1) {
    kern.convolve_axis(a.data(), b.data(), dims, 2, w);
    return b;
  }
  return a;
}

Volume3 gaussian_smooth(const Volume3& volume, double sigma) {
  const auto s = smooth_to_double(volume.data(), volume.dims(), sigma);
  Volume3 out(volume.dims(), volume.spacing());
  out.header() = volume.header();
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = static_cast<float>(s[i]);
  return out;
}

double Sym3::frobenius() const {
  return std::sqrt(xx * xx + yy * yy + zz * zz + 2.0 * (xy * xy + xz * xz + yz * yz));
}

Sym3 hessian_at(const double* f, const Dims& d, std::size_t i, std::size_t j, std::size_t k, double sigma2) {
  const std::size_t im = i > 0 ? i - 1 : 0, ip = i + 1 < d.nx ? i + 1 : i;
  const std::size_t jm = j > 0 ? j - 1 : 0, jp = j + 1 < d.ny ? j + 1 : j;
  const std::size_t km = k > 0 ? k - 1 : 0, kp = k + 1 < d.nz ? k + 1 : k;
  auto at = [&](std::size_t a, std::size_t b, std::size_t c) { return f[lin(a, b, c, d)]; };
  const double c0 = at(i, j, k);
  Sym3 h;
  h.xx = (at(ip, j, k) - 2.0 * c0 + at(im, j, k)) * sigma2;
  h.yy = (at(i, jp, k) - 2.0 * c0 + at(i, jm, k)) * sigma2;
  h.zz = (at(i, j, kp) - 2.0 * c0 + at(i, j, km)) * sigma2;
  h.xy = 0.25 * (at(ip, jp, k) - at(ip, jm, k) - at(im, jp, k) + at(im, jm, k)) * sigma2;
  h.xz = 0.25 * (at(ip, j, kp) - at(ip, j, km) - at(im, j, kp) + at(im, j, km)) * sigma2;
  h.yz = 0.25 * (at(i, jp, kp) - at(i, jp, km) - at(i, jm, kp) + at(i, jm, km)) * sigma2;
  return h;
}

HessianVolumes hessian_at_scale(const Volume3& volume, double sigma) {
  const Dims& d = volume.dims();
  const auto s = smooth_to_double(volume.data(), d, sigma);
  HessianVolumes hv;
  hv.dims = d;
  const std::size_t n = d.count();
  for (auto* v : {&hv.xx, &hv.yy, &hv.zz, &hv.xy, &hv.xz, &hv.yz}) v->resize(n);
  const double s2 = sigma * sigma;
  parallel_for(d.nz, [&](std::size_t kb, std::size_t ke) {
    for (std::size_t k = kb; k < ke; ++k)
      for (std::size_t j = 0; j < d.ny; ++j)
        for (std::size_t i = 0; i < d.nx; ++i) {
          const std::size_t idx = lin(i, j, k, d);
          const Sym3 h = hessian_at(s.data(), d, i, j, k, s2);
          hv.xx[idx] = h.xx;
          hv.yy[idx] = h.yy;
          hv.zz[idx] = h.zz;
          hv.xy[idx] = h.xy;
          hv.xz[idx] = h.xz;
          hv.yz[idx] = h.yz;
        }
  });
  return hv;
}

EigenSystem eig_sym3(const Sym3& h) {
  Eigen::Matrix3d m;
  m << h.xx, h.xy, h.xz, h.xy, h.yy, h.yz, h.xz, h.yz, h.zz;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m, Eigen::ComputeEigenvectors);
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(vals[a]) < std::abs(vals[b]); });
  EigenSystem e;
  e.lambda1 = vals[order[0]];
  e.lambda2 = vals[order[1]];
  e.lambda3 = vals[order[2]];
  for (int n = 0; n < 3; ++n) {
    const auto col = vecs.col(order[n]).normalized();
    e.vectors[n] = {col[0], col[1], col[2]};
  }
  return e;
}

EigenSystem2 eig_sym2(double xx, double yy, double xy) {
  const double mean = 0.5 * (xx + yy);
  const double half = 0.5 * (xx - yy);
  const double rad = std::hypot(half, xy);
  double a = mean - rad, b = mean + rad;
  if (std::abs(a) > std::abs(b)) std::swap(a, b);
  EigenSystem2 e;
  e.mu1 = a;
  e.mu2 = b;
  // (H - a I) v = 0: pick the better-conditioned row.
  double vx, vy;
  const double r1 = std::hypot(xx - a, xy), r2 = std::hypot(xy, yy - a);
  if (r1 >= r2 && r1 > 0.0) {
    vx = -xy;
    vy = xx - a;
  } else if (r2 > 0.0) {
    vx = yy - a;
    vy = -xy;
  } else {
    vx = 1.0;
    vy = 0.0;
  }
  const double norm = std::hypot(vx, vy);
  e.v1 = {vx / norm, vy / norm};
  return e;
}

}  // namespace vseg
