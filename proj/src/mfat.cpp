#include "vseg/mfat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vseg/hessian.hpp"
#include "vseg/parallel.hpp"

namespace vseg {

void MfatConfig::validate() const {
  if (sigmas.empty()) throw ConfigError("MFAT needs at least one scale");
  if (sigmas.size() > 255) throw ConfigError("MFAT supports at most 255 scales");
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    if (!(sigmas[s] > 0.0)) throw ConfigError("MFAT scales must be positive");
    if (s > 0 && !(sigmas[s] > sigmas[s - 1])) throw ConfigError("MFAT scales must be strictly increasing");
  }
  if (!(tau_rho > 0.0 && tau_rho <= 1.0)) throw ConfigError("tau_rho must lie in (0, 1]");
  if (!(tau_nu > 0.0 && tau_nu <= 1.0)) throw ConfigError("tau_nu must lie in (0, 1]");
  if (!(delta > 0.0)) throw ConfigError("MFAT step size delta must be positive");
}

double regularize_eigen(double lambda3, double min_lambda3, double tau) {
  const double floor = tau * min_lambda3;
  if (lambda3 < floor) return lambda3;
  if (lambda3 < 0.0) return floor;
  return 0.0;
}

double fat_vesselness(double lambda1, double lambda2, double lambda3, double lambda_rho, double lambda_nu) {
  const double denom = lambda2 * lambda2 + lambda_rho * lambda_rho + lambda_nu * lambda_nu;
  if (denom == 0.0) return 0.0;
  const double mean = (lambda1 + lambda2 + lambda3) / 3.0;
  const double a = lambda2 - mean, b = lambda_rho - mean, c = lambda_nu - mean;
  return std::sqrt(1.5 * (a * a + b * b + c * c) / denom);
}

double r_lambda(double lambda2, double lambda_rho, double v_fat, double max_gap) {
  const double gap = lambda_rho - lambda2;
  if (lambda_rho > gap || lambda_rho >= 0.0 || lambda2 >= 0.0) return 0.0;
  if (std::abs(gap - max_gap) <= 1e-12 * std::abs(max_gap)) return 1.0;
  return 1.0 - v_fat;
}

namespace {

struct ScaleEigen {
  std::vector<float> l1, l2, l3;
};

bool in_domain(std::span<const std::uint8_t> domain, std::size_t idx) { return domain.empty() || domain[idx] != 0; }

// Clamped R_lambda for every sample of one scale; fills the R-side fields of `chk`.
void r_lambda_field(const ScaleEigen& e, std::span<const std::uint8_t> domain, const MfatConfig& cfg,
                    std::vector<float>& r, MfatScaleCheck& chk) {
  const std::size_t n = e.l1.size();
  double min_l3 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (in_domain(domain, i)) min_l3 = std::min(min_l3, static_cast<double>(e.l3[i]));
  if (!std::isfinite(min_l3)) min_l3 = 0.0;

  double max_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_domain(domain, i)) continue;
    const double rho = regularize_eigen(e.l3[i], min_l3, cfg.tau_rho);
    max_gap = std::max(max_gap, rho - static_cast<double>(e.l2[i]));
  }

  r.resize(n);
  double rmin = std::numeric_limits<double>::infinity(), rmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double l1 = e.l1[i], l2 = e.l2[i], l3 = e.l3[i];
    const double rho = regularize_eigen(l3, min_l3, cfg.tau_rho);
    const double nu = regularize_eigen(l3, min_l3, cfg.tau_nu);
    const double raw = r_lambda(l2, rho, fat_vesselness(l1, l2, l3, rho, nu), max_gap);
    rmin = std::min(rmin, raw);
    rmax = std::max(rmax, raw);
    r[i] = static_cast<float>(std::clamp(raw, 0.0, 1.0));
  }
  chk.min_r_unclamped = rmin;
  chk.max_r_unclamped = rmax;
}

// v <- R at the first scale; afterwards v <- max(v + delta * tanh(R - delta), R).
// on_win(i) fires where this scale has the largest R so far (ties keep the earlier scale).
template <typename OnWin>
void accumulate_scale(std::size_t scale, const std::vector<float>& r, std::vector<float>& v, std::vector<float>& best_r,
                      const MfatConfig& cfg, MfatScaleCheck& chk, OnWin&& on_win) {
  double min_gap = std::numeric_limits<double>::infinity();
  double vmin = std::numeric_limits<double>::infinity(), vmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ri = r[i];
    double vi;
    if (scale == 0) {
      vi = ri;
    } else {
      vi = v[i] + cfg.delta * std::tanh(ri - cfg.delta);
      vi = std::max(vi, ri);
    }
    v[i] = static_cast<float>(vi);
    min_gap = std::min(min_gap, static_cast<double>(v[i]) - ri);
    vmin = std::min(vmin, static_cast<double>(v[i]));
    vmax = std::max(vmax, static_cast<double>(v[i]));
    if (scale == 0 || r[i] > best_r[i]) {
      best_r[i] = r[i];
      on_win(i);
    }
  }
  chk.min_v_minus_r = r.empty() ? 0.0 : min_gap;
  chk.min_v = r.empty() ? 0.0 : vmin;
  chk.max_v = r.empty() ? 0.0 : vmax;
}

}  // namespace

VesselnessResult mfat(const Volume3& volume, const MfatConfig& cfg, const MfatOptions& opts) {
  cfg.validate();
  const Dims& d = volume.dims();
  const std::size_t n = d.count();
  std::span<const std::uint8_t> domain;
  if (opts.reduction_domain != nullptr) {
    require_same_grid(volume.geometry(), opts.reduction_domain->geometry(), "MFAT reduction domain");
    domain = opts.reduction_domain->data();
  }

  VesselnessResult res;
  res.v1.assign(n, {1.0f, 0.0f, 0.0f});
  res.lambda2.assign(n, 0.0f);
  res.lambda3.assign(n, 0.0f);
  res.winning_scale.assign(n, 0);
  std::vector<float> v(n, 0.0f), best_r(n, 0.0f), r;
  ScaleEigen e;
  std::vector<std::array<float, 3>> vec(n);
  e.l1.resize(n);
  e.l2.resize(n);
  e.l3.resize(n);
  if (opts.checks) opts.checks->clear();

  for (std::size_t s = 0; s < cfg.sigmas.size(); ++s) {
    const double sigma = cfg.sigmas[s];
    {
      const auto smoothed = smooth_to_double(volume.data(), d, sigma);
      const double s2 = sigma * sigma;
      parallel_for(d.nz, [&](std::size_t kb, std::size_t ke) {
        for (std::size_t k = kb; k < ke; ++k)
          for (std::size_t j = 0; j < d.ny; ++j)
            for (std::size_t i = 0; i < d.nx; ++i) {
              const std::size_t idx = lin(i, j, k, d);
              const EigenSystem es = eig_sym3(hessian_at(smoothed.data(), d, i, j, k, s2));
              e.l1[idx] = static_cast<float>(es.lambda1);
              e.l2[idx] = static_cast<float>(es.lambda2);
              e.l3[idx] = static_cast<float>(es.lambda3);
              const auto& u = es.v1();
              vec[idx] = {static_cast<float>(u[0]), static_cast<float>(u[1]), static_cast<float>(u[2])};
            }
      });
    }
    MfatScaleCheck chk;
    chk.sigma = sigma;
    r_lambda_field(e, domain, cfg, r, chk);
    accumulate_scale(s, r, v, best_r, cfg, chk, [&](std::size_t i) {
      res.v1[i] = vec[i];
      res.lambda2[i] = e.l2[i];
      res.lambda3[i] = e.l3[i];
      res.winning_scale[i] = static_cast<std::uint8_t>(s);
    });
    if (opts.checks) opts.checks->push_back(chk);
  }

  res.v_mfat = Volume3(d, volume.spacing(), std::move(v));
  res.v_mfat.header() = volume.header();
  res.ani = Volume3(d, volume.spacing());
  res.ani.header() = volume.header();
  for (std::size_t i = 0; i < n; ++i)
    res.ani[i] = static_cast<float>(std::abs(static_cast<double>(res.lambda2[i]) * res.lambda3[i]));
  return res;
}

Vesselness2D mfat_2d(const Image2& image, const MfatConfig& cfg, std::span<const std::uint8_t> domain,
                     std::vector<MfatScaleCheck>* checks) {
  cfg.validate();
  if (!domain.empty() && domain.size() != image.size()) throw GeometryError("MFAT 2D domain size mismatch");
  const Dims d{image.nx, image.ny, 1};
  const std::size_t n = image.size();
  Vesselness2D res;
  res.v1.assign(n, {1.0f, 0.0f});
  res.lambda2.assign(n, 0.0f);
  res.lambda3.assign(n, 0.0f);
  std::vector<float> v(n, 0.0f), best_r(n, 0.0f), r;
  std::vector<std::array<float, 2>> vec(n);
  ScaleEigen e;
  e.l1.resize(n);
  e.l2.resize(n);
  e.l3.resize(n);
  if (checks) checks->clear();

  for (std::size_t s = 0; s < cfg.sigmas.size(); ++s) {
    const double sigma = cfg.sigmas[s];
    const auto f = smooth_to_double(image.data, d, sigma);
    const double s2 = sigma * sigma;
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        const Sym3 h = hessian_at(f.data(), d, x, y, 0, s2);
        const EigenSystem2 es = eig_sym2(h.xx, h.yy, h.xy);
        const std::size_t idx = x + d.nx * y;
        e.l1[idx] = static_cast<float>(es.mu1);
        e.l2[idx] = static_cast<float>(es.mu2);
        e.l3[idx] = static_cast<float>(es.mu2);
        vec[idx] = {static_cast<float>(es.v1[0]), static_cast<float>(es.v1[1])};
      }
    MfatScaleCheck chk;
    chk.sigma = sigma;
    r_lambda_field(e, domain, cfg, r, chk);
    accumulate_scale(s, r, v, best_r, cfg, chk, [&](std::size_t i) {
      res.v1[i] = vec[i];
      res.lambda2[i] = e.l2[i];
      res.lambda3[i] = e.l3[i];
    });
    if (checks) checks->push_back(chk);
  }
  res.v_mfat.nx = image.nx;
  res.v_mfat.ny = image.ny;
  res.v_mfat.data = std::move(v);
  return res;
}

}  // namespace vseg
