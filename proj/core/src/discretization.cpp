#include "l2flow/discretization.hpp"

#include <array>
#include <cmath>

#include "l2flow/error.hpp"

namespace l2flow {
namespace {

// Centered differences on the staggered polar grid with reflected ghosts
// f_{-1} = f_0 and f_N = f_{N-1}.
double ghost(std::span<const double> f, int j) {
  const int n = static_cast<int>(f.size());
  if (j < 0) return f[0];
  if (j >= n) return f[n - 1];
  return f[j];
}

std::vector<double> sphere_d1(const Background& bg, std::span<const double> f) {
  const int n = bg.ntheta();
  const double h = bg.dtheta();
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    out[j] = (ghost(f, j + 1) - ghost(f, j - 1)) / (2.0 * h);
  }
  return out;
}

std::vector<double> sphere_d2(const Background& bg, std::span<const double> f) {
  const int n = bg.ntheta();
  const double h2 = bg.dtheta() * bg.dtheta();
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    out[j] = (ghost(f, j + 1) - 2.0 * f[j] + ghost(f, j - 1)) / h2;
  }
  return out;
}

// Tridiagonal flux-form Laplacian on the sphere: row j is
// (lower_j, diag_j, upper_j) acting on (f_{j-1}, f_j, f_{j+1}).
struct SphereLaplacianRows {
  std::vector<double> lower, diag, upper;
};

SphereLaplacianRows sphere_laplacian_rows(const Background& bg) {
  const int n = bg.ntheta();
  const double h = bg.dtheta();
  const auto faces = bg.sin_faces();
  const auto zones = bg.zone_areas();
  SphereLaplacianRows rows{std::vector<double>(n), std::vector<double>(n),
                           std::vector<double>(n)};
  for (int j = 0; j < n; ++j) {
    const double scale = 1.0 / (h * zones[j]);
    rows.lower[j] = faces[j] * scale;
    rows.upper[j] = faces[j + 1] * scale;
    rows.diag[j] = -(faces[j] + faces[j + 1]) * scale;
  }
  return rows;
}

std::vector<double> sphere_laplacian(const Background& bg,
                                     std::span<const double> f) {
  const int n = bg.ntheta();
  const double h = bg.dtheta();
  const auto faces = bg.sin_faces();
  const auto zones = bg.zone_areas();
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    const double up = j + 1 < n ? faces[j + 1] * (f[j + 1] - f[j]) : 0.0;
    const double down = j > 0 ? faces[j] * (f[j] - f[j - 1]) : 0.0;
    out[j] = (up - down) / (h * zones[j]);
  }
  return out;
}

// Gaussian elimination for a pentadiagonal system, band[j][c] holding the
// entry in column j + c - 2. No pivoting: the matrices solved here are
// diagonally similar to symmetric positive definite ones.
std::vector<double> solve_pentadiagonal(std::vector<std::array<double, 5>> band,
                                        std::vector<double> rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int k = 0; k < n; ++k) {
    const double pivot = band[k][2];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw Error("singular pentadiagonal system");
    }
    for (int r = k + 1; r <= std::min(k + 2, n - 1); ++r) {
      const int offset = k - r + 2;  // column k within row r
      const double factor = band[r][offset] / pivot;
      if (factor == 0.0) continue;
      for (int c = 0; c < 3; ++c) {
        // row k columns k..k+2 map to row r offsets offset..offset+2
        if (offset + c <= 4) band[r][offset + c] -= factor * band[k][2 + c];
      }
      rhs[r] -= factor * rhs[k];
    }
  }
  std::vector<double> x(n);
  for (int k = n - 1; k >= 0; --k) {
    double acc = rhs[k];
    for (int c = 1; c <= 2 && k + c < n; ++c) acc -= band[k][2 + c] * x[k + c];
    x[k] = acc / band[k][2];
  }
  return x;
}

}  // namespace

ScalarField laplacian0(const ScalarField& f) {
  const Background& bg = f.background();
  if (bg.is_torus()) return f.with_values(bg.spectral().laplacian(f.values()));
  return f.with_values(sphere_laplacian(bg, f.values()));
}

FrameVector gradient0(const ScalarField& f) {
  const Background& bg = f.background();
  if (bg.is_torus()) {
    const auto& sp = bg.spectral();
    const auto spec = sp.forward(f.values());
    return {f.with_values(sp.inverse(sp.differentiate(spec, 1, 0))),
            f.with_values(sp.inverse(sp.differentiate(spec, 0, 1)))};
  }
  return {f.with_values(sphere_d1(bg, f.values())),
          ScalarField::constant(f.background_ptr(), 0.0)};
}

ScalarField gradient0_squared(const ScalarField& f) {
  const FrameVector g = gradient0(f);
  return g.c1 * g.c1 + g.c2 * g.c2;
}

double integrate0(const ScalarField& f) {
  const auto w = f.background().weights();
  // Fixed summation order keeps runs bit-reproducible.
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) acc += w[k] * f[k];
  return acc;
}

BackgroundDerivatives derivatives0(const ScalarField& f) {
  const Background& bg = f.background();
  if (bg.is_torus()) {
    const auto& sp = bg.spectral();
    const auto spec = sp.forward(f.values());
    auto d = [&](int ox, int oy) {
      return f.with_values(sp.inverse(sp.differentiate(spec, ox, oy)));
    };
    ScalarField fxx = d(2, 0);
    ScalarField fyy = d(0, 2);
    ScalarField lap = fxx + fyy;
    return {{d(1, 0), d(0, 1)}, {fxx, d(1, 1), fyy}, std::move(lap)};
  }
  ScalarField d1 = f.with_values(sphere_d1(bg, f.values()));
  ScalarField d2 = f.with_values(sphere_d2(bg, f.values()));
  std::vector<double> cot_term(f.size());
  const auto cot = bg.cot_theta();
  for (std::size_t j = 0; j < f.size(); ++j) cot_term[j] = cot[j] * d1[j];
  ScalarField zero = ScalarField::constant(f.background_ptr(), 0.0);
  return {{d1, zero},
          {d2, zero, f.with_values(std::move(cot_term))},
          laplacian0(f)};
}

ScalarField solve_shifted_biharmonic(const ScalarField& f, double tau) {
  if (!(tau >= 0.0)) throw Error("biharmonic shift must be non-negative");
  const Background& bg = f.background();
  if (tau == 0.0) return f;
  if (bg.is_torus()) {
    const auto& sp = bg.spectral();
    auto spec = sp.forward(f.values());
    const int nyh = sp.ny_half();
    for (int i = 0; i < sp.nx(); ++i) {
      for (int j = 0; j < nyh; ++j) {
        const double k2 = sp.kx(i) * sp.kx(i) + sp.ky(j) * sp.ky(j);
        spec[static_cast<std::size_t>(i) * nyh + j] /= 1.0 + tau * k2 * k2;
      }
    }
    return f.with_values(sp.inverse(std::move(spec)));
  }
  const int n = bg.ntheta();
  const auto rows = sphere_laplacian_rows(bg);
  const auto& l = rows.lower;
  const auto& d = rows.diag;
  const auto& u = rows.upper;
  auto at = [n](const std::vector<double>& v, int j) {
    return (j >= 0 && j < n) ? v[j] : 0.0;
  };
  std::vector<std::array<double, 5>> band(n);
  for (int j = 0; j < n; ++j) {
    band[j][0] = tau * l[j] * at(l, j - 1);
    band[j][1] = tau * (l[j] * at(d, j - 1) + d[j] * l[j]);
    band[j][2] = 1.0 + tau * (l[j] * at(u, j - 1) + d[j] * d[j] +
                              u[j] * at(l, j + 1));
    band[j][3] = tau * (d[j] * u[j] + u[j] * at(d, j + 1));
    band[j][4] = tau * u[j] * at(u, j + 1);
  }
  return f.with_values(solve_pentadiagonal(std::move(band), f.data()));
}

ScalarField dealias(const ScalarField& f) {
  const Background& bg = f.background();
  if (!bg.is_torus()) return f;
  const auto& sp = bg.spectral();
  auto spec = sp.forward(f.values());
  sp.dealias(spec);
  return f.with_values(sp.inverse(std::move(spec)));
}

}  // namespace l2flow
