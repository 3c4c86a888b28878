#include "l2flow/tensor_geometry.hpp"

#include <array>
#include <cmath>
#include <string>

#include "l2flow/discretization.hpp"
#include "l2flow/error.hpp"

namespace l2flow {
namespace {

using Comp = std::vector<double>;

class Derivative {
 public:
  Derivative(const Background& bg, DerivativeScheme scheme)
      : bg_(bg), scheme_(scheme) {}

  Comp operator()(const Comp& f, int dir) const {
    if (scheme_ == DerivativeScheme::Spectral) {
      return bg_.spectral().derivative(f, dir == 0 ? 1 : 0, dir == 1 ? 1 : 0);
    }
    const int nx = bg_.nx();
    const int ny = bg_.ny();
    const double inv2h = 1.0 / (2.0 * (dir == 0 ? bg_.hx() : bg_.hy()));
    Comp out(f.size());
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) * ny + j;
        std::size_t plus, minus;
        if (dir == 0) {
          plus = static_cast<std::size_t>((i + 1) % nx) * ny + j;
          minus = static_cast<std::size_t>((i + nx - 1) % nx) * ny + j;
        } else {
          plus = static_cast<std::size_t>(i) * ny + (j + 1) % ny;
          minus = static_cast<std::size_t>(i) * ny + (j + ny - 1) % ny;
        }
        out[k] = (f[plus] - f[minus]) * inv2h;
      }
    }
    return out;
  }

 private:
  const Background& bg_;
  DerivativeScheme scheme_;
};

using Mat = std::array<std::array<Comp, 2>, 2>;
using Rank3 = std::array<Mat, 2>;

Mat from_sym(const SymTensorField& a) {
  return {{{a.c11.data(), a.c12.data()}, {a.c12.data(), a.c22.data()}}};
}

SymTensorField to_sym(const BackgroundPtr& bg, const Mat& m) {
  const std::size_t n = m[0][0].size();
  Comp off(n);
  for (std::size_t p = 0; p < n; ++p) off[p] = 0.5 * (m[0][1][p] + m[1][0][p]);
  return {ScalarField(bg, m[0][0]), ScalarField(bg, std::move(off)),
          ScalarField(bg, m[1][1])};
}

Mat zeros_mat(std::size_t n) {
  Mat m;
  for (auto& row : m)
    for (auto& c : row) c.assign(n, 0.0);
  return m;
}

Rank3 zeros_rank3(std::size_t n) {
  Rank3 t;
  for (auto& m : t) m = zeros_mat(n);
  return t;
}

// Metric, inverse and Christoffel symbols gamma[k][i][j] = Gamma^k_ij.
struct Connection {
  std::size_t n = 0;
  Mat g;
  Mat ginv;
  Comp sqrt_det;
  Rank3 gamma;
};

Connection metric_only(const MetricField& metric) {
  Connection c;
  c.g = from_sym(metric.components());
  c.n = c.g[0][0].size();
  const std::size_t n = c.n;
  c.ginv = zeros_mat(n);
  c.sqrt_det.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double det = c.g[0][0][p] * c.g[1][1][p] - c.g[0][1][p] * c.g[0][1][p];
    c.ginv[0][0][p] = c.g[1][1][p] / det;
    c.ginv[1][1][p] = c.g[0][0][p] / det;
    c.ginv[0][1][p] = c.ginv[1][0][p] = -c.g[0][1][p] / det;
    c.sqrt_det[p] = std::sqrt(det);
  }
  return c;
}

Connection make_connection(const MetricField& metric, const Derivative& d) {
  Connection c = metric_only(metric);
  const std::size_t n = c.n;
  // dg[l][i][j] = d_l g_ij
  Rank3 dg;
  for (int l = 0; l < 2; ++l) {
    dg[l][0][0] = d(c.g[0][0], l);
    dg[l][0][1] = d(c.g[0][1], l);
    dg[l][1][0] = dg[l][0][1];
    dg[l][1][1] = d(c.g[1][1], l);
  }
  c.gamma = zeros_rank3(n);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l)
          for (std::size_t p = 0; p < n; ++p)
            c.gamma[k][i][j][p] += 0.5 * c.ginv[k][l][p] *
                                   (dg[i][l][j][p] + dg[j][l][i][p] -
                                    dg[l][i][j][p]);
  return c;
}

// Full curvature data in flattened form, plus the connection it came from.
struct Curvature {
  std::vector<Comp> riemann;  // lowered, ((i*2+j)*2+k)*2+l
  Mat ricci;
  Comp scalar;
  Mat check_r;
  Comp norm_sq;
};

int idx4(int i, int j, int k, int l) { return ((i * 2 + j) * 2 + k) * 2 + l; }

Curvature compute_curvature(const Connection& c, const Derivative& d) {
  const std::size_t n = c.n;
  // dgamma[m][l][j][k] = d_m Gamma^l_jk
  std::array<Rank3, 2> dgamma;
  for (int m = 0; m < 2; ++m) {
    dgamma[m] = zeros_rank3(n);
    for (int l = 0; l < 2; ++l) {
      dgamma[m][l][0][0] = d(c.gamma[l][0][0], m);
      dgamma[m][l][0][1] = d(c.gamma[l][0][1], m);
      dgamma[m][l][1][0] = dgamma[m][l][0][1];
      dgamma[m][l][1][1] = d(c.gamma[l][1][1], m);
    }
  }
  // R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
  std::vector<Comp> rup(16, Comp(n, 0.0));  // index ((l*2+i)*2+j)*2+k
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          Comp& r = rup[idx4(l, i, j, k)];
          for (std::size_t p = 0; p < n; ++p) {
            double v = dgamma[i][l][j][k][p] - dgamma[j][l][i][k][p];
            for (int m = 0; m < 2; ++m) {
              v += c.gamma[l][i][m][p] * c.gamma[m][j][k][p] -
                   c.gamma[l][j][m][p] * c.gamma[m][i][k][p];
            }
            r[p] = v;
          }
        }
  Curvature out;
  out.riemann.assign(16, Comp(n, 0.0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          for (int m = 0; m < 2; ++m)
            for (std::size_t p = 0; p < n; ++p)
              out.riemann[idx4(i, j, k, l)][p] +=
                  rup[idx4(m, i, j, k)][p] * c.g[m][l][p];

  out.ricci = zeros_mat(n);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (std::size_t p = 0; p < n; ++p)
          out.ricci[j][k][p] += rup[idx4(i, i, j, k)][p];

  out.scalar.assign(n, 0.0);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      for (std::size_t p = 0; p < n; ++p)
        out.scalar[p] += c.ginv[j][k][p] * out.ricci[j][k][p];

  // R_j^{pqr} with the last three indices raised.
  std::vector<Comp> raised(16, Comp(n, 0.0));
  for (int j = 0; j < 2; ++j)
    for (int p1 = 0; p1 < 2; ++p1)
      for (int q1 = 0; q1 < 2; ++q1)
        for (int r1 = 0; r1 < 2; ++r1)
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int e = 0; e < 2; ++e)
                for (std::size_t p = 0; p < n; ++p)
                  raised[idx4(j, p1, q1, r1)][p] +=
                      c.ginv[p1][a][p] * c.ginv[q1][b][p] * c.ginv[r1][e][p] *
                      out.riemann[idx4(j, a, b, e)][p];

  out.check_r = zeros_mat(n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int e = 0; e < 2; ++e)
            for (std::size_t p = 0; p < n; ++p)
              out.check_r[i][j][p] += out.riemann[idx4(i, a, b, e)][p] *
                                      raised[idx4(j, a, b, e)][p];

  out.norm_sq.assign(n, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < n; ++p)
        out.norm_sq[p] += c.ginv[i][j][p] * out.check_r[i][j][p];
  return out;
}

double quadrature(const Background& bg, const Comp& f, const Comp& density) {
  const auto w = bg.weights();
  double acc = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) acc += w[p] * f[p] * density[p];
  return acc;
}

// Pointwise g^ik g^jl A_ij B_kl.
Comp contract(const Connection& c, const Mat& a, const Mat& b) {
  Comp out(c.n, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          for (std::size_t p = 0; p < c.n; ++p)
            out[p] += c.ginv[i][k][p] * c.ginv[j][l][p] * a[i][j][p] *
                      b[k][l][p];
  return out;
}

}  // namespace

MetricField::MetricField(SymTensorField g) : g_(std::move(g)) {
  const Background& bg = g_.background();
  if (!bg.is_torus()) throw Error("tensor calculus is only defined on the torus");
  require_same_grid(g_.c11, g_.c12);
  require_same_grid(g_.c11, g_.c22);
  const int ny = bg.ny();
  for (std::size_t p = 0; p < g_.c11.size(); ++p) {
    const double a = g_.c11[p];
    const double det = a * g_.c22[p] - g_.c12[p] * g_.c12[p];
    if (!(a > 0.0) || !(det > 0.0)) {
      throw Error("metric not positive definite at grid point (" +
                  std::to_string(p / ny) + "," + std::to_string(p % ny) + ")");
    }
  }
}

ScalarField MetricField::volume_density() const {
  std::vector<double> v(g_.c11.size());
  for (std::size_t p = 0; p < v.size(); ++p) {
    v[p] = std::sqrt(g_.c11[p] * g_.c22[p] - g_.c12[p] * g_.c12[p]);
  }
  return g_.c11.with_values(std::move(v));
}

double MetricField::volume() const { return integrate0(volume_density()); }

CurvatureTensors curvature_tensors(const MetricField& g,
                                   DerivativeScheme scheme) {
  const Derivative d(g.background(), scheme);
  const Connection c = make_connection(g, d);
  Curvature curv = compute_curvature(c, d);
  const BackgroundPtr& bg = g.background_ptr();
  std::vector<ScalarField> riemann;
  riemann.reserve(16);
  for (auto& r : curv.riemann) riemann.emplace_back(bg, std::move(r));
  return CurvatureTensors{std::move(riemann), to_sym(bg, curv.ricci),
                          ScalarField(bg, std::move(curv.scalar)),
                          to_sym(bg, curv.check_r),
                          ScalarField(bg, std::move(curv.norm_sq))};
}

double curvature_identity_defect(const MetricField& g,
                                 const CurvatureTensors& curv) {
  const Mat m = from_sym(g.components());
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const ScalarField& r = curv.R(i, j, k, l);
          for (std::size_t p = 0; p < r.size(); ++p) {
            const double model =
                0.5 * curv.scalar[p] *
                (m[i][l][p] * m[j][k][p] - m[i][k][p] * m[j][l][p]);
            worst = std::max(worst, std::abs(r[p] - model));
          }
        }
  return worst;
}

SymTensorField codifferential_exterior_ricci(const MetricField& g,
                                             DerivativeScheme scheme) {
  const Derivative d(g.background(), scheme);
  const Connection c = make_connection(g, d);
  const Curvature curv = compute_curvature(c, d);
  const std::size_t n = c.n;
  const Mat& r = curv.ricci;

  // nr[k][i][j] = nabla_k r_ij
  Rank3 nr = zeros_rank3(n);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        nr[k][i][j] = d(r[i][j], k);
        for (int m = 0; m < 2; ++m)
          for (std::size_t p = 0; p < n; ++p)
            nr[k][i][j][p] -= c.gamma[m][k][i][p] * r[m][j][p] +
                              c.gamma[m][k][j][p] * r[i][m][p];
      }
  // w[k][i][j] = (dr)_kij = nabla_k r_ij - nabla_i r_kj
  Rank3 w = zeros_rank3(n);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (std::size_t p = 0; p < n; ++p)
          w[k][i][j][p] = nr[k][i][j][p] - nr[i][k][j][p];

  // (delta w)_ij = -2 g^lk nabla_l w_kij
  constexpr double kAdjointFactor = 2.0;
  Mat out = zeros_mat(n);
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Comp nw = d(w[k][i][j], l);
          for (int m = 0; m < 2; ++m)
            for (std::size_t p = 0; p < n; ++p)
              nw[p] -= c.gamma[m][l][k][p] * w[m][i][j][p] +
                       c.gamma[m][l][i][p] * w[k][m][j][p] +
                       c.gamma[m][l][j][p] * w[k][i][m][p];
          for (std::size_t p = 0; p < n; ++p)
            out[i][j][p] -= kAdjointFactor * c.ginv[l][k][p] * nw[p];
        }
  return to_sym(g.background_ptr(), out);
}

SymTensorField grad_F_general(const MetricField& g, DerivativeScheme scheme) {
  const Derivative d(g.background(), scheme);
  const Connection c = make_connection(g, d);
  const Curvature curv = compute_curvature(c, d);
  const SymTensorField ddr = codifferential_exterior_ricci(g, scheme);
  const Mat dd = from_sym(ddr);
  Mat out = zeros_mat(c.n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < c.n; ++p)
        out[i][j][p] = dd[i][j][p] - curv.check_r[i][j][p] +
                       0.25 * curv.norm_sq[p] * c.g[i][j][p];
  return to_sym(g.background_ptr(), out);
}

double energy_F(const MetricField& g, DerivativeScheme scheme) {
  const Derivative d(g.background(), scheme);
  const Connection c = make_connection(g, d);
  const Curvature curv = compute_curvature(c, d);
  Comp s2(c.n);
  for (std::size_t p = 0; p < c.n; ++p) s2[p] = curv.scalar[p] * curv.scalar[p];
  return quadrature(g.background(), s2, c.sqrt_det);
}

double integrate_inner(const MetricField& g, const SymTensorField& a,
                       const SymTensorField& b) {
  const Connection c = metric_only(g);
  return quadrature(g.background(), contract(c, from_sym(a), from_sym(b)),
                    c.sqrt_det);
}

FrameVector divergence(const MetricField& g, const SymTensorField& a,
                       DerivativeScheme scheme) {
  const Derivative d(g.background(), scheme);
  const Connection c = make_connection(g, d);
  const Mat t = from_sym(a);
  std::array<Comp, 2> out{Comp(c.n, 0.0), Comp(c.n, 0.0)};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        Comp nt = d(t[i][j], k);
        for (int m = 0; m < 2; ++m)
          for (std::size_t p = 0; p < c.n; ++p)
            nt[p] -= c.gamma[m][k][i][p] * t[m][j][p] +
                     c.gamma[m][k][j][p] * t[i][m][p];
        for (std::size_t p = 0; p < c.n; ++p)
          out[j][p] += c.ginv[i][k][p] * nt[p];
      }
  const BackgroundPtr& bg = g.background_ptr();
  return {ScalarField(bg, std::move(out[0])), ScalarField(bg, std::move(out[1]))};
}

SymTensorField lie_derivative(const MetricField& g, const FrameVector& x,
                              DerivativeScheme scheme) {
  const Derivative d(g.background(), scheme);
  const Mat m = from_sym(g.components());
  const std::array<Comp, 2> xv{x.c1.data(), x.c2.data()};
  std::array<std::array<Comp, 2>, 2> dx;  // dx[i][k] = d_i X^k
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) dx[i][k] = d(xv[k], i);
  const std::size_t n = xv[0].size();
  Mat out = zeros_mat(n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const Comp dg = d(m[i][j], k);
        for (std::size_t p = 0; p < n; ++p) {
          out[i][j][p] += xv[k][p] * dg[p] + m[k][j][p] * dx[i][k][p] +
                          m[i][k][p] * dx[j][k][p];
        }
      }
    }
  return to_sym(g.background_ptr(), out);
}

double directional_derivative_F(const MetricField& g, const SymTensorField& h,
                                double eps, DerivativeScheme scheme) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  const MetricField plus(g.components() + eps * h);
  const MetricField minus(g.components() - eps * h);
  return (energy_F(plus, scheme) - energy_F(minus, scheme)) / (2.0 * eps);
}

}  // namespace l2flow
