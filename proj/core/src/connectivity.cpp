#include "latsch/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace latsch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_pi(double x) {
  x = std::fmod(x, kTwoPi);
  if (x > kPi) x -= kTwoPi;
  if (x <= -kPi) x += kTwoPi;
  return x;
}

double torus_distance(const CVec& p, const CVec& q) {
  double s = 0;
  for (size_t j = 0; j < p.size(); ++j) {
    double dre = wrap_pi(p[j].real() - q[j].real());
    double dim = p[j].imag() - q[j].imag();
    s += dre * dre + dim * dim;
  }
  return std::sqrt(s);
}

}  // namespace

double ComplexTorusPoint::im_norm() const {
  double s = 0;
  for (const auto& c : z) s += c.imag() * c.imag();
  return std::sqrt(s);
}

ComplexTorusPoint ComplexTorusPoint::normalized() const {
  ComplexTorusPoint out = *this;
  for (auto& c : out.z) {
    double re = std::fmod(c.real(), kTwoPi);
    if (re < 0) re += kTwoPi;
    c = Complex(re, c.imag());
  }
  return out;
}

CosineEllipse cosine_ellipse(double gamma) {
  if (gamma < 0) throw std::invalid_argument("gamma must be >= 0");
  CosineEllipse e;
  e.gamma = gamma;
  e.semi_major = std::cosh(gamma);
  e.semi_minor = std::sinh(gamma);
  return e;
}

bool CosineEllipse::contains(Complex eta, double tol) const {
  if (semi_minor == 0.0)
    return std::abs(eta.imag()) <= tol && std::abs(eta.real()) <= 1.0 + tol;
  const double u = eta.real() / semi_major;
  const double v = eta.imag() / semi_minor;
  return u * u + v * v <= 1.0 + tol;
}

Complex acos_branch(Complex w, Complex hint) {
  const Complex principal = std::acos(w);
  Complex best{};
  double best_dist = 1e300;
  for (int sgn : {1, -1}) {
    Complex base = sgn > 0 ? principal : -principal;
    double k0 = std::round((hint.real() - base.real()) / kTwoPi);
    for (double dk : {-1.0, 0.0, 1.0}) {
      Complex cand = base + Complex(kTwoPi * (k0 + dk), 0.0);
      double dist = std::abs(cand - hint);
      if (dist < best_dist) {
        best_dist = dist;
        best = cand;
      }
    }
  }
  if (best_dist > kPi / 2)
    throw std::runtime_error("acos_branch: no branch within pi/2 of hint");
  return best;
}

size_t PathSample::sample_index_at(double t) const {
  for (size_t i = 0; i < t_grid.size(); ++i)
    if (std::abs(t_grid[i] - t) <= 1e-9) return i;
  throw std::invalid_argument("t is not a sample of this path");
}

namespace {

/// Piecewise timeline for the square-lattice path in w-space (w_j = cos z_j).
/// Each stage remaps a ramped index j and an optional compensator k from the
/// stage-start snapshot; everything else is frozen, so the two surface sums
/// Σ Re(w+λ) and Σ Im w are conserved exactly.
struct SquareTimeline {
  struct Stage {
    double t0 = 0, t1 = 0;
    int j = -1, k = -1;
    bool im_stage = true;
    CVec w0;
  };
  std::vector<Stage> stages;
  double lambda = 0;

  CVec w_at(double t) const {
    const Stage* st = &stages.back();
    for (const auto& s : stages)
      if (t <= s.t1 + 1e-15) {
        st = &s;
        break;
      }
    const double span = st->t1 - st->t0;
    const double theta = span > 0 ? std::clamp((t - st->t0) / span, 0.0, 1.0) : 1.0;
    CVec w = st->w0;
    if (st->j < 0) return w;
    if (st->im_stage) {
      const double imj = st->w0[st->j].imag();
      w[st->j] = Complex(st->w0[st->j].real(), (1.0 - theta) * imj);
      if (st->k >= 0) w[st->k] = Complex(st->w0[st->k].real(), st->w0[st->k].imag() + theta * imj);
    } else {
      const double uj = st->w0[st->j].real() + lambda;
      w[st->j] = Complex((1.0 - theta) * uj - lambda, 0.0);
      if (st->k >= 0) w[st->k] = Complex(st->w0[st->k].real() + theta * uj, 0.0);
    }
    return w;
  }
};

template <typename WAt>
Complex track_branch(const WAt& w_at, int coord, double t_from, Complex hint, double t_to,
                     int depth) {
  Complex w = w_at(t_to, coord);
  Complex z = acos_branch(w, hint);
  if (std::abs(z - hint) <= 0.5 || depth >= 48) return z;
  const double tm = 0.5 * (t_from + t_to);
  Complex zm = track_branch(w_at, coord, t_from, hint, tm, depth + 1);
  return track_branch(w_at, coord, tm, zm, t_to, depth + 1);
}

std::vector<double> build_time_grid(int steps, const std::vector<double>& boundaries) {
  std::vector<double> ts;
  ts.reserve(steps + boundaries.size() + 1);
  for (int i = 0; i <= steps; ++i) ts.push_back(static_cast<double>(i) / steps);
  ts.insert(ts.end(), boundaries.begin(), boundaries.end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(),
                       [](double x, double y) { return std::abs(x - y) < 1e-12; }),
           ts.end());
  return ts;
}

}  // namespace

PathSample square_connect(const ComplexTorusPoint& z0_in, double lambda, double a, int steps) {
  const ComplexTorusPoint z0 = z0_in.normalized();
  const int d = z0.dim();
  if (d < 2) throw std::invalid_argument("square_connect requires d >= 2");
  if (!(lambda > -1.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (-1, 1)");
  if (a <= 0) throw std::invalid_argument("a must be positive");
  if (steps < 10) steps = 10;
  if (!z0.in_omega(a)) throw std::invalid_argument("starting point is not in Omega_a");

  CVec w(d);
  Complex surface = 0;
  double max_sin = 0;
  for (int j = 0; j < d; ++j) {
    w[j] = std::cos(z0.z[j]);
    surface += w[j] + lambda;
    max_sin = std::max(max_sin, std::abs(std::sin(z0.z[j])));
  }
  if (std::abs(surface) > 1e-8 * d)
    throw std::invalid_argument("starting point violates the Fermi surface equation");
  if (max_sin < 1e-6 * (1.0 + std::abs(lambda)))
    throw std::invalid_argument("starting point is a singular Fermi point");

  PathSample ps;
  ps.lambda = lambda;
  ps.a = a;
  ps.stage_marks = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

  SquareTimeline tl;
  tl.lambda = lambda;
  std::vector<double> boundaries = ps.stage_marks;

  const double im_eps = 1e-14;
  const double dust = 1e-9 * d;

  // [0, 2/5]: zero the imaginary parts pairwise, smallest |Im| first.
  const int n_im = std::max(1, d - 1);
  CVec cur = w;
  for (int s = 0; s < n_im; ++s) {
    const double a0 = 0.4 * s / n_im;
    const double a1 = 0.4 * (s + 1) / n_im;
    boundaries.push_back(a1);
    int j = -1, k = -1;
    for (int i = 0; i < d; ++i)
      if (std::abs(cur[i].imag()) > im_eps &&
          (j < 0 || std::abs(cur[i].imag()) < std::abs(cur[j].imag())))
        j = i;
    if (j >= 0) {
      const double sj = cur[j].imag() > 0 ? 1.0 : -1.0;
      for (int i = 0; i < d; ++i) {
        if (i == j) continue;
        if (cur[i].imag() * sj < -im_eps &&
            (k < 0 || std::abs(cur[i].imag()) > std::abs(cur[k].imag())))
          k = i;
      }
      if (k < 0) {
        if (std::abs(cur[j].imag()) > dust)
          throw std::runtime_error(
              "stage infeasibility: no opposite-sign compensator for Im w (starting point off "
              "the surface?)");
        ps.notes.push_back("imaginary dust absorbed at index " + std::to_string(j));
      }
    } else {
      ps.notes.push_back("imaginary stage " + std::to_string(s) + " skipped (already real)");
    }
    tl.stages.push_back({a0, a1, j, k, true, cur});
    cur = tl.w_at(a1);
  }
  for (auto& c : cur)
    if (std::abs(c.imag()) <= 1e-12) c = Complex(c.real(), 0.0);

  // [2/5, 4/5]: drive the d-2 smallest |Re w + λ| to zero pairwise.
  const int n_re = d - 2;
  if (n_re == 0) {
    tl.stages.push_back({0.4, 0.8, -1, -1, false, cur});
    ps.notes.push_back("real stage skipped (d = 2)");
  }
  auto pick_re_pair = [&](const CVec& state, int& j, int& k) {
    j = k = -1;
    for (int i = 0; i < d; ++i) {
      const double u = state[i].real() + lambda;
      if (std::abs(u) > im_eps && (j < 0 || std::abs(u) < std::abs(state[j].real() + lambda)))
        j = i;
    }
    if (j < 0) return;
    const double sj = state[j].real() + lambda > 0 ? 1.0 : -1.0;
    for (int i = 0; i < d; ++i) {
      if (i == j) continue;
      const double u = state[i].real() + lambda;
      if (u * sj < -im_eps && (k < 0 || std::abs(u) > std::abs(state[k].real() + lambda)))
        k = i;
    }
  };
  for (int s = 0; s < n_re; ++s) {
    const double a0 = 0.4 + 0.4 * s / n_re;
    const double a1 = 0.4 + 0.4 * (s + 1) / n_re;
    boundaries.push_back(a1);
    int j, k;
    pick_re_pair(cur, j, k);
    if (j >= 0 && k < 0) {
      if (std::abs(cur[j].real() + lambda) > dust)
        throw std::runtime_error(
            "stage infeasibility: no opposite-sign compensator for Re w + lambda");
      ps.notes.push_back("real dust absorbed at index " + std::to_string(j));
    }
    if (j < 0) ps.notes.push_back("real stage " + std::to_string(s) + " skipped (already at -lambda)");
    tl.stages.push_back({a0, a1, j, k, false, cur});
    cur = tl.w_at(a1);
  }

  // [4/5, 1]: balance the final pair.
  {
    int j, k;
    pick_re_pair(cur, j, k);
    if (j >= 0 && k < 0) {
      if (std::abs(cur[j].real() + lambda) > dust)
        throw std::runtime_error("stage infeasibility: unbalanced final pair");
      ps.notes.push_back("final dust absorbed at index " + std::to_string(j));
    }
    if (j < 0) ps.notes.push_back("final stage degenerate (endpoint reached early)");
    tl.stages.push_back({0.8, 1.0, j, k, false, cur});
  }

  // sample and lift back through the cosine, tracking branches continuously
  ps.t_grid = build_time_grid(steps, boundaries);
  auto w_coord = [&tl](double t, int coord) { return tl.w_at(t)[coord]; };
  CVec hint = z0.z;
  double t_prev = 0;
  ps.points.reserve(ps.t_grid.size());
  ps.residuals.reserve(ps.t_grid.size());
  for (double t : ps.t_grid) {
    CVec z(d);
    if (t == 0.0) {
      z = z0.z;
    } else {
      for (int j = 0; j < d; ++j) z[j] = track_branch(w_coord, j, t_prev, hint[j], t, 0);
    }
    hint = z;
    t_prev = t;
    Complex S = 0;
    for (int j = 0; j < d; ++j) S += std::cos(z[j]) + lambda;
    ComplexTorusPoint pt{z};
    if (!pt.in_omega(a))
      throw std::runtime_error("path left Omega_a at t = " + std::to_string(t));
    ps.points.push_back(pt.normalized());
    ps.residuals.push_back(std::abs(S) / d);
  }
  return ps;
}

namespace {

/// Timeline for the hexagonal path in η-space: η₂ carries the motion and
/// η₁ = μ/η₂ - η₂ keeps the surface equation exact.
struct HexTimeline {
  double mu = 0;
  bool factor_branch = false;  // η₂ ≈ 0 (only reachable when μ = 0)
  Complex eta1_start{}, eta2_const{};
  double r0 = 0, theta0 = 0, theta_star = 0;
  double r_mid = 0, r_target = 0;

  std::pair<Complex, Complex> eta_at(double t) const {
    if (factor_branch) return {(1.0 - t) * eta1_start, eta2_const};
    Complex eta2;
    if (t < 0.5) {
      const double th = theta0 + 2.0 * t * (theta_star - theta0);
      eta2 = std::polar(r0, th);
    } else {
      eta2 = Complex(r_mid + (2.0 * t - 1.0) * (r_target - r_mid), 0.0);
    }
    return {mu / eta2 - eta2, eta2};
  }
};

}  // namespace

PathSample hexagonal_connect(const ComplexTorusPoint& z0_in, double lambda, double a, int steps) {
  const ComplexTorusPoint z0 = z0_in.normalized();
  if (z0.dim() != 2) throw std::invalid_argument("hexagonal_connect requires d = 2");
  if (a <= 0) throw std::invalid_argument("a must be positive");
  if (steps < 10) steps = 10;
  const double rho = 1.5 * (3.0 * lambda * lambda - 1.0);
  const double mu = 0.5 * (rho + 1.0);
  if (!(mu > -0.25 + 1e-12 && mu < 2.0 - 1e-12))
    throw std::invalid_argument("lambda invalid: mu = (rho+1)/2 must lie inside (-1/4, 2)");
  if (!z0.in_omega(a)) throw std::invalid_argument("starting point is not in Omega_a");

  const Complex zeta1_0 = 0.5 * (z0.z[0] + z0.z[1]);
  const Complex zeta2_0 = 0.5 * (z0.z[0] - z0.z[1]);
  const Complex eta1_0 = std::cos(zeta1_0);
  const Complex eta2_0 = std::cos(zeta2_0);
  if (std::abs(eta2_0 * (eta1_0 + eta2_0) - mu) * 4.0 / 9.0 > 1e-8)
    throw std::invalid_argument("starting point violates the Fermi surface equation");
  {
    const Complex z1 = z0.z[0], z2 = z0.z[1];
    const Complex g1 = (2.0 / 9.0) * (std::sin(z1) + std::sin(z1 - z2));
    const Complex g2 = (2.0 / 9.0) * (std::sin(z2) - std::sin(z1 - z2));
    if (std::sqrt(std::norm(g1) + std::norm(g2)) < 1e-6 * (1.0 + std::abs(lambda)))
      throw std::invalid_argument("starting point is a singular Fermi point");
  }

  PathSample ps;
  ps.lambda = lambda;
  ps.a = a;
  ps.stage_marks = {0.0, 0.5, 1.0};

  HexTimeline tl;
  tl.mu = mu;
  if (std::abs(eta2_0) < 1e-12) {
    if (std::abs(mu) > 1e-10)
      throw std::invalid_argument("eta2 = 0 is off the surface unless mu = 0");
    tl.factor_branch = true;
    tl.eta1_start = eta1_0;
    tl.eta2_const = eta2_0;
    ps.notes.push_back("mu = 0 factor branch: eta2 frozen, eta1 contracted to 0");
  } else {
    tl.r0 = std::abs(eta2_0);
    tl.theta0 = std::arg(eta2_0);
    tl.theta_star = kPi * std::round(tl.theta0 / kPi);
    tl.r_mid = std::cos(tl.theta_star) > 0 ? tl.r0 : -tl.r0;
    const double disc = std::sqrt(1.0 + 4.0 * mu);
    double lo;
    if (mu > 0)
      lo = 0.5 * (-1.0 + disc);
    else if (mu < 0)
      lo = 0.5 * (1.0 - disc);
    else
      lo = 0.0;
    const double hi = std::min(0.5 * (1.0 + disc), 1.0);
    const double target_abs = 0.5 * (lo + hi);
    tl.r_target = tl.r_mid >= 0 ? target_abs : -target_abs;
    ps.notes.push_back(mu > 0 ? "case mu in (0,2)" : (mu < 0 ? "case mu in (-1/4,0)" : "case mu = 0"));
  }

  ps.t_grid = build_time_grid(steps, ps.stage_marks);
  auto zeta_coord = [&tl](double t, int coord) {
    auto [e1, e2] = tl.eta_at(t);
    return coord == 0 ? e1 : e2;
  };
  Complex hint1 = zeta1_0, hint2 = zeta2_0;
  double t_prev = 0;
  for (double t : ps.t_grid) {
    Complex zt1, zt2;
    if (t == 0.0) {
      zt1 = zeta1_0;
      zt2 = zeta2_0;
    } else {
      zt1 = track_branch(zeta_coord, 0, t_prev, hint1, t, 0);
      zt2 = track_branch(zeta_coord, 1, t_prev, hint2, t, 0);
    }
    hint1 = zt1;
    hint2 = zt2;
    t_prev = t;
    CVec z = {zt1 + zt2, zt1 - zt2};
    const Complex sum = std::cos(z[0]) + std::cos(z[1]) + std::cos(z[0] - z[1]);
    ComplexTorusPoint pt{z};
    if (!pt.in_omega(a))
      throw std::runtime_error("path left Omega_a at t = " + std::to_string(t));
    ps.points.push_back(pt.normalized());
    ps.residuals.push_back(std::abs(lambda * lambda - (3.0 + 2.0 * sum) / 9.0));
  }
  return ps;
}

PathReport verify_path(const PathSample& ps, const Symbol& sym, double lambda, double tol,
                       double endpoint_tol, double jump_cap) {
  PathReport report;
  for (size_t i = 0; i < ps.points.size(); ++i) {
    report.max_residual =
        std::max(report.max_residual, std::abs(char_poly(sym, ps.points[i].z, lambda)));
    report.max_im_norm = std::max(report.max_im_norm, ps.points[i].im_norm());
    if (i > 0)
      report.max_jump = std::max(report.max_jump, torus_distance(ps.points[i].z, ps.points[i - 1].z));
  }
  report.endpoint_im = ps.points.back().im_norm();
  report.residual_ok = report.max_residual <= tol;
  report.endpoint_ok = report.endpoint_im <= endpoint_tol;
  report.omega_ok = report.max_im_norm < ps.a;
  report.continuity_ok = report.max_jump <= jump_cap;
  return report;
}

ComplexTorusPoint random_square_surface_point(int d, double lambda, double a, detail::Rng& rng) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  for (int attempt = 0; attempt < 5000; ++attempt) {
    RealVec x(d, 0.0);
    double rest = 0;
    for (int j = 1; j < d; ++j) {
      x[j] = rng.uniform(0, kTwoPi);
      rest += std::cos(x[j]);
    }
    const double target = -d * lambda - rest;
    if (std::abs(target) > 0.9) continue;
    x[0] = std::acos(target);

    CVec z(d);
    const double im_budget = 0.5 * a / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
      z[j] = Complex(x[j] + rng.uniform(-0.3, 0.3), rng.uniform(-1.0, 1.0) * im_budget);
    Complex sum_rest = 0;
    for (int j = 1; j < d; ++j) sum_rest += std::cos(z[j]);
    const Complex w0 = -static_cast<double>(d) * lambda - sum_rest;
    try {
      z[0] = acos_branch(w0, z[0]);
    } catch (const std::runtime_error&) {
      continue;
    }

    ComplexTorusPoint pt{z};
    if (!pt.in_omega(0.95 * a)) continue;
    double max_sin = 0;
    for (int j = 0; j < d; ++j) max_sin = std::max(max_sin, std::abs(std::sin(z[j])));
    if (max_sin < 1e-3) continue;
    return pt.normalized();
  }
  throw std::runtime_error("failed to sample a square-lattice surface point");
}

ComplexTorusPoint random_hexagonal_surface_point(double lambda, double a, detail::Rng& rng) {
  const double rho = 1.5 * (3.0 * lambda * lambda - 1.0);
  const double mu = 0.5 * (rho + 1.0);
  if (!(mu > -0.25 + 1e-12 && mu < 2.0 - 1e-12))
    throw std::invalid_argument("lambda invalid for the hexagonal surface");
  for (int attempt = 0; attempt < 5000; ++attempt) {
    const Complex zeta2(rng.uniform(0, kTwoPi), rng.uniform(-1.0, 1.0) * 0.25 * a / std::sqrt(2.0));
    const Complex eta2 = std::cos(zeta2);
    if (std::abs(eta2) < 0.05) continue;
    const Complex eta1 = mu / eta2 - eta2;
    const Complex zeta1 = std::acos(eta1);
    CVec z = {zeta1 + zeta2, zeta1 - zeta2};
    ComplexTorusPoint pt{z};
    if (!pt.in_omega(0.9 * a)) continue;
    const Complex g1 = (2.0 / 9.0) * (std::sin(z[0]) + std::sin(z[0] - z[1]));
    const Complex g2 = (2.0 / 9.0) * (std::sin(z[1]) - std::sin(z[0] - z[1]));
    if (std::sqrt(std::norm(g1) + std::norm(g2)) < 1e-3) continue;
    return pt.normalized();
  }
  throw std::runtime_error("failed to sample a hexagonal-lattice surface point");
}

}  // namespace latsch
