#include "latsch/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace latsch {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex phase(const IntVec& m, const CVec& z) {
  Complex mz = 0;
  for (size_t i = 0; i < m.size(); ++i) mz += static_cast<double>(m[i]) * z[i];
  return std::exp(-kI * mz);
}

Complex poly_eval(const std::vector<Complex>& coeffs, Complex lambda) {
  Complex acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * lambda + *it;
  return acc;
}

Complex poly_eval_derivative(const std::vector<Complex>& coeffs, Complex lambda) {
  Complex acc = 0;
  for (size_t r = coeffs.size(); r-- > 1;)
    acc = acc * lambda + static_cast<double>(r) * coeffs[r];
  return acc;
}

using Terms = CharPolyExpansion::Terms;

void add_term(Terms& t, const IntVec& m, size_t r, Complex c) {
  auto& poly = t[m];
  if (poly.size() <= r) poly.resize(r + 1, Complex{0, 0});
  poly[r] += c;
}

Terms multiply(const Terms& a, const Terms& b) {
  Terms out;
  for (const auto& [ma, pa] : a)
    for (const auto& [mb, pb] : b) {
      IntVec m = add(ma, mb);
      for (size_t ra = 0; ra < pa.size(); ++ra) {
        if (pa[ra] == Complex{0, 0}) continue;
        for (size_t rb = 0; rb < pb.size(); ++rb) {
          if (pb[rb] == Complex{0, 0}) continue;
          add_term(out, m, ra + rb, pa[ra] * pb[rb]);
        }
      }
    }
  return out;
}

void prune(Terms& t) {
  for (auto it = t.begin(); it != t.end();) {
    auto& poly = it->second;
    while (!poly.empty() && std::abs(poly.back()) < 1e-15) poly.pop_back();
    for (auto& c : poly)
      if (std::abs(c) < 1e-15) c = Complex{0, 0};
    if (poly.empty())
      it = t.erase(it);
    else
      ++it;
  }
}

/// Leibniz expansion of det(H₀(z) - λ I) as a Fourier-λ polynomial.
Terms expand_char_poly(int d, int s, const std::map<IntVec, Eigen::MatrixXcd>& coeffs) {
  if (s > 8) throw std::invalid_argument("characteristic polynomial expansion supports s <= 8");
  // entry (j,k) as a small Fourier-λ polynomial
  std::vector<std::vector<Terms>> entry(s, std::vector<Terms>(s));
  for (int j = 0; j < s; ++j)
    for (int k = 0; k < s; ++k) {
      Terms t;
      for (const auto& [m, A] : coeffs)
        if (A(j, k) != Complex{0, 0}) add_term(t, m, 0, A(j, k));
      if (j == k) add_term(t, IntVec(d, 0), 1, Complex{-1, 0});
      entry[j][k] = std::move(t);
    }

  Terms det;
  std::vector<int> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int inversions = 0;
    for (int a = 0; a < s; ++a)
      for (int b = a + 1; b < s; ++b)
        if (perm[a] > perm[b]) ++inversions;
    Terms prod;
    add_term(prod, IntVec(d, 0), 0, Complex{1, 0});
    for (int j = 0; j < s; ++j) prod = multiply(prod, entry[j][perm[j]]);
    const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
    for (const auto& [m, poly] : prod)
      for (size_t r = 0; r < poly.size(); ++r) add_term(det, m, r, sign * poly[r]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  prune(det);
  return det;
}

}  // namespace

Complex CharPolyExpansion::eval(const CVec& z, Complex lambda) const {
  Complex acc = 0;
  for (const auto& [m, poly] : terms_) acc += phase(m, z) * poly_eval(poly, lambda);
  return acc;
}

CVec CharPolyExpansion::grad_z(const CVec& z, Complex lambda) const {
  CVec g(z.size(), Complex{0, 0});
  for (const auto& [m, poly] : terms_) {
    Complex base = phase(m, z) * poly_eval(poly, lambda);
    for (size_t a = 0; a < z.size(); ++a)
      if (m[a] != 0) g[a] += -kI * static_cast<double>(m[a]) * base;
  }
  return g;
}

Complex CharPolyExpansion::d_lambda(const CVec& z, Complex lambda) const {
  Complex acc = 0;
  for (const auto& [m, poly] : terms_) acc += phase(m, z) * poly_eval_derivative(poly, lambda);
  return acc;
}

Eigen::MatrixXcd CharPolyExpansion::hessian_z(const CVec& z, Complex lambda) const {
  const int d = static_cast<int>(z.size());
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [m, poly] : terms_) {
    Complex base = phase(m, z) * poly_eval(poly, lambda);
    for (int a = 0; a < d; ++a) {
      if (m[a] == 0) continue;
      for (int b = 0; b < d; ++b) {
        if (m[b] == 0) continue;
        H(a, b) += -static_cast<double>(m[a]) * static_cast<double>(m[b]) * base;
      }
    }
  }
  return H;
}

CVec CharPolyExpansion::grad_z_dlambda(const CVec& z, Complex lambda) const {
  CVec g(z.size(), Complex{0, 0});
  for (const auto& [m, poly] : terms_) {
    Complex base = phase(m, z) * poly_eval_derivative(poly, lambda);
    for (size_t a = 0; a < z.size(); ++a)
      if (m[a] != 0) g[a] += -kI * static_cast<double>(m[a]) * base;
  }
  return g;
}

double CharPolyExpansion::coeff_bound(int mode_power, double lambda_bound) const {
  double acc = 0;
  for (const auto& [m, poly] : terms_) {
    const double mn = std::pow(std::max(norm(m), mode_power > 0 ? 0.0 : 1.0), mode_power);
    double lpow = 1;
    for (const auto& c : poly) {
      acc += std::abs(c) * mn * lpow;
      lpow *= lambda_bound;
    }
  }
  return acc;
}

Symbol::Symbol(int d, int s, std::map<IntVec, Eigen::MatrixXcd> coeffs)
    : d_(d), s_(s), coeffs_(std::move(coeffs)) {
  for (const auto& [m, A] : coeffs_) {
    if (static_cast<int>(m.size()) != d_) throw std::invalid_argument("coefficient mode has wrong dimension");
    if (A.rows() != s_ || A.cols() != s_) throw std::invalid_argument("coefficient matrix has wrong size");
    auto it = coeffs_.find(negate(m));
    if (it == coeffs_.end() || (it->second.adjoint() - A).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("symbol coefficients violate A_{-m} = A_m^*");
  }
  expansion_ = CharPolyExpansion(expand_char_poly(d_, s_, coeffs_));
}

Eigen::MatrixXcd Symbol::evaluate(const CVec& z) const {
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(s_, s_);
  for (const auto& [m, A] : coeffs_) H += phase(m, z) * A;
  return H;
}

Eigen::MatrixXcd Symbol::evaluate(const RealVec& x) const {
  CVec z(x.begin(), x.end());
  return evaluate(z);
}

Eigen::MatrixXcd Symbol::derivative(const CVec& z, int axis) const {
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(s_, s_);
  for (const auto& [m, A] : coeffs_)
    if (m[axis] != 0) H += -kI * static_cast<double>(m[axis]) * phase(m, z) * A;
  return H;
}

double Symbol::band_lipschitz_bound() const {
  double acc = 0;
  for (const auto& [m, A] : coeffs_) acc += A.norm() * norm(m);
  return acc;
}

double Symbol::sup_norm_bound() const {
  double acc = 0;
  for (const auto& [m, A] : coeffs_) acc += A.norm();
  return acc;
}

Symbol symbol_from_lattice(const LatticeSpec& spec) {
  const int s = spec.num_cells();
  std::map<IntVec, Eigen::MatrixXcd> coeffs;
  for (const auto& g : spec.generators()) {
    auto [it, inserted] = coeffs.try_emplace(g.shift, Eigen::MatrixXcd::Zero(s, s));
    const double w = -1.0 / std::sqrt(static_cast<double>(spec.degree(g.from)) *
                                      static_cast<double>(spec.degree(g.to)));
    it->second(g.from - 1, g.to - 1) += w;
  }
  return Symbol(spec.d(), s, std::move(coeffs));
}

Complex char_poly(const Symbol& sym, const CVec& z, Complex lambda) {
  const int s = sym.size();
  Eigen::MatrixXcd M = sym.evaluate(z);
  for (int j = 0; j < s; ++j) M(j, j) -= lambda;
  // LU with partial pivoting
  Complex det = 1;
  for (int col = 0; col < s; ++col) {
    int piv = col;
    for (int r = col + 1; r < s; ++r)
      if (std::abs(M(r, col)) > std::abs(M(piv, col))) piv = r;
    if (piv != col) {
      M.row(piv).swap(M.row(col));
      det = -det;
    }
    if (M(col, col) == Complex{0, 0}) return Complex{0, 0};
    det *= M(col, col);
    for (int r = col + 1; r < s; ++r) {
      Complex f = M(r, col) / M(col, col);
      M.row(r).tail(s - col) -= f * M.row(col).tail(s - col);
    }
  }
  return det;
}

Complex char_poly(const Symbol& sym, const RealVec& x, Complex lambda) {
  CVec z(x.begin(), x.end());
  return char_poly(sym, z, lambda);
}

CVec grad_char_poly(const Symbol& sym, const CVec& z, Complex lambda) {
  return sym.expansion().grad_z(z, lambda);
}

CVec grad_char_poly(const Symbol& sym, const RealVec& x, Complex lambda) {
  CVec z(x.begin(), x.end());
  return grad_char_poly(sym, z, lambda);
}

std::vector<double> band_functions(const Symbol& sym, const RealVec& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym.evaluate(x));
  if (solver.info() != Eigen::Success) throw std::runtime_error("band eigensolve failed");
  return std::vector<double>(solver.eigenvalues().data(), solver.eigenvalues().data() + sym.size());
}

namespace {

/// Iterate the inclusive grid {2π t/(g-1)}^d, calling fn(x).
template <typename Fn>
void sweep_grid(int d, int g, Fn&& fn) {
  const double h = kTwoPi / (g - 1);
  std::vector<int> idx(d, 0);
  RealVec x(d, 0.0);
  while (true) {
    for (int i = 0; i < d; ++i) x[i] = idx[i] * h;
    fn(x);
    int i = d - 1;
    while (i >= 0 && idx[i] == g - 1) idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }
}

double grad_norm_real(const CVec& g) {
  double s = 0;
  for (const auto& c : g) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

std::vector<Interval> spectrum(const Symbol& sym, int grid_per_axis) {
  if (grid_per_axis < 16) throw std::invalid_argument("spectrum grid must be >= 16 per axis");
  const int s = sym.size();
  std::vector<double> lo(s, 1e300), hi(s, -1e300);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  sweep_grid(sym.d(), grid_per_axis, [&](const RealVec& x) {
    solver.compute(sym.evaluate(x), Eigen::EigenvaluesOnly);
    for (int k = 0; k < s; ++k) {
      double b = solver.eigenvalues()[k];
      lo[k] = std::min(lo[k], b);
      hi[k] = std::max(hi[k], b);
    }
  });

  std::vector<Interval> bands(s);
  for (int k = 0; k < s; ++k) bands[k] = {lo[k], hi[k]};
  std::sort(bands.begin(), bands.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

  // Bridge band touchings that fall between grid points: a true gap smaller
  // than Lipschitz-bound * grid diagonal cannot be resolved at this grid.
  const double h = kTwoPi / (grid_per_axis - 1);
  const double merge_tol = sym.band_lipschitz_bound() * h * std::sqrt(static_cast<double>(sym.d()));
  std::vector<Interval> out;
  for (const auto& b : bands) {
    if (!out.empty() && b.lo <= out.back().hi + merge_tol)
      out.back().hi = std::max(out.back().hi, b.hi);
    else
      out.push_back(b);
  }
  return out;
}

namespace {

struct NewtonSystem {
  const CharPolyExpansion& E;
  int d;

  Eigen::VectorXd F(const Eigen::VectorXd& y) const {
    CVec z(d);
    for (int i = 0; i < d; ++i) z[i] = y[i];
    const Complex lambda = y[d];
    Eigen::VectorXd f(d + 1);
    f[0] = E.eval(z, lambda).real();
    CVec g = E.grad_z(z, lambda);
    for (int i = 0; i < d; ++i) f[i + 1] = g[i].real();
    return f;
  }

  Eigen::MatrixXd J(const Eigen::VectorXd& y) const {
    CVec z(d);
    for (int i = 0; i < d; ++i) z[i] = y[i];
    const Complex lambda = y[d];
    Eigen::MatrixXd j(d + 1, d + 1);
    CVec g = E.grad_z(z, lambda);
    for (int i = 0; i < d; ++i) j(0, i) = g[i].real();
    j(0, d) = E.d_lambda(z, lambda).real();
    Eigen::MatrixXcd H = E.hessian_z(z, lambda);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) j(r + 1, c) = H(r, c).real();
    CVec gl = E.grad_z_dlambda(z, lambda);
    for (int r = 0; r < d; ++r) j(r + 1, d) = gl[r].real();
    return j;
  }
};

}  // namespace

ThresholdsResult thresholds(const Symbol& sym, int grid_per_axis, double refine_tol) {
  if (grid_per_axis < 32) throw std::invalid_argument("thresholds grid must be >= 32 per axis");
  const int d = sym.d();
  const int s = sym.size();
  const CharPolyExpansion& E = sym.expansion();
  const double h = kTwoPi / (grid_per_axis - 1);
  const double lam_bound = sym.sup_norm_bound() + 0.5;
  // near a critical point at grid distance <= h sqrt(d)/2 the gradient is
  // bounded by the Hessian bound times that distance
  const double tau = 1.5 * E.coeff_bound(2, lam_bound) * h * std::sqrt(static_cast<double>(d));

  std::vector<double> flat_lo(s, 1e300), flat_hi(s, -1e300);
  std::vector<std::pair<RealVec, double>> candidates;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  sweep_grid(d, grid_per_axis, [&](const RealVec& x) {
    solver.compute(sym.evaluate(x), Eigen::EigenvaluesOnly);
    CVec z(x.begin(), x.end());
    for (int k = 0; k < s; ++k) {
      const double b = solver.eigenvalues()[k];
      flat_lo[k] = std::min(flat_lo[k], b);
      flat_hi[k] = std::max(flat_hi[k], b);
      if (grad_norm_real(E.grad_z(z, b)) <= tau) candidates.emplace_back(x, b);
    }
  });

  std::vector<double> flat_values;
  for (int k = 0; k < s; ++k)
    if (flat_hi[k] - flat_lo[k] <= 1e-12) flat_values.push_back(0.5 * (flat_lo[k] + flat_hi[k]));

  ThresholdsResult result;
  std::vector<double> values = flat_values;
  NewtonSystem sys{E, d};
  const double accept = std::max(refine_tol, 1e-13);
  for (auto& [x0, lam0] : candidates) {
    bool near_flat = false;
    for (double fv : flat_values)
      if (std::abs(lam0 - fv) < 1e-9) near_flat = true;
    if (near_flat) continue;

    Eigen::VectorXd y(d + 1);
    for (int i = 0; i < d; ++i) y[i] = x0[i];
    y[d] = lam0;
    Eigen::VectorXd F = sys.F(y);
    // Damped Gauss-Newton, run down to the rounding floor: convergence is
    // only linear at band crossings and λ is much less accurate than |F|
    // there, so small |F| alone is not a stopping criterion.
    int stagnant = 0;
    for (int iter = 0; iter < 400 && stagnant < 5 && F.norm() > 0; ++iter) {
      Eigen::MatrixXd J = sys.J(y);
      Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-F);
      double t = 1.0;
      bool improved = false;
      for (int half = 0; half < 30; ++half) {
        Eigen::VectorXd y2 = y + t * step;
        Eigen::VectorXd F2 = sys.F(y2);
        if (F2.norm() < F.norm() * (1.0 - 1e-4 * t)) {
          stagnant = F2.norm() > F.norm() * 0.9 ? stagnant + 1 : 0;
          y = y2;
          F = F2;
          improved = true;
          break;
        }
        t *= 0.5;
      }
      if (!improved) ++stagnant;
    }
    if (F.cwiseAbs().maxCoeff() <= std::max(accept, 1e-9))
      values.push_back(y[d]);
    else
      result.unconverged.emplace_back(x0, lam0);  // reported, kept out of T̃
  }

  std::sort(values.begin(), values.end());
  for (double v : values) {
    if (v == 0.0) v = 0.0;  // canonicalize -0
    if (result.values.empty() || v - result.values.back() > 1e-6)
      result.values.push_back(v);
  }
  return result;
}

bool FermiSample::is_singular(size_t i, double cutoff_scale) const {
  return grad_norms.at(i) < cutoff_scale * (1.0 + std::abs(lambda));
}

FermiSample fermi_slice(const Symbol& sym, double lambda, int grid_per_axis, double tol) {
  if (grid_per_axis < 32) throw std::invalid_argument("fermi grid must be >= 32 per axis");
  if (tol <= 0) throw std::invalid_argument("fermi tolerance must be positive");
  const int d = sym.d();
  const CharPolyExpansion& E = sym.expansion();
  const double h = kTwoPi / (grid_per_axis - 1);

  auto p_at = [&](const RealVec& x) {
    CVec z(x.begin(), x.end());
    return E.eval(z, lambda).real();
  };
  auto dp_at = [&](const RealVec& x, int axis) {
    CVec z(x.begin(), x.end());
    return E.grad_z(z, lambda)[axis].real();
  };

  std::map<IntVec, RealVec> found;  // keyed by rounded coordinates for dedup
  auto emit = [&](RealVec x) {
    for (int i = 0; i < d; ++i) {
      x[i] = std::fmod(x[i], kTwoPi);
      if (x[i] < 0) x[i] += kTwoPi;
      if (x[i] >= kTwoPi - 1e-12) x[i] = 0.0;
    }
    IntVec key(d);
    for (int i = 0; i < d; ++i) key[i] = static_cast<int>(std::llround(x[i] * 1e9));
    found.emplace(key, x);
  };

  // 1-D refinement along `axis` between bracketing grid abscissae
  auto refine = [&](RealVec x, int axis, double a, double b, double pa) {
    for (int iter = 0; iter < 200; ++iter) {
      double mid = 0.5 * (a + b);
      x[axis] = mid;
      double pm = p_at(x);
      if (std::abs(pm) <= tol * 1e-3 || b - a < 1e-15) break;
      double dpm = dp_at(x, axis);
      // Newton step when it stays inside the bracket, bisection otherwise
      if (dpm != 0.0) {
        double xn = mid - pm / dpm;
        if (xn > a && xn < b) {
          x[axis] = xn;
          double pn = p_at(x);
          if (std::abs(pn) <= tol * 1e-3) break;
          if ((pa < 0) != (pn < 0))
            b = xn;
          else {
            a = xn;
            pa = pn;
          }
          continue;
        }
      }
      if ((pa < 0) != (pm < 0))
        b = mid;
      else {
        a = mid;
        pa = pm;
      }
    }
    if (std::abs(p_at(x)) <= tol) emit(x);
  };

  for (int axis = 0; axis < d; ++axis) {
    // iterate all lines along `axis`
    std::vector<int> idx(d, 0);
    while (true) {
      RealVec x(d, 0.0);
      for (int i = 0; i < d; ++i)
        if (i != axis) x[i] = idx[i] * h;
      double prev = 0;
      for (int t = 0; t < grid_per_axis; ++t) {
        x[axis] = t * h;
        double p = p_at(x);
        if (std::abs(p) <= tol) emit(x);
        if (t > 0 && (prev < 0) != (p < 0))
          refine(x, axis, (t - 1) * h, t * h, prev);
        prev = p;
      }
      int i = d - 1;
      while (i >= 0) {
        if (i == axis) {
          --i;
          continue;
        }
        if (idx[i] == grid_per_axis - 2) {
          idx[i] = 0;
          --i;
        } else {
          ++idx[i];
          break;
        }
      }
      if (i < 0) break;
    }
  }

  FermiSample out;
  out.lambda = lambda;
  out.tol = tol;
  for (const auto& [key, x] : found) {
    CVec z(x.begin(), x.end());
    out.points.push_back(x);
    out.abs_p.push_back(std::abs(E.eval(z, lambda)));
    out.grad_norms.push_back(grad_norm_real(E.grad_z(z, lambda)));
  }
  return out;
}

bool ExclusionSetT1::contains(double lambda, double tol) const {
  for (double p : points)
    if (std::abs(lambda - p) <= tol) return true;
  for (const auto& iv : intervals)
    if (lambda >= iv.lo - tol && lambda <= iv.hi + tol) return true;
  return false;
}

ExclusionSetT1 exclusion_set_T1(BuiltinLattice which, int d) {
  ExclusionSetT1 out;
  switch (which) {
    case BuiltinLattice::square:
      out.specified = true;
      out.points = {-1.0, 1.0};
      return out;
    case BuiltinLattice::hexagonal:
      out.specified = true;
      out.points = {-1.0, 0.0, 1.0};
      return out;
    case BuiltinLattice::kagome:
      out.specified = true;
      out.points = {-1.0, -0.25, 0.5};
      return out;
    case BuiltinLattice::ladder: {
      out.specified = true;
      const double q = 2.0 * d + 1.0;
      out.intervals = {{-1.0, (-2.0 * d + 1.0) / q}, {(2.0 * d - 1.0) / q, 1.0}};
      return out;
    }
    case BuiltinLattice::triangular:
      out.specified = false;  // no reference data for the triangular lattice
      return out;
  }
  throw std::logic_error("bad BuiltinLattice");
}

}  // namespace latsch
