#include "hallmhd/mms.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

struct Trig {
  double sx, sy, sz, cx, cy, cz;
  explicit Trig(const Vec3& x)
      : sx(std::sin(x[0])), sy(std::sin(x[1])), sz(std::sin(x[2])),
        cx(std::cos(x[0])), cy(std::cos(x[1])), cz(std::cos(x[2])) {}
};

Vec3 U(const Trig& s) { return {s.cx * s.sy * s.sz, s.sx * s.cy * s.sz, -2.0 * s.sx * s.sy * s.cz}; }
Vec3 W(const Trig& s) { return {-3.0 * s.sx * s.cy * s.cz, 3.0 * s.cx * s.sy * s.cz, 0.0}; }
Vec3 Bh(const Trig& s) { return {s.sy * s.sz, s.sx * s.sz, -s.sx * s.sy}; }
Vec3 Jh(const Trig& s) {
  return {-s.sx * (s.cy + s.cz), s.sy * (s.cz + s.cx), s.sz * (s.cx - s.cy)};
}
Vec3 curl_Ehat(const Trig& s) { return {-s.sy * s.sz, -s.sx * s.sz, s.sx * s.sy}; }

// Rows are gradients of the components.
Mat3 grad_U(const Trig& s) {
  Mat3 g;
  g << -s.sx * s.sy * s.sz, s.cx * s.cy * s.sz, s.cx * s.sy * s.cz,
       s.cx * s.cy * s.sz, -s.sx * s.sy * s.sz, s.sx * s.cy * s.cz,
       -2.0 * s.cx * s.sy * s.cz, -2.0 * s.sx * s.cy * s.cz, 2.0 * s.sx * s.sy * s.sz;
  return g;
}
Mat3 grad_Bh(const Trig& s) {
  Mat3 g;
  g << 0.0, s.cy * s.sz, s.sy * s.cz,
       s.cx * s.sz, 0.0, s.sx * s.cz,
       -s.cx * s.sy, -s.sx * s.cy, 0.0;
  return g;
}
Mat3 grad_Jh(const Trig& s) {
  Mat3 g;
  g << -s.cx * (s.cy + s.cz), s.sx * s.sy, s.sx * s.sz,
       -s.sx * s.sy, s.cy * (s.cz + s.cx), -s.sy * s.sz,
       -s.sx * s.sz, s.sy * s.sz, s.cz * (s.cx - s.cy);
  return g;
}

// Finite-difference oracles.
constexpr double kStep = 1e-4;

template <class F>
Vec3 fd_curl(const F& f, const Vec3& x) {
  Mat3 d;  // d(i, k) = d f_i / d x_k
  for (int k = 0; k < 3; ++k) {
    Vec3 xp = x, xm = x;
    xp[k] += kStep;
    xm[k] -= kStep;
    d.col(k) = (f(xp) - f(xm)) / (2.0 * kStep);
  }
  return {d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)};
}

template <class F>
double fd_div(const F& f, const Vec3& x) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    Vec3 xp = x, xm = x;
    xp[k] += kStep;
    xm[k] -= kStep;
    s += (f(xp)[k] - f(xm)[k]) / (2.0 * kStep);
  }
  return s;
}

template <class F>
Vec3 fd_grad(const F& f, const Vec3& x) {
  Vec3 g;
  for (int k = 0; k < 3; ++k) {
    Vec3 xp = x, xm = x;
    xp[k] += kStep;
    xm[k] -= kStep;
    g[k] = (f(xp) - f(xm)) / (2.0 * kStep);
  }
  return g;
}

}  // namespace

ManufacturedCase::ManufacturedCase(const SchemeParams& params) : p_(params) {}

Vec3 ManufacturedCase::u(const Vec3& x, double t) const { return std::exp(t) * U(Trig(x)); }
Vec3 ManufacturedCase::omega(const Vec3& x, double t) const { return std::exp(t) * W(Trig(x)); }
Vec3 ManufacturedCase::u_potential(const Vec3& x, double t) const {
  return std::exp(t) * W(Trig(x)) / 3.0;
}
double ManufacturedCase::P(const Vec3& x, double t) const {
  return std::sin(x[0]) * std::sin(x[1]) * std::sin(x[2]) * std::exp(-t);
}
Vec3 ManufacturedCase::B(const Vec3& x, double t) const { return std::expm1(t) * Bh(Trig(x)); }
Vec3 ManufacturedCase::j(const Vec3& x, double t) const { return std::expm1(t) * Jh(Trig(x)); }
Vec3 ManufacturedCase::E_prime(const Vec3& x, double t) const {
  const Trig s(x);
  return std::exp(t) * Vec3(s.sx * s.cy, -s.sy * s.cz, -s.cx * s.sz);
}

Vec3 ManufacturedCase::E(const Vec3& x, double t) const {
  const Vec3 uu = u(x, t), bb = B(x, t), jj = j(x, t);
  return p_.inv_Rm() * jj - uu.cross(bb) + p_.h * jj.cross(bb);
}

Vec3 ManufacturedCase::f(const Vec3& x, double t) const {
  const Trig s(x);
  const Vec3 uu = u(x, t), ww = omega(x, t), bb = B(x, t), jj = j(x, t);
  const Vec3 grad_P = std::exp(-t) * Vec3(s.cx * s.sy * s.sz, s.sx * s.cy * s.sz, s.sx * s.sy * s.cz);
  // d_t u = u and curl omega = 3 u for this field.
  return uu + ww.cross(uu) + 3.0 * p_.inv_Rf() * uu - p_.c * jj.cross(bb) + grad_P;
}

Vec3 ManufacturedCase::m(const Vec3& x, double t) const {
  const Trig s(x);
  const double et = std::exp(t), em = std::expm1(t);
  const Vec3 uu = et * U(s), bb = em * Bh(s), jj = em * Jh(s);
  const Mat3 gu = et * grad_U(s), gb = em * grad_Bh(s), gj = em * grad_Jh(s);
  // curl(u x B) = (B.grad)u - (u.grad)B and curl(j x B) = (B.grad)j - (j.grad)B
  // for divergence-free fields; curl j = 2 B.
  const Vec3 curl_E = 2.0 * p_.inv_Rm() * bb - (gu * bb - gb * uu) + p_.h * (gj * bb - gb * jj);
  return curl_E - et * curl_Ehat(s);
}

VectorField ManufacturedCase::field(const std::string& name) const {
  const ManufacturedCase self = *this;
  if (name == "u") return [self](const Vec3& x, double t) { return self.u(x, t); };
  if (name == "omega") return [self](const Vec3& x, double t) { return self.omega(x, t); };
  if (name == "B" || name == "H") return [self](const Vec3& x, double t) { return self.B(x, t); };
  if (name == "j") return [self](const Vec3& x, double t) { return self.j(x, t); };
  if (name == "E") return [self](const Vec3& x, double t) { return self.E(x, t); };
  if (name == "f") return [self](const Vec3& x, double t) { return self.f(x, t); };
  if (name == "m") return [self](const Vec3& x, double t) { return self.m(x, t); };
  if (name == "u_potential")
    return [self](const Vec3& x, double t) { return self.u_potential(x, t); };
  throw std::invalid_argument("unknown manufactured field '" + name + "'");
}

ScalarField ManufacturedCase::pressure() const {
  const ManufacturedCase self = *this;
  return [self](const Vec3& x, double t) { return self.P(x, t); };
}

SourceSpec ManufacturedCase::sources() const {
  SourceSpec s;
  s.f = field("f");
  s.m = field("m");
  return s;
}

double ManufacturedCase::self_check_residual(int samples, unsigned seed) const {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> space(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> time(0.05, 1.0);
  const QuadratureRule tq = gauss_rule(10);
  double worst = 0.0;
  auto track = [&](double v) { worst = std::max(worst, std::abs(v)); };
  for (int n = 0; n < samples; ++n) {
    const Vec3 x(space(rng), space(rng), space(rng));
    const double t = time(rng);
    auto at = [&](auto fn, double tt) { return [&, fn, tt](const Vec3& y) { return fn(y, tt); }; };
    auto uf = [this](const Vec3& y, double tt) { return u(y, tt); };
    auto bf = [this](const Vec3& y, double tt) { return B(y, tt); };
    auto wf = [this](const Vec3& y, double tt) { return omega(y, tt); };
    auto ef = [this](const Vec3& y, double tt) { return E(y, tt); };
    auto epf = [this](const Vec3& y, double tt) { return E_prime(y, tt); };
    auto pf = [this, t](const Vec3& y) { return P(y, t); };

    track((omega(x, t) - fd_curl(at(uf, t), x)).cwiseAbs().maxCoeff());
    track((j(x, t) - fd_curl(at(bf, t), x)).cwiseAbs().maxCoeff());
    track(fd_div(at(uf, t), x));
    track(fd_div(at(bf, t), x));

    Vec3 integral = Vec3::Zero();
    for (std::size_t q = 0; q < tq.size(); ++q) {
      const double tt = 0.5 * t * (1.0 + tq.points[q]);
      integral += 0.5 * t * tq.weights[q] * fd_curl(at(epf, tt), x);
    }
    track((B(x, t) + integral).cwiseAbs().maxCoeff());

    const Vec3 dudt = (u(x, t + kStep) - u(x, t - kStep)) / (2.0 * kStep);
    const Vec3 momentum = dudt + omega(x, t).cross(u(x, t)) + p_.inv_Rf() * fd_curl(at(wf, t), x) -
                          p_.c * j(x, t).cross(B(x, t)) + fd_grad(pf, x) - f(x, t);
    track(momentum.cwiseAbs().maxCoeff());

    const Vec3 dBdt = (B(x, t + kStep) - B(x, t - kStep)) / (2.0 * kStep);
    track((dBdt + fd_curl(at(ef, t), x) - m(x, t)).cwiseAbs().maxCoeff());
  }
  return worst;
}

void ManufacturedCase::self_check(double tol, int samples) const {
  const double r = self_check_residual(samples);
  if (!(r <= tol)) {
    std::ostringstream os;
    os << "manufactured solution self-check residual " << r << " exceeds " << tol;
    throw SelfCheckFailed(os.str());
  }
}

ManufacturedCase build_case(const SchemeParams& params) {
  ManufacturedCase c(params);
  c.self_check();
  return c;
}

double l2_error(const Assembler& assembler, const DiscreteField& field, const VectorField& exact,
                double t) {
  return assembler.l2_error(field.space, field.coefficients, exact, t);
}

double l2_error(const Assembler& assembler, const DiscreteField& field, const ScalarField& exact,
                double t) {
  return assembler.l2_error(field.space, field.coefficients, exact, t);
}

namespace {

double mass_distance(const Assembler& asmb, const DiscreteField& a, const DiscreteField& b) {
  const Vector d = a.coefficients - b.coefficients;
  return std::sqrt(std::max(0.0, d.dot(asmb.mass(a.space) * d)));
}

/// Reruns with dt / r from the same initial data and measures the distance at
/// the final time levels of `s`.
std::map<std::string, double> temporal_distance(const Assembler& asmb, const SchemeParams& params,
                                                const SourceSpec& sources,
                                                const SolverOptions& solver, const DiscreteField& u0,
                                                const DiscreteField& B0, const DiscreteField& H0,
                                                const SimulationState& s, int r) {
  SchemeParams p = params;
  p.dt = params.dt / r;
  const HallMHDScheme ref(asmb, p, sources, solver);
  SimulationState cur = ref.initialize(u0, B0, H0);
  const int k_int = r * s.k;               // t^k
  const int k_pe = r * s.k - (r - 1) / 2;  // t^{k-1/2}
  const int k_h = r * s.k + (r - 1) / 2;   // t^{k+1/2}, reached after step 2
  std::map<std::string, double> out;
  auto capture = [&] {
    if (cur.k == k_int) {
      out["u"] = mass_distance(asmb, s.u, cur.u);
      out["omega"] = mass_distance(asmb, s.omega, cur.omega);
      out["B"] = mass_distance(asmb, s.B, cur.B);
      out["j"] = mass_distance(asmb, s.j, cur.j);
    }
    if (s.k > 0 && cur.k == k_pe) {
      out["P"] = mass_distance(asmb, s.P, cur.P);
      out["E"] = mass_distance(asmb, s.E, cur.E);
    }
  };
  capture();
  while (cur.k < k_h) {
    ref.step1(cur);
    capture();
    ref.step2(cur);
  }
  out["H"] = mass_distance(asmb, s.H, cur.H);
  return out;
}

}  // namespace

MmsRun run_manufactured(int N, int K, const SchemeParams& params, const MmsOptions& options) {
  const int reference_ratio = options.reference_ratio;
  const SolverOptions& solver = options.solver;
  if (reference_ratio != 0 && (reference_ratio < 3 || reference_ratio % 2 == 0))
    throw std::invalid_argument("reference_ratio must be 0 or an odd integer >= 3");
  const double two_pi = 2.0 * std::numbers::pi;
  const BoxDomain domain{Vec3::Zero(), Vec3::Constant(two_pi)};
  const HexMesh mesh = build_mesh(K, domain, {MappingKind::affine, 0.0});
  const DeRhamComplex complex = build_complex(mesh, N);
  const Assembler asmb(complex, options.assembly);
  const ManufacturedCase mc = build_case(params);
  SourceSpec sources = mc.sources();
  sources.m_in_B = options.m_in_B;
  sources.m_in_H = options.m_in_H;
  const HallMHDScheme scheme(asmb, params, sources, solver);

  const DiscreteField u0{Space::D, asmb.interpolate_curl(mc.field("u_potential"), 0.0), 0};
  const DiscreteField B0{Space::D, Vector::Zero(complex.dimension(Space::D)), 0};
  const DiscreteField H0{Space::C0, Vector::Zero(complex.dimension(Space::C0)), 0};

  MmsRun out;
  out.state = scheme.initialize(u0, B0, H0);
  HallMHDScheme::Callback callback;
  if (options.observer)
    callback = [&](const SimulationState& prev, const SimulationState& cur,
                   const IterationInfo& info) { options.observer(asmb, prev, cur, info); };
  out.iterations = scheme.run(out.state, callback);
  const auto& s = out.state;
  const double dt = params.dt;
  const double tk = s.k * dt;
  out.errors["u"] = l2_error(asmb, s.u, mc.field("u"), tk);
  out.errors["omega"] = l2_error(asmb, s.omega, mc.field("omega"), tk);
  out.errors["B"] = l2_error(asmb, s.B, mc.field("B"), tk);
  out.errors["j"] = l2_error(asmb, s.j, mc.field("j"), tk);
  out.errors["H"] = l2_error(asmb, s.H, mc.field("H"), tk + 0.5 * dt);
  if (s.k > 0) {
    out.errors["P"] = l2_error(asmb, s.P, mc.pressure(), tk - 0.5 * dt);
    out.errors["E"] = l2_error(asmb, s.E, mc.field("E"), tk - 0.5 * dt);
  }
  if (reference_ratio)
    out.temporal_errors =
        temporal_distance(asmb, params, sources, solver, u0, B0, H0, s, reference_ratio);
  return out;
}

double fit_order(const std::vector<double>& steps, const std::vector<double>& errors) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (steps.size() != errors.size()) return nan;
  std::vector<double> lx, ly;
  std::set<double> distinct;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(errors[i])) return nan;
    lx.push_back(std::log(steps[i]));
    ly.push_back(std::log(errors[i]));
    distinct.insert(steps[i]);
  }
  if (distinct.size() < 2) return nan;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

void fit_orders(SweepResult& result) {
  result.orders.clear();
  result.temporal_orders.clear();
  if (result.reports.empty()) return;
  auto fit = [&](auto member) {
    std::map<std::string, double> orders;
    for (const auto& [name, _] : result.reports.front().*member) {
      std::vector<double> steps, errs;
      for (const auto& r : result.reports) {
        steps.push_back(result.axis == SweepAxis::temporal ? r.point.dt : 1.0 / r.point.K);
        const auto it = (r.*member).find(name);
        errs.push_back(it == (r.*member).end() ? std::numeric_limits<double>::quiet_NaN()
                                               : it->second);
      }
      orders[name] = fit_order(steps, errs);
    }
    return orders;
  };
  result.orders = fit(&ErrorReport::errors);
  result.temporal_orders = fit(&ErrorReport::temporal_errors);
}

SweepResult convergence_sweep(SweepAxis axis, const std::vector<SweepPoint>& grid,
                              const SchemeParams& params, const MmsOptions& options,
                              const std::function<void(const ErrorReport&)>& on_report) {
  SweepResult result;
  result.axis = axis;
  for (const auto& point : grid) {
    SchemeParams p = params;
    p.dt = point.dt;
    const MmsRun run = run_manufactured(point.N, point.K, p, options);
    result.reports.push_back({point, run.iterations, run.errors, run.temporal_errors});
    if (on_report) on_report(result.reports.back());
  }
  fit_orders(result);
  return result;
}

std::map<std::string, double> interpolation_orders(int N, const std::vector<int>& Ks,
                                                   const SchemeParams& params) {
  const double two_pi = 2.0 * std::numbers::pi;
  const ManufacturedCase mc(params);
  std::vector<double> steps, eu, eb;
  for (int K : Ks) {
    const HexMesh mesh = build_mesh(K, {Vec3::Zero(), Vec3::Constant(two_pi)}, {});
    const DeRhamComplex complex = build_complex(mesh, N);
    const Assembler asmb(complex);
    const double T = params.T;
    eu.push_back(asmb.l2_error(Space::D, asmb.interpolate(Space::D, mc.field("u"), T), mc.field("u"), T));
    eb.push_back(asmb.l2_error(Space::D, asmb.interpolate(Space::D, mc.field("B"), T), mc.field("B"), T));
    steps.push_back(1.0 / K);
  }
  return {{"u", fit_order(steps, eu)}, {"B", fit_order(steps, eb)}};
}

}  // namespace hallmhd
