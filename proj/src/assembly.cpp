#include "hallmhd/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hallmhd/errors.hpp"
#include "hallmhd/kernels.hpp"
#include "hallmhd/parallel.hpp"

namespace hallmhd {

namespace {

constexpr int kBatch = 256;

int idx(Space s) { return static_cast<int>(s); }

void store_soa(const Mat3& m, int p, int q, std::vector<double>& out) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[(r * 3 + c) * q + p] = m(r, c);
}

SparseMatrix symmetrized(const SparseMatrix& m, double sign) {
  SparseMatrix t = m.transpose();
  SparseMatrix out = 0.5 * (m + sign * t);
  out.makeCompressed();
  return out;
}

/// Gauss points/weights mapped to [a, b].
void segment_rule(const QuadratureRule& rule, double a, double b, std::vector<double>& x,
                  std::vector<double>& w) {
  const auto n = rule.size();
  x.resize(n);
  w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a + 0.5 * (b - a) * (1.0 + rule.points[i]);
    w[i] = 0.5 * (b - a) * rule.weights[i];
  }
}

}  // namespace

std::string_view to_string(TrilinearKind kind) {
  switch (kind) {
    case TrilinearKind::A_omega: return "A_omega";
    case TrilinearKind::A_H: return "A_H";
    case TrilinearKind::AA_H: return "AA_H";
    case TrilinearKind::A_u: return "A_u";
    case TrilinearKind::A_B: return "A_B";
  }
  return "?";
}

Assembler::Assembler(const DeRhamComplex& complex, AssemblyOptions options)
    : complex_(complex), options_(options) {
  const int N = complex.degree();
  if (options_.quadrature_points <= 0) options_.quadrature_points = N + 2;
  if (options_.interpolation_points <= 0) options_.interpolation_points = N + 6;
  rule_ = tensor_rule(gauss_rule(options_.quadrature_points));
  for (Space s : {Space::G, Space::C, Space::C0, Space::D, Space::S})
    reference_[idx(s)] = complex.reference_values(s, rule_.points);

  const auto& mesh = complex.mesh();
  const int ne = mesh.element_count();
  const int q = static_cast<int>(rule_.size());
  elements_.resize(ne);
  parallel_for(ne, [&](int e) {
    const ElementGeometry g = jacobian_data(mesh, e, rule_);
    ElementData& d = elements_[e];
    d.wdet.resize(q);
    d.inv_det.resize(q);
    d.inv_t.resize(9 * q);
    d.j_over_det.resize(9 * q);
    d.points = g.points;
    for (int p = 0; p < q; ++p) {
      d.wdet[p] = rule_.weights[p] * g.det[p];
      d.inv_det[p] = 1.0 / g.det[p];
      store_soa(g.inverse_transpose[p], p, q, d.inv_t);
      store_soa(g.jacobian[p] / g.det[p], p, q, d.j_over_det);
    }
  });

  const auto& k = kernels::active();
  for (Space s : {Space::G, Space::C, Space::C0, Space::D, Space::S}) {
    const int nb = complex.local_dimension(s);
    const int len = (is_vector_space(s) ? 3 : 1) * q;
    const int rows = is_vector_space(s) ? 3 * nb : nb;
    SparseMatrix m = assemble(s, s, [&, nb, len, rows](int e, double* out) {
      std::vector<double> a, w;
      mapped_values(s, e, a);
      w = a;
      k.scale(elements_[e].wdet.data(), w.data(), rows, q);
      k.gram(w.data(), nb, a.data(), nb, len, out);
    });
    mass_[idx(s)] = options_.exact_symmetry ? symmetrized(m, 1.0) : m;
  }
}

const SparseMatrix& Assembler::mass(Space space) const { return mass_[idx(space)]; }

const Assembler::Pattern& Assembler::pattern(Space rows, Space cols) const {
  std::lock_guard lock(pattern_mutex_);
  auto& slot = patterns_[{idx(rows), idx(cols)}];
  if (slot) return *slot;

  auto p = std::make_unique<Pattern>();
  const int ne = complex_.mesh().element_count();
  const int nr = complex_.local_dimension(rows), nc = complex_.local_dimension(cols);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(ne) * nr * nc);
  for (int e = 0; e < ne; ++e) {
    const auto rd = complex_.element_dofs(rows, e);
    const auto cd = complex_.element_dofs(cols, e);
    for (int r : rd)
      if (r >= 0)
        for (int c : cd)
          if (c >= 0) trip.emplace_back(r, c, 0.0);
  }
  p->matrix.resize(complex_.dimension(rows), complex_.dimension(cols));
  p->matrix.setFromTriplets(trip.begin(), trip.end());
  p->matrix.makeCompressed();

  const int* outer = p->matrix.outerIndexPtr();
  const int* inner = p->matrix.innerIndexPtr();
  p->slots.assign(static_cast<std::size_t>(ne) * nr * nc, -1);
  for (int e = 0; e < ne; ++e) {
    const auto rd = complex_.element_dofs(rows, e);
    const auto cd = complex_.element_dofs(cols, e);
    for (int i = 0; i < nr; ++i) {
      if (rd[i] < 0) continue;
      const int* begin = inner + outer[rd[i]];
      const int* end = inner + outer[rd[i] + 1];
      for (int j = 0; j < nc; ++j) {
        if (cd[j] < 0) continue;
        const int* hit = std::lower_bound(begin, end, cd[j]);
        p->slots[(static_cast<std::size_t>(e) * nr + i) * nc + j] = static_cast<int>(hit - inner);
      }
    }
  }
  slot = std::move(p);
  return *slot;
}

void Assembler::mapped_values(Space space, int element, std::vector<double>& out) const {
  const auto& k = kernels::active();
  const auto& d = elements_[element];
  const int q = static_cast<int>(rule_.size());
  const int nb = complex_.local_dimension(space);
  out = reference_[idx(space)];
  switch (space) {
    case Space::C:
    case Space::C0: k.transform3(d.inv_t.data(), out.data(), nb, q); break;
    case Space::D: k.transform3(d.j_over_det.data(), out.data(), nb, q); break;
    case Space::S: k.scale(d.inv_det.data(), out.data(), nb, q); break;
    case Space::G: break;
  }
}

void Assembler::frozen_values(const DiscreteField& field, int element,
                              std::vector<double>& out) const {
  const int q = static_cast<int>(rule_.size());
  const Space space = field.space == Space::C0 ? Space::C0 : field.space;
  const auto dofs = complex_.element_dofs(space, element);
  const auto& ref = reference_[idx(space)];
  out.assign(3 * q, 0.0);
  for (std::size_t b = 0; b < dofs.size(); ++b) {
    if (dofs[b] < 0) continue;
    const double c = field.coefficients[dofs[b]];
    if (c == 0.0) continue;
    const double* v = ref.data() + b * 3 * q;
    for (int i = 0; i < 3 * q; ++i) out[i] += c * v[i];
  }
  const auto& d = elements_[element];
  const auto& k = kernels::active();
  if (space == Space::D)
    k.transform3(d.j_over_det.data(), out.data(), 1, q);
  else
    k.transform3(d.inv_t.data(), out.data(), 1, q);
}

template <class LocalFn>
SparseMatrix Assembler::assemble(Space rows, Space cols, LocalFn&& local) const {
  const Pattern& p = pattern(rows, cols);
  SparseMatrix m = p.matrix;
  double* values = m.valuePtr();
  const int ne = complex_.mesh().element_count();
  const std::size_t block = static_cast<std::size_t>(complex_.local_dimension(rows)) *
                            complex_.local_dimension(cols);
  std::vector<double> buffer(block * std::min(ne, kBatch));
  for (int first = 0; first < ne; first += kBatch) {
    const int count = std::min(kBatch, ne - first);
    parallel_for(count, [&](int i) { local(first + i, buffer.data() + i * block); });
    // Serial merge in element order keeps the result independent of the thread count.
    for (int i = 0; i < count; ++i) {
      const int* slots = p.slots.data() + (first + i) * block;
      const double* vals = buffer.data() + i * block;
      for (std::size_t s = 0; s < block; ++s)
        if (slots[s] >= 0) values[slots[s]] += vals[s];
    }
  }
  return m;
}

template <class LocalFn>
Vector Assembler::assemble_vector(Space rows, LocalFn&& local) const {
  Vector v = Vector::Zero(complex_.dimension(rows));
  const int ne = complex_.mesh().element_count();
  const int nb = complex_.local_dimension(rows);
  std::vector<double> buffer(static_cast<std::size_t>(nb) * std::min(ne, kBatch));
  for (int first = 0; first < ne; first += kBatch) {
    const int count = std::min(kBatch, ne - first);
    parallel_for(count, [&](int i) { local(first + i, buffer.data() + i * nb); });
    for (int i = 0; i < count; ++i) {
      const auto dofs = complex_.element_dofs(rows, first + i);
      for (int b = 0; b < nb; ++b)
        if (dofs[b] >= 0) v[dofs[b]] += buffer[i * nb + b];
    }
  }
  return v;
}

SparseMatrix Assembler::trilinear(TrilinearKind kind, const DiscreteField& frozen) const {
  Space need_a = Space::D, need_b = Space::D, rows = Space::D, cols = Space::D;
  double sign = 1.0;
  switch (kind) {
    case TrilinearKind::A_omega: need_a = need_b = Space::C; cols = Space::D; break;
    case TrilinearKind::A_H: need_a = Space::C0; need_b = Space::C; cols = Space::C; sign = -1.0; break;
    case TrilinearKind::AA_H:
      need_a = Space::C0; need_b = Space::C; rows = cols = Space::C; sign = -1.0; break;
    case TrilinearKind::A_u: cols = Space::C0; break;
    case TrilinearKind::A_B: cols = Space::C0; sign = -1.0; break;
  }
  if (frozen.space != need_a && frozen.space != need_b)
    throw SpaceMismatch(std::string(to_string(kind)) + " needs a frozen field in " +
                        std::string(to_string(need_a)) + ", got " +
                        std::string(to_string(frozen.space)));
  if (frozen.coefficients.size() != complex_.dimension(frozen.space))
    throw ShapeMismatch(std::string(to_string(kind)) + ": frozen coefficient length mismatch");

  const auto& k = kernels::active();
  const int q = static_cast<int>(rule_.size());
  const int nr = complex_.local_dimension(rows), nc = complex_.local_dimension(cols);
  SparseMatrix m = assemble(rows, cols, [&](int e, double* out) {
    std::vector<double> f, test, trial, w(q), cross(static_cast<std::size_t>(nc) * 3 * q);
    frozen_values(frozen, e, f);
    mapped_values(rows, e, test);
    if (cols == rows)
      trial = test;
    else
      mapped_values(cols, e, trial);
    const auto& wdet = elements_[e].wdet;
    for (int p = 0; p < q; ++p) w[p] = sign * wdet[p];
    k.cross_scaled(f.data(), w.data(), trial.data(), nc, q, cross.data());
    k.gram(test.data(), nr, cross.data(), nc, 3 * q, out);
  });
  if (options_.exact_symmetry && (kind == TrilinearKind::A_omega || kind == TrilinearKind::AA_H))
    m = symmetrized(m, -1.0);
  m.prune(0.0, 0.0);
  return m;
}

Vector Assembler::moments(Space test, const VectorField& f, double t) const {
  if (!is_vector_space(test)) throw SpaceMismatch("vector moments need C, C0 or D");
  const auto& k = kernels::active();
  const int q = static_cast<int>(rule_.size());
  const int nb = complex_.local_dimension(test);
  return assemble_vector(test, [&](int e, double* out) {
    std::vector<double> a, fv(3 * q);
    mapped_values(test, e, a);
    const auto& d = elements_[e];
    for (int p = 0; p < q; ++p) {
      const Vec3 v = f(d.points[p], t) * d.wdet[p];
      for (int c = 0; c < 3; ++c) fv[c * q + p] = v[c];
    }
    k.gram(a.data(), nb, fv.data(), 1, 3 * q, out);
  });
}

Vector Assembler::moments(Space test, const ScalarField& g, double t) const {
  if (is_vector_space(test)) throw SpaceMismatch("scalar moments need G or S");
  const auto& k = kernels::active();
  const int q = static_cast<int>(rule_.size());
  const int nb = complex_.local_dimension(test);
  return assemble_vector(test, [&](int e, double* out) {
    std::vector<double> a, gv(q);
    mapped_values(test, e, a);
    const auto& d = elements_[e];
    for (int p = 0; p < q; ++p) gv[p] = g(d.points[p], t) * d.wdet[p];
    k.gram(a.data(), nb, gv.data(), 1, q, out);
  });
}

Vector Assembler::interpolate(Space space, const VectorField& f, double t) const {
  if (space == Space::C0) return complex_.restrict_to_c0(interpolate(Space::C, f, t));
  if (space != Space::C && space != Space::D)
    throw SpaceMismatch("vector interpolation needs C, C0 or D");
  const auto& mesh = complex_.mesh();
  const auto& L = complex_.lattice_nodes();
  const QuadratureRule rule = gauss_rule(options_.interpolation_points);
  Vector out(complex_.dimension(space));
  for (const auto& comp : complex_.components(space)) {
    const auto ext = comp.global_extent;
    const int d = comp.direction;
    const int count = ext[0] * ext[1] * ext[2];
    parallel_for(count, [&](int flat) {
      const std::array<int, 3> p{flat % ext[0], (flat / ext[0]) % ext[1], flat / (ext[0] * ext[1])};
      std::array<std::vector<double>, 3> x, w;
      for (int a = 0; a < 3; ++a) {
        if (comp.kinds[a] == AxisKind::edge)
          segment_rule(rule, L[p[a]], L[p[a] + 1], x[a], w[a]);
        else {
          x[a] = {L[p[a]]};
          w[a] = {1.0};
        }
      }
      const int a1 = (d + 1) % 3, a2 = (d + 2) % 3;
      double sum = 0.0;
      for (std::size_t k = 0; k < x[2].size(); ++k)
        for (std::size_t j = 0; j < x[1].size(); ++j)
          for (std::size_t i = 0; i < x[0].size(); ++i) {
            const Vec3 r(x[0][i], x[1][j], x[2][k]);
            const Mat3 J = mesh.reference_jacobian(r);
            const Vec3 v = f(mesh.map_reference(r), t);
            const double weight = w[0][i] * w[1][j] * w[2][k];
            if (space == Space::C)
              sum += weight * v.dot(J.col(d));
            else
              sum += weight * v.dot(J.col(a1).cross(J.col(a2)));
          }
      out[comp.global_index(p[0], p[1], p[2])] = sum;
    });
  }
  return out;
}

Vector Assembler::interpolate(Space space, const ScalarField& g, double t) const {
  if (space != Space::G && space != Space::S)
    throw SpaceMismatch("scalar interpolation needs G or S");
  const auto& mesh = complex_.mesh();
  const auto& L = complex_.lattice_nodes();
  const auto& comp = complex_.components(space).front();
  const auto ext = comp.global_extent;
  const QuadratureRule rule = gauss_rule(options_.interpolation_points);
  Vector out(complex_.dimension(space));
  parallel_for(ext[0] * ext[1] * ext[2], [&](int flat) {
    const std::array<int, 3> p{flat % ext[0], (flat / ext[0]) % ext[1], flat / (ext[0] * ext[1])};
    if (space == Space::G) {
      const Vec3 r(L[p[0]], L[p[1]], L[p[2]]);
      out[flat] = g(mesh.map_reference(r), t);
      return;
    }
    std::array<std::vector<double>, 3> x, w;
    for (int a = 0; a < 3; ++a) segment_rule(rule, L[p[a]], L[p[a] + 1], x[a], w[a]);
    double sum = 0.0;
    for (std::size_t k = 0; k < x[2].size(); ++k)
      for (std::size_t j = 0; j < x[1].size(); ++j)
        for (std::size_t i = 0; i < x[0].size(); ++i) {
          const Vec3 r(x[0][i], x[1][j], x[2][k]);
          sum += w[0][i] * w[1][j] * w[2][k] * g(mesh.map_reference(r), t) *
                 mesh.reference_jacobian(r).determinant();
        }
    out[flat] = sum;
  });
  return out;
}

Vector Assembler::interpolate_curl(const VectorField& potential, double t) const {
  return complex_.curl() * interpolate(Space::C, potential, t);
}

Vec3 Assembler::evaluate(Space space, const Vector& coefficients, int element,
                         const Vec3& xi) const {
  if (!is_vector_space(space)) throw SpaceMismatch("evaluate needs a vector space");
  const Vec3 pts[1] = {xi};
  const auto ev = evaluate_basis(complex_, space, element, pts);
  const auto dofs = complex_.element_dofs(space, element);
  Vec3 v = Vec3::Zero();
  for (int b = 0; b < ev.count; ++b)
    if (dofs[b] >= 0) v += coefficients[dofs[b]] * ev.vector_value(b, 0);
  return v;
}

double Assembler::evaluate_scalar(Space space, const Vector& coefficients, int element,
                                  const Vec3& xi) const {
  if (is_vector_space(space)) throw SpaceMismatch("evaluate_scalar needs G or S");
  const Vec3 pts[1] = {xi};
  const auto ev = evaluate_basis(complex_, space, element, pts);
  const auto dofs = complex_.element_dofs(space, element);
  double v = 0.0;
  for (int b = 0; b < ev.count; ++b) v += coefficients[dofs[b]] * ev.scalar_value(b, 0);
  return v;
}

double Assembler::l2_error(Space space, const Vector& coefficients, const VectorField& exact,
                           double t, int points) const {
  if (!is_vector_space(space)) throw SpaceMismatch("vector l2_error needs C, C0 or D");
  if (coefficients.size() != complex_.dimension(space))
    throw ShapeMismatch("l2_error: coefficient length mismatch");
  const TensorRule rule = tensor_rule(gauss_rule(points > 0 ? points : complex_.degree() + 4));
  const auto ref = complex_.reference_values(space, rule.points);
  const int q = static_cast<int>(rule.size());
  const auto& mesh = complex_.mesh();
  std::vector<double> partial(mesh.element_count(), 0.0);
  parallel_for(mesh.element_count(), [&](int e) {
    const ElementGeometry g = jacobian_data(mesh, e, rule);
    const auto dofs = complex_.element_dofs(space, e);
    std::vector<double> f(3 * q, 0.0);
    for (std::size_t b = 0; b < dofs.size(); ++b) {
      if (dofs[b] < 0) continue;
      const double c = coefficients[dofs[b]];
      for (int i = 0; i < 3 * q; ++i) f[i] += c * ref[b * 3 * q + i];
    }
    double sum = 0.0;
    for (int p = 0; p < q; ++p) {
      const Vec3 r(f[p], f[q + p], f[2 * q + p]);
      const Vec3 v = space == Space::D ? Vec3(g.jacobian[p] * r / g.det[p])
                                       : Vec3(g.inverse_transpose[p] * r);
      sum += rule.weights[p] * g.det[p] * (v - exact(g.points[p], t)).squaredNorm();
    }
    partial[e] = sum;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return std::sqrt(total);
}

double Assembler::l2_error(Space space, const Vector& coefficients, const ScalarField& exact,
                           double t, int points) const {
  if (is_vector_space(space)) throw SpaceMismatch("scalar l2_error needs G or S");
  if (coefficients.size() != complex_.dimension(space))
    throw ShapeMismatch("l2_error: coefficient length mismatch");
  const TensorRule rule = tensor_rule(gauss_rule(points > 0 ? points : complex_.degree() + 4));
  const auto ref = complex_.reference_values(space, rule.points);
  const int q = static_cast<int>(rule.size());
  const auto& mesh = complex_.mesh();
  std::vector<double> partial(mesh.element_count(), 0.0);
  parallel_for(mesh.element_count(), [&](int e) {
    const ElementGeometry g = jacobian_data(mesh, e, rule);
    const auto dofs = complex_.element_dofs(space, e);
    double sum = 0.0;
    for (int p = 0; p < q; ++p) {
      double v = 0.0;
      for (std::size_t b = 0; b < dofs.size(); ++b) v += coefficients[dofs[b]] * ref[b * q + p];
      if (space == Space::S) v /= g.det[p];
      const double diff = v - exact(g.points[p], t);
      sum += rule.weights[p] * g.det[p] * diff * diff;
    }
    partial[e] = sum;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return std::sqrt(total);
}

SparseMatrix mass_matrix(const Assembler& assembler, Space space) { return assembler.mass(space); }

SparseMatrix trilinear_matrix(const Assembler& assembler, TrilinearKind kind,
                              const DiscreteField& frozen) {
  return assembler.trilinear(kind, frozen);
}

Vector load_vector(const Assembler& assembler, const VectorField& f, double t) {
  return assembler.moments(Space::D, f, t);
}

DiscreteField interpolate(const Assembler& assembler, Space space, const VectorField& f,
                          double t) {
  return {space, assembler.interpolate(space, f, t), 0};
}

DiscreteField interpolate(const Assembler& assembler, Space space, const ScalarField& g,
                          double t) {
  return {space, assembler.interpolate(space, g, t), 0};
}

}  // namespace hallmhd
