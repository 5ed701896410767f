#include "hallmhd/complex.hpp"

#include <stdexcept>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

int base_index(Space space) {
  switch (space) {
    case Space::G: return 0;
    case Space::C:
    case Space::C0: return 1;
    case Space::D: return 2;
    case Space::S: return 3;
  }
  return 0;
}

using Triplets = std::vector<Eigen::Triplet<int>>;

IntSparse from_triplets(int rows, int cols, const Triplets& t) {
  IntSparse m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.prune([](int, int, int v) { return v != 0; });
  m.makeCompressed();
  return m;
}

}  // namespace

std::string_view to_string(Space space) {
  switch (space) {
    case Space::G: return "G";
    case Space::C: return "C";
    case Space::C0: return "C0";
    case Space::D: return "D";
    case Space::S: return "S";
  }
  return "?";
}

bool is_vector_space(Space space) {
  return space == Space::C || space == Space::C0 || space == Space::D;
}

DeRhamComplex::DeRhamComplex(const HexMesh& mesh, int degree)
    : mesh_(mesh), degree_(degree), basis_(degree) {
  build_components();
  build_dof_tables();
  build_incidence();
}

void DeRhamComplex::build_components() {
  const int N = degree_;
  const int n = N * mesh_.elements_per_axis();
  const int m = n + 1;
  auto make = [&](std::array<AxisKind, 3> kinds, int direction) {
    Component c;
    c.kinds = kinds;
    c.direction = direction;
    for (int a = 0; a < 3; ++a) {
      c.local_extent[a] = kinds[a] == AxisKind::node ? N + 1 : N;
      c.global_extent[a] = kinds[a] == AxisKind::node ? m : n;
    }
    return c;
  };
  constexpr auto nd = AxisKind::node;
  constexpr auto ed = AxisKind::edge;
  comps_[0] = {make({nd, nd, nd}, -1)};
  comps_[1] = {make({ed, nd, nd}, 0), make({nd, ed, nd}, 1), make({nd, nd, ed}, 2)};
  comps_[2] = {make({nd, ed, ed}, 0), make({ed, nd, ed}, 1), make({ed, ed, nd}, 2)};
  comps_[3] = {make({ed, ed, ed}, -1)};
  for (int s = 0; s < 4; ++s) {
    int local = 0, global = 0;
    for (auto& c : comps_[s]) {
      c.local_offset = local;
      c.global_offset = global;
      local += c.local_extent[0] * c.local_extent[1] * c.local_extent[2];
      global += c.global_extent[0] * c.global_extent[1] * c.global_extent[2];
    }
    local_dims_[s] = local;
    dims_[s] = global;
  }

  lattice_.resize(m);
  const int K = mesh_.elements_per_axis();
  for (int e = 0; e < K; ++e)
    for (int i = 0; i <= N; ++i) lattice_[e * N + i] = (e + basis_.nodes()[i]) / K;
  lattice_.back() = 1.0;

  // Boundary-tangential C DOFs: node index on a transverse axis sits on 0 or n.
  boundary_.assign(dims_[1], false);
  for (const auto& c : comps_[1]) {
    const auto& ext = c.global_extent;
    for (int k = 0; k < ext[2]; ++k)
      for (int j = 0; j < ext[1]; ++j)
        for (int i = 0; i < ext[0]; ++i) {
          const std::array<int, 3> p{i, j, k};
          bool on_boundary = false;
          for (int a = 0; a < 3; ++a)
            if (a != c.direction && (p[a] == 0 || p[a] == n)) on_boundary = true;
          boundary_[c.global_index(i, j, k)] = on_boundary;
        }
  }
  c_to_c0_.assign(dims_[1], -1);
  c0_to_c_.clear();
  for (int i = 0; i < dims_[1]; ++i)
    if (!boundary_[i]) {
      c_to_c0_[i] = static_cast<int>(c0_to_c_.size());
      c0_to_c_.push_back(i);
    }
}

void DeRhamComplex::build_dof_tables() {
  const int N = degree_;
  const int ne = mesh_.element_count();
  for (int s = 0; s < 4; ++s) {
    const int nl = local_dims_[s];
    auto& table = tables_[s == 0 ? 0 : s == 1 ? 1 : s == 2 ? 3 : 4];
    table.assign(static_cast<std::size_t>(ne) * nl, -1);
    for (int e = 0; e < ne; ++e) {
      const auto ec = mesh_.element_coords(e);
      for (const auto& c : comps_[s])
        for (int k = 0; k < c.local_extent[2]; ++k)
          for (int j = 0; j < c.local_extent[1]; ++j)
            for (int i = 0; i < c.local_extent[0]; ++i)
              table[static_cast<std::size_t>(e) * nl + c.local_index(i, j, k)] =
                  c.global_index(ec[0] * N + i, ec[1] * N + j, ec[2] * N + k);
    }
  }
  const auto& ctab = tables_[1];
  auto& c0tab = tables_[2];
  c0tab.resize(ctab.size());
  for (std::size_t i = 0; i < ctab.size(); ++i) c0tab[i] = c_to_c0_[ctab[i]];
}

void DeRhamComplex::build_incidence() {
  const auto& G = comps_[0][0];
  const auto& Cc = comps_[1];
  const auto& Dc = comps_[2];
  const auto& S = comps_[3][0];
  auto shift = [](std::array<int, 3> p, int axis) {
    ++p[axis];
    return p;
  };
  auto at = [](const Component& c, const std::array<int, 3>& p) {
    return c.global_index(p[0], p[1], p[2]);
  };

  Triplets tg, tc, td;
  for (int d = 0; d < 3; ++d) {
    const auto& c = Cc[d];
    for (int k = 0; k < c.global_extent[2]; ++k)
      for (int j = 0; j < c.global_extent[1]; ++j)
        for (int i = 0; i < c.global_extent[0]; ++i) {
          const std::array<int, 3> p{i, j, k};
          const int row = at(c, p);
          tg.emplace_back(row, at(G, shift(p, d)), 1);
          tg.emplace_back(row, at(G, p), -1);
        }
  }
  for (int d = 0; d < 3; ++d) {
    const int a = (d + 1) % 3, b = (d + 2) % 3;
    const auto& f = Dc[d];
    for (int k = 0; k < f.global_extent[2]; ++k)
      for (int j = 0; j < f.global_extent[1]; ++j)
        for (int i = 0; i < f.global_extent[0]; ++i) {
          const std::array<int, 3> p{i, j, k};
          const int row = at(f, p);
          // (curl)_d = d_a C_b - d_b C_a
          tc.emplace_back(row, at(Cc[b], shift(p, a)), 1);
          tc.emplace_back(row, at(Cc[b], p), -1);
          tc.emplace_back(row, at(Cc[a], shift(p, b)), -1);
          tc.emplace_back(row, at(Cc[a], p), 1);
        }
  }
  for (int k = 0; k < S.global_extent[2]; ++k)
    for (int j = 0; j < S.global_extent[1]; ++j)
      for (int i = 0; i < S.global_extent[0]; ++i) {
        const std::array<int, 3> p{i, j, k};
        const int row = at(S, p);
        for (int d = 0; d < 3; ++d) {
          td.emplace_back(row, at(Dc[d], shift(p, d)), 1);
          td.emplace_back(row, at(Dc[d], p), -1);
        }
      }
  incidence_.grad = from_triplets(dims_[1], dims_[0], tg);
  incidence_.curl = from_triplets(dims_[2], dims_[1], tc);
  incidence_.div = from_triplets(dims_[3], dims_[2], td);

  Triplets tc0;
  for (int r = 0; r < incidence_.curl.outerSize(); ++r)
    for (IntSparse::InnerIterator it(incidence_.curl, r); it; ++it)
      if (const int col = c_to_c0_[it.col()]; col >= 0) tc0.emplace_back(r, col, it.value());
  incidence_.curl0 = from_triplets(dims_[2], static_cast<int>(c0_to_c_.size()), tc0);

  grad_ = incidence_.grad.cast<double>();
  curl_ = incidence_.curl.cast<double>();
  div_ = incidence_.div.cast<double>();
  curl0_ = incidence_.curl0.cast<double>();
  IntSparse dc = incidence_.div * incidence_.curl0;
  dc.prune([](int, int, int v) { return v != 0; });
  div_curl0_ = dc.cast<double>();
}

int DeRhamComplex::dimension(Space space) const {
  if (space == Space::C0) return static_cast<int>(c0_to_c_.size());
  return dims_[base_index(space)];
}

int DeRhamComplex::local_dimension(Space space) const { return local_dims_[base_index(space)]; }

const std::vector<Component>& DeRhamComplex::components(Space space) const {
  return comps_[base_index(space)];
}

std::span<const int> DeRhamComplex::element_dofs(Space space, int element) const {
  const auto nl = static_cast<std::size_t>(local_dimension(space));
  const auto& t = tables_[static_cast<int>(space)];
  return {t.data() + static_cast<std::size_t>(element) * nl, nl};
}

Vector DeRhamComplex::restrict_to_c0(const Vector& c) const {
  if (c.size() != dims_[1]) throw SpaceMismatch("restrict_to_c0: vector is not a C field");
  Vector out(c0_to_c_.size());
  for (std::size_t i = 0; i < c0_to_c_.size(); ++i) out[i] = c[c0_to_c_[i]];
  return out;
}

Vector DeRhamComplex::embed_c0(const Vector& c0) const {
  if (c0.size() != static_cast<Eigen::Index>(c0_to_c_.size()))
    throw SpaceMismatch("embed_c0: vector is not a C0 field");
  Vector out = Vector::Zero(dims_[1]);
  for (std::size_t i = 0; i < c0_to_c_.size(); ++i) out[c0_to_c_[i]] = c0[i];
  return out;
}

std::vector<double> DeRhamComplex::reference_values(Space space,
                                                    std::span<const Vec3> points) const {
  const int N = degree_;
  const auto P = points.size();
  const int nb = local_dimension(space);
  const bool vec = is_vector_space(space);
  std::vector<double> out(static_cast<std::size_t>(nb) * (vec ? 3 : 1) * P, 0.0);
  std::vector<double> h(3 * (N + 1)), e(3 * N);
  for (std::size_t p = 0; p < P; ++p) {
    for (int a = 0; a < 3; ++a) {
      basis_.eval_nodes(points[p][a], &h[a * (N + 1)]);
      basis_.eval_edges(points[p][a], &e[a * N]);
    }
    for (const auto& c : components(space)) {
      const double* f[3];
      for (int a = 0; a < 3; ++a) f[a] = c.kinds[a] == AxisKind::node ? &h[a * (N + 1)] : &e[a * N];
      for (int k = 0; k < c.local_extent[2]; ++k)
        for (int j = 0; j < c.local_extent[1]; ++j)
          for (int i = 0; i < c.local_extent[0]; ++i) {
            const int b = c.local_index(i, j, k);
            const double v = f[0][i] * f[1][j] * f[2][k];
            const std::size_t row = vec ? static_cast<std::size_t>(b) * 3 + c.direction : b;
            out[row * P + p] = v;
          }
    }
  }
  return out;
}

DeRhamComplex build_complex(const HexMesh& mesh, int degree) {
  if (degree < 1) throw std::invalid_argument("build_complex: degree must be >= 1");
  return DeRhamComplex(mesh, degree);
}

IncidenceMatrices incidence_matrices(const DeRhamComplex& complex) { return complex.incidence(); }

DiscreteField restrict_boundary(const DeRhamComplex& complex, const DiscreteField& field) {
  if (field.space != Space::C)
    throw SpaceMismatch("restrict_boundary expects a C field, got " +
                        std::string(to_string(field.space)));
  return {Space::C0, complex.restrict_to_c0(field.coefficients), field.half_steps};
}

DiscreteField embed_boundary(const DeRhamComplex& complex, const DiscreteField& field) {
  if (field.space != Space::C0)
    throw SpaceMismatch("embed_boundary expects a C0 field, got " +
                        std::string(to_string(field.space)));
  return {Space::C, complex.embed_c0(field.coefficients), field.half_steps};
}

BasisEvaluation evaluate_basis(const DeRhamComplex& complex, Space space, int element,
                               std::span<const Vec3> points) {
  BasisEvaluation ev;
  ev.space = space;
  ev.count = complex.local_dimension(space);
  ev.points = static_cast<int>(points.size());
  ev.is_vector = is_vector_space(space);
  ev.values = complex.reference_values(space, points);
  const auto& mesh = complex.mesh();
  const auto P = points.size();
  for (std::size_t p = 0; p < P; ++p) {
    const Mat3 J = mesh.jacobian(element, points[p]);
    const double det = J.determinant();
    if (space == Space::G) continue;
    if (space == Space::S) {
      for (int b = 0; b < ev.count; ++b) ev.values[b * P + p] /= det;
      continue;
    }
    const Mat3 T = (space == Space::D) ? Mat3(J / det) : Mat3(J.inverse().transpose());
    for (int b = 0; b < ev.count; ++b) {
      Vec3 v(ev.values[(b * 3 + 0) * P + p], ev.values[(b * 3 + 1) * P + p],
             ev.values[(b * 3 + 2) * P + p]);
      const Vec3 w = T * v;
      for (int d = 0; d < 3; ++d) ev.values[(b * 3 + d) * P + p] = w[d];
    }
  }
  return ev;
}

}  // namespace hallmhd
