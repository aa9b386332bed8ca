#include "smoothsc/reference_element.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

#include <Eigen/LU>

#include "smoothsc/quadrature.hpp"
#include "smoothsc/topology.hpp"

namespace smoothsc {

namespace rt = reference_topology;

Eigen::Vector3d reference_vertex(int dim, int v) {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  if (v > 0 && v <= dim) x[v - 1] = 1.0;
  return x;
}

MonomialSet::MonomialSet(int dim, int degree) : dim_(dim) {
  for (int total = 0; total <= degree; ++total)
    for (int c = 0; c <= (dim == 3 ? total : 0); ++c)
      for (int b = 0; b <= total - c; ++b) exps_.push_back({total - b - c, b, c});
}

void MonomialSet::eval(const Eigen::Vector3d& x, Eigen::VectorXd& v, Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) const {
  int maxdeg = 0;
  for (const auto& e : exps_) maxdeg = std::max(maxdeg, e[0] + e[1] + e[2]);
  // pw[k][p] = x_k^p
  std::array<std::array<double, 16>, 3> pw{};
  for (int k = 0; k < 3; ++k) {
    pw[k][0] = 1.0;
    for (int p = 1; p <= maxdeg; ++p) pw[k][p] = pw[k][p - 1] * x[k];
  }
  auto power = [&](int k, int p) { return p < 0 ? 0.0 : pw[k][p]; };
  const int n = size();
  v.resize(n);
  if (d1) d1->setZero(3, n);
  if (d2) d2->setZero(9, n);
  for (int i = 0; i < n; ++i) {
    const auto& e = exps_[i];
    v[i] = power(0, e[0]) * power(1, e[1]) * power(2, e[2]);
    if (d1) {
      for (int k = 0; k < dim_; ++k) {
        if (e[k] == 0) continue;
        double val = e[k];
        for (int l = 0; l < 3; ++l) val *= power(l, e[l] - (l == k ? 1 : 0));
        (*d1)(k, i) = val;
      }
    }
    if (d2) {
      for (int k = 0; k < dim_; ++k)
        for (int l = 0; l < dim_; ++l) {
          std::array<int, 3> f = e;
          double c = f[k];
          f[k] -= 1;
          c *= f[l];
          f[l] -= 1;
          if (c == 0.0) continue;
          (*d2)(k + 3 * l, i) = c * power(0, f[0]) * power(1, f[1]) * power(2, f[2]);
        }
    }
  }
}

LagrangeElement::LagrangeElement(int dim, int degree) : ReferenceElement(dim, degree), mono_(dim, degree) {
  if ((dim == 2 && (degree < 1 || degree > 5)) || (dim == 3 && (degree < 1 || degree > 3)))
    throw std::invalid_argument("Lagrange element of degree " + std::to_string(degree) + " in " +
                                std::to_string(dim) + "D is not supported");
  const int k = degree;
  const double h = 1.0 / k;
  auto X = [&](int v) { return reference_vertex(dim, v); };
  for (int v = 0; v <= dim; ++v) {
    nodes_.push_back(X(v));
    dofs_.push_back({0, v, 0});
  }
  per_entity_[0] = 1;
  for (int e = 0; e < rt::num_edges(dim); ++e) {
    const auto le = rt::edge(dim, e);
    for (int j = 1; j < k; ++j) {
      nodes_.push_back(X(le[0]) + j * h * (X(le[1]) - X(le[0])));
      dofs_.push_back({1, e, j - 1});
    }
  }
  per_entity_[1] = k - 1;
  const int nfaces = dim == 2 ? 1 : 4;
  for (int f = 0; f < nfaces; ++f) {
    const std::array<int, 3> lf = dim == 2 ? std::array<int, 3>{0, 1, 2} : rt::tet_faces[f];
    int idx = 0;
    for (int ic = 1; ic <= k - 2; ++ic)
      for (int ib = 1; ib <= k - 1 - ic; ++ib) {
        nodes_.push_back(X(lf[0]) + ib * h * (X(lf[1]) - X(lf[0])) + ic * h * (X(lf[2]) - X(lf[0])));
        dofs_.push_back({2, f, idx++});
      }
    per_entity_[2] = idx;
  }
  if (dim == 3) {
    int idx = 0;
    for (int i3 = 1; i3 <= k - 3; ++i3)
      for (int i2 = 1; i2 <= k - 2 - i3; ++i2)
        for (int i1 = 1; i1 <= k - 1 - i2 - i3; ++i1) {
          nodes_.emplace_back(i1 * h, i2 * h, i3 * h);
          dofs_.push_back({3, 0, idx++});
        }
    per_entity_[3] = idx;
  }
  const int n = static_cast<int>(nodes_.size());
  if (n != mono_.size()) throw std::logic_error("Lagrange node count mismatch");
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd m;
  for (int i = 0; i < n; ++i) {
    mono_.eval(nodes_[i], m, nullptr, nullptr);
    V.row(i) = m.transpose();
  }
  coef_ = V.fullPivLu().inverse();
}

Tabulation LagrangeElement::tabulate(const std::vector<Eigen::Vector3d>& points, bool hessians) const {
  Tabulation t;
  Eigen::VectorXd m;
  Eigen::MatrixXd d1, d2;
  for (const auto& x : points) {
    mono_.eval(x, m, &d1, hessians ? &d2 : nullptr);
    t.value.push_back(m.transpose() * coef_);
    t.grad.push_back(d1 * coef_);
    if (hessians) t.hess.push_back(d2 * coef_);
  }
  return t;
}

NedelecElement::NedelecElement(int degree) : ReferenceElement(3, degree), mono_(3, degree) {
  if (degree < 1 || degree > 2) throw std::invalid_argument("Nedelec element supports degrees 1 and 2");
  const int nm = mono_.size();
  auto mono_index = [&](int a, int b, int c) {
    for (int i = 0; i < nm; ++i)
      if (mono_.exponent(i) == std::array<int, 3>{a, b, c}) return i;
    throw std::logic_error("monomial not found");
  };
  // Candidate spanning set, one column per function, component-major rows.
  std::vector<Eigen::VectorXd> cand;
  auto unit_exp = [](int i) {
    std::array<int, 3> e{0, 0, 0};
    e[i] = 1;
    return e;
  };
  // x cross e_j = (e_j-th column of the cross-product matrix): components
  // (x x e_j)_c = sum_i eps(c,i,j) x_i
  auto eps = [](int c, int i, int j) {
    if (c == i || i == j || c == j) return 0;
    return ((c + 1) % 3 == i) ? 1 : -1;
  };
  if (degree == 1) {
    for (int c = 0; c < 3; ++c) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(3 * nm);
      v[c * nm + mono_index(0, 0, 0)] = 1.0;
      cand.push_back(v);
    }
    for (int j = 0; j < 3; ++j) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(3 * nm);
      for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 3; ++i) {
          const int s = eps(c, i, j);
          if (s == 0) continue;
          const auto e = unit_exp(i);
          v[c * nm + mono_index(e[0], e[1], e[2])] += s;
        }
      cand.push_back(v);
    }
  } else {
    for (int c = 0; c < 3; ++c)
      for (int i = -1; i < 3; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(3 * nm);
        if (i < 0)
          v[c * nm + mono_index(0, 0, 0)] = 1.0;
        else {
          const auto e = unit_exp(i);
          v[c * nm + mono_index(e[0], e[1], e[2])] = 1.0;
        }
        cand.push_back(v);
      }
    for (int l = 0; l < 3; ++l)
      for (int j = 0; j < 3; ++j) {
        if (l == 2 && j == 2) continue;  // sum_l x_l (x x e_l) = 0
        Eigen::VectorXd v = Eigen::VectorXd::Zero(3 * nm);
        for (int c = 0; c < 3; ++c)
          for (int i = 0; i < 3; ++i) {
            const int s = eps(c, i, j);
            if (s == 0) continue;
            std::array<int, 3> e{0, 0, 0};
            e[i] += 1;
            e[l] += 1;
            v[c * nm + mono_index(e[0], e[1], e[2])] += s;
          }
        cand.push_back(v);
      }
  }

  auto X = [](int v) { return reference_vertex(3, v); };
  const QuadratureRule q1 = make_quadrature(1, 4);
  for (int e = 0; e < 6; ++e) {
    const auto le = rt::tet_edges[e];
    for (int q = 0; q < degree; ++q) {
      std::vector<MomentTerm> terms;
      for (std::size_t p = 0; p < q1.size(); ++p) {
        const double s = q1.points[p][0];
        const double leg = q == 0 ? 1.0 : 2.0 * s - 1.0;
        terms.push_back({X(le[0]) + s * (X(le[1]) - X(le[0])), q1.weights[p] * leg, le[0], le[1]});
      }
      functionals_.push_back(std::move(terms));
      dofs_.push_back({1, e, q});
    }
  }
  per_entity_[1] = degree;
  if (degree == 2) {
    const QuadratureRule q2 = make_quadrature(2, 2);
    for (int f = 0; f < 4; ++f) {
      const auto lf = rt::tet_faces[f];
      for (int l = 0; l < 2; ++l) {
        std::vector<MomentTerm> terms;
        for (std::size_t p = 0; p < q2.size(); ++p) {
          const Eigen::Vector3d x =
              X(lf[0]) + q2.points[p][0] * (X(lf[1]) - X(lf[0])) + q2.points[p][1] * (X(lf[2]) - X(lf[0]));
          terms.push_back({x, q2.weights[p], lf[0], lf[1 + l]});
        }
        functionals_.push_back(std::move(terms));
        dofs_.push_back({2, f, l});
      }
    }
    per_entity_[2] = 2;
  }

  const int n = static_cast<int>(cand.size());
  if (n != static_cast<int>(dofs_.size())) throw std::logic_error("Nedelec dof count mismatch");
  Eigen::MatrixXd C(3 * nm, n);
  for (int j = 0; j < n; ++j) C.col(j) = cand[j];
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd m;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (const auto& t : functionals_[i]) {
      mono_.eval(t.point, m, nullptr, nullptr);
      const Eigen::Vector3d tangent = X(t.to) - X(t.from);
      for (int j = 0; j < n; ++j) {
        double dot = 0.0;
        for (int c = 0; c < 3; ++c) dot += tangent[c] * m.dot(C.col(j).segment(c * nm, nm));
        row[j] += t.weight * dot;
      }
    }
    V.row(i) = row.transpose();
  }
  coef_ = C * V.fullPivLu().inverse();
}

Tabulation NedelecElement::tabulate(const std::vector<Eigen::Vector3d>& points, bool) const {
  Tabulation t;
  const int nm = mono_.size();
  const int n = num_dofs();
  Eigen::VectorXd m;
  Eigen::MatrixXd d1;
  for (const auto& x : points) {
    mono_.eval(x, m, &d1, nullptr);
    Eigen::MatrixXd val(3, n), curl(3, n);
    // grads(k, c, i) = d/dx_k of component c of basis i
    std::array<Eigen::MatrixXd, 3> g;
    for (int c = 0; c < 3; ++c) {
      const auto block = coef_.middleRows(c * nm, nm);
      val.row(c) = m.transpose() * block;
      g[c] = d1 * block;  // 3 x n
    }
    curl.row(0) = g[2].row(1) - g[1].row(2);
    curl.row(1) = g[0].row(2) - g[2].row(0);
    curl.row(2) = g[1].row(0) - g[0].row(1);
    t.value.push_back(val);
    t.curl.push_back(curl);
  }
  return t;
}

std::shared_ptr<const ReferenceElement> get_element(Family family, int dim, int degree) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const ReferenceElement>> cache;
  const int fam = family == Family::nedelec1 ? 1 : 0;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(fam, dim, degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const ReferenceElement> el;
  if (family == Family::nedelec1) {
    if (dim != 3) throw std::invalid_argument("Nedelec elements are only available in 3D");
    el = std::make_shared<NedelecElement>(degree);
  } else {
    el = std::make_shared<LagrangeElement>(dim, degree);
  }
  cache.emplace(key, el);
  return el;
}

}  // namespace smoothsc
