#pragma once

#include <functional>
#include <string>

#include "smoothsc/assembly.hpp"

namespace smoothsc {

/// Exact solution data; each norm reads only what it needs.
template <class T>
struct ExactSolution {
  std::function<T(const Point&)> value;
  std::function<Vec3<T>(const Point&)> grad;
  std::function<Eigen::Matrix<T, 3, 3>(const Point&)> hess;
  std::function<Vec3<T>(const Point&)> vec;
  std::function<Vec3<T>(const Point&)> curl;
};

enum class NormKind { h1_semi, l2, broken_1h, cip_2h, hcurl, h1_kappa };

std::string to_string(NormKind kind);

struct NormSpec {
  NormKind kind = NormKind::h1_semi;
  double gamma = 10.0;   // broken_1h, cip_2h
  double kappa = 1.0;    // h1_kappa
  int quad_degree = -1;  // -1: 2 * degree + 4
};

/// Norm of (exact - discrete) by quadrature, including the facet jump terms
/// for the broken norms (the exact solution has no jumps).
template <class T>
double error_norm(const DofMap& dm, const Vector<T>& coeffs, const ExactSolution<T>& exact, const NormSpec& norm);

/// Per-cell H1 seminorms |v|_{H1(T)} of a discrete function.
std::vector<double> cell_h1_seminorms(const DofMap& dm, const Vector<double>& coeffs, int quad_degree = -1);

}  // namespace smoothsc
