#ifndef SST_QUADRATURE_HPP
#define SST_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sst/core.hpp"

namespace sst {

/// Adaptive 61-point Gauss-Kronrod integral of a smooth function on [a, b].
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-13) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      std::forward<F>(f), a, b, 20, rel_tol, &err);
  return value;
}

}  // namespace sst

#endif  // SST_QUADRATURE_HPP
