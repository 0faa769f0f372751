#pragma once

// Adaptive Gauss-Kronrod quadrature behind a tolerance contract: either the
// estimated error meets max(relative * |I|, absolute) or quadrature_error is
// thrown.

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qamp/errors.hpp"

namespace qamp {

struct QuadratureTolerance {
  double relative = 1e-10;
  double absolute = 1e-14;
};

template <class F>
double integrate_adaptive(F&& f, double lo, double hi,
                          QuadratureTolerance tol = {}) {
  if (lo == hi) {
    return 0.0;
  }
  constexpr unsigned max_depth = 20;
  double error = 0.0;
  double l1 = 0.0;
  // boost stops refining once error <= tol * L1; ask for a bit more than the
  // contract so the final check below rarely trips on borderline intervals.
  const double result =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          f, lo, hi, max_depth, 0.25 * tol.relative, &error, &l1);
  // boost reports leaf errors in the leaf's [-1, 1] units; on intervals
  // shorter than 2 every leaf is shorter still, so scaling by the half-width
  // keeps the estimate an upper bound without it swamping tiny integrals
  error *= std::min(1.0, 0.5 * std::abs(hi - lo));
  if (!std::isfinite(result) ||
      error > std::max(tol.relative * std::abs(result), tol.absolute)) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << lo << ", " << hi
        << "]: estimated error " << error << " for integral " << result
        << " (relative tolerance " << tol.relative << ")";
    throw quadrature_error(msg.str());
  }
  return result;
}

}  // namespace qamp
