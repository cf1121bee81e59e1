#pragma once

#include <functional>

#include "csb/errors.hpp"

namespace csb {

// Adaptive Gauss-Kronrod (G7, K15) integration over a finite interval.
// Bisects until the Kronrod error estimate satisfies
// |err| <= max(abs_tol, rel_tol * |integral|) on each panel.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-10, double abs_tol = 0.0, int max_depth = 48);

} // namespace csb
