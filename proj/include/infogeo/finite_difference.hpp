#pragma once

// Central-difference stencils for mixed partial derivatives of a scalar field.
//
// A derivative is described by the multiset of coordinates it differentiates in,
// e.g. {0, 0, 3} is ∂²/∂x₀² ∂/∂x₃. The stencil is the tensor product of the
// one-dimensional central stencils for each distinct coordinate:
//
//   order 1:  [-1, 0, 1] / 2h
//   order 2:  [1, -2, 1] / h²
//   order 3:  [-1/2, 1, 0, -1, 1/2] / h³
//
// All stencils are O(h²). Richardson extrapolation combines steps h and h/2
// into (4·D(h/2) − D(h)) / 3.

#include <functional>
#include <span>

#include "infogeo/linalg.hpp"
#include "infogeo/manifold.hpp"

namespace infogeo::fd {

using ScalarField = std::function<double(const Vec&)>;

double partial(const ScalarField& f, const Vec& x, std::span<const int> coords, const Vec& steps,
               DiffConfig::Scheme scheme = DiffConfig::Scheme::central);

/// Largest displacement of any stencil node along one coordinate, in units of its step.
int reach(std::span<const int> coords);

}  // namespace infogeo::fd
