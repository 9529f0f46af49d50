#include "infogeo/finite_difference.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "infogeo/errors.hpp"

namespace infogeo::fd {
namespace {

struct Stencil1d {
  std::vector<int> offsets;
  std::vector<double> weights;  // before division by h^order
};

const Stencil1d& stencil_for(int order) {
  static const Stencil1d first{{-1, 1}, {-0.5, 0.5}};
  static const Stencil1d second{{-1, 0, 1}, {1.0, -2.0, 1.0}};
  static const Stencil1d third{{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}};
  switch (order) {
    case 1: return first;
    case 2: return second;
    case 3: return third;
    default: throw DomainError("finite differences support order <= 3 per coordinate");
  }
}

double central(const ScalarField& f, const Vec& x, const std::map<int, int>& orders,
               const Vec& steps) {
  std::vector<int> axes;
  std::vector<const Stencil1d*> stencils;
  double scale = 1.0;
  for (const auto& [axis, order] : orders) {
    axes.push_back(axis);
    stencils.push_back(&stencil_for(order));
    for (int r = 0; r < order; ++r) scale *= steps[axis];
  }

  // Odometer over the tensor-product stencil.
  std::vector<std::size_t> idx(axes.size(), 0);
  double acc = 0.0;
  for (;;) {
    Vec node = x;
    double w = 1.0;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      node[axes[a]] += stencils[a]->offsets[idx[a]] * steps[axes[a]];
      w *= stencils[a]->weights[idx[a]];
    }
    if (w != 0.0) acc += w * f(node);

    std::size_t a = 0;
    while (a < axes.size() && ++idx[a] == stencils[a]->offsets.size()) {
      idx[a] = 0;
      ++a;
    }
    if (a == axes.size()) break;
  }
  return acc / scale;
}

}  // namespace

int reach(std::span<const int> coords) {
  std::map<int, int> orders;
  for (int c : coords) ++orders[c];
  int r = 0;
  for (const auto& [axis, order] : orders) r = std::max(r, order == 3 ? 2 : 1);
  return r;
}

double partial(const ScalarField& f, const Vec& x, std::span<const int> coords, const Vec& steps,
               DiffConfig::Scheme scheme) {
  if (coords.empty()) return f(x);
  std::map<int, int> orders;
  for (int c : coords) {
    if (c < 0 || c >= x.size()) throw DimensionError("finite-difference coordinate out of range");
    ++orders[c];
  }
  const double coarse = central(f, x, orders, steps);
  if (scheme == DiffConfig::Scheme::central) return coarse;
  const double fine = central(f, x, orders, 0.5 * steps);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace infogeo::fd
