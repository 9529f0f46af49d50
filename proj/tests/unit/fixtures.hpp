#pragma once

#include <random>
#include <vector>

#include "infogeo/manifold.hpp"

namespace fixtures {

inline infogeo::ProbVector random_prob(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  infogeo::Vec w(d);
  for (int i = 0; i < d; ++i) w[i] = u(rng);
  w /= w.sum();
  return infogeo::ProbVector(w);
}

inline std::vector<infogeo::ParametricModel> builtins() {
  infogeo::Mat h(3, 1);
  h << -1.0, 0.0, 2.0;
  return {infogeo::bernoulli(), infogeo::binomial(3), infogeo::categorical(3),
          infogeo::logit_linear(h)};
}

/// Interior points used for every model in `builtins()`.
inline std::vector<infogeo::Vec> grid_for(const infogeo::ParametricModel& m) {
  std::vector<infogeo::Vec> out;
  if (m.family == infogeo::ModelFamily::categorical) {
    for (auto [a, b] : {std::pair{0.2, 0.3}, {1.0 / 3, 1.0 / 3}, {0.1, 0.6}, {0.5, 0.25}}) {
      infogeo::Vec t(2);
      t << a, b;
      out.push_back(t);
    }
  } else if (m.family == infogeo::ModelFamily::logit_linear) {
    for (double t : {-1.5, -0.3, 0.0, 0.8, 2.0}) out.push_back(infogeo::Vec::Constant(1, t));
  } else {
    for (double t : {0.1, 0.2, 0.35, 0.5, 0.7, 0.9}) out.push_back(infogeo::Vec::Constant(1, t));
  }
  return out;
}

inline infogeo::Vec scalar(double x) { return infogeo::Vec::Constant(1, x); }

}  // namespace fixtures
