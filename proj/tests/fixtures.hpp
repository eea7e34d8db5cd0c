// fixtures.hpp: converged bundles shared across test files, computed once.
#pragma once

#include "renorm/fixpoint.hpp"

inline const renorm::SolutionBundle& feigenbaum_bundle() {
  static renorm::SolutionBundle B = [] {
    auto P = renorm::make_params(1, 2.0, 1.0);
    renorm::IterateOptions io;
    return renorm::iterate(P, io);
  }();
  return B;
}

inline const renorm::SolutionBundle& affine_bundle() {
  static renorm::SolutionBundle B = [] {
    auto P = renorm::make_params(1, 1.0, 2.0, /*test_mode=*/true);
    renorm::IterateOptions io;
    io.max_iter = 400;
    return renorm::iterate(P, io);
  }();
  return B;
}

inline const renorm::SolutionBundle& affine_tripling_bundle() {
  static renorm::SolutionBundle B = [] {
    auto P = renorm::make_params(2, 1.0, 2.0, /*test_mode=*/true);
    renorm::IterateOptions io;
    io.max_iter = 400;
    return renorm::iterate(P, io);
  }();
  return B;
}

inline const renorm::SolutionBundle& circle_cubic_bundle() {
  static renorm::SolutionBundle B = [] {
    auto P = renorm::make_params(1, 3.0, 2.0);
    renorm::IterateOptions io;
    io.max_iter = 400;
    return renorm::iterate(P, io);
  }();
  return B;
}
