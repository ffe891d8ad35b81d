// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "irsdfrc/config.hpp"
#include "irsdfrc/scenario.hpp"
#include "irsdfrc/signal_model.hpp"
#include "irsdfrc/types.hpp"

namespace testutil {

using namespace irsdfrc;

inline SystemConfig small_config(int n_tx, int n_rx, int rows, int cols) {
  SystemConfig c;
  c.n_tx = n_tx;
  c.n_rx = n_rx;
  c.irs_rows = rows;
  c.irs_cols = cols;
  return c;
}

// Unit-scale Gaussian channels; a_target is a random unit-modulus vector.
inline ChannelSet random_channels(const SystemConfig& c, Rng& rng) {
  ChannelSet ch;
  const int n = c.n_irs();
  ch.g = complex_gaussian(c.n_tx, 1, 1.0, rng).col(0);
  ch.f = complex_gaussian(n, 1, 1.0, rng).col(0);
  ch.h_dl = complex_gaussian(n, c.n_tx, 1.0, rng);
  ch.h_ul = complex_gaussian(c.n_rx, n, 1.0, rng);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  ch.a_target.resize(n);
  for (int i = 0; i < n; ++i) ch.a_target[i] = std::polar(1.0, u(rng));
  return ch;
}

inline CVec random_phases(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  CVec p(n);
  for (int i = 0; i < n; ++i) p[i] = std::polar(1.0, u(rng));
  return p;
}

inline DesignState random_state(const SystemConfig& c, Rng& rng, double scale = 1.0) {
  DesignState s;
  s.w = complex_gaussian(c.n_tx, 1, scale, rng).col(0);
  s.w_n = complex_gaussian(c.n_tx, c.n_tx, scale, rng);
  s.phi = random_phases(c.n_irs(), rng);
  return s;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace testutil
