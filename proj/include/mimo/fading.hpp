#ifndef MIMO_FADING_HPP
#define MIMO_FADING_HPP

#include "mimo/alphabet.hpp"
#include "mimo/channel.hpp"
#include "mimo/estimators.hpp"
#include "mimo/mi.hpp"

namespace mimo {

struct FadingSweepResult {
  std::vector<double> snr_db;
  std::vector<double> avg_mi;     // nats
  std::vector<double> std_error;  // channel-level
  std::size_t trials = 0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double window_lo_db = 0.0;
  double window_hi_db = 0.0;
};

// E_H{I(snr; H)} over Rayleigh draws. The same channel draws are reused
// across grid points; noise substreams are distinct per (trial, point).
FadingSweepResult average_mi(std::size_t n_rx, const Alphabet& a,
                             const SnrGrid& grid, std::size_t trials,
                             const McConfig& cfg);

// Least squares of log10(asymptote - avg_mi) against log10(snr) inside
// the dB window. Slope near -N is the diversity-order signature.
SlopeFit diversity_slope(const FadingSweepResult& result, double asymptote,
                         double window_lo_db, double window_hi_db);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  std::vector<double> sorted_values;

  double mass_below(double x) const;  // empirical CDF
};

// Empirical distribution of d_ij^2 = ||H x_i - H x_j||^2 over Rayleigh
// channel draws; used to probe the small-argument exponent.
Histogram distance_density_probe(std::size_t n_rx, const Alphabet& a,
                                 GeniePair pair, std::size_t trials,
                                 RngStream stream);

}  // namespace mimo

#endif
