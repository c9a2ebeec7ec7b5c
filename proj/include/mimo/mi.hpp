#ifndef MIMO_MI_HPP
#define MIMO_MI_HPP

#include <functional>

#include "mimo/alphabet.hpp"
#include "mimo/bounds.hpp"
#include "mimo/channel.hpp"
#include "mimo/mmse.hpp"
#include "mimo/numerics.hpp"

namespace mimo {

struct MiEstimate {
  double mean = 0.0;  // nats
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Strictly increasing positive snr points (linear scale).
struct SnrGrid {
  std::vector<double> points;

  // n points log-uniform in dB between lo_db and hi_db.
  static SnrGrid log_db(double lo_db, double hi_db, std::size_t n);
  void validate() const;
};

// Monte Carlo over noise draws of the closed form
//   I = -N - sum_i p_i E_n{ log sum_j p_j exp(-||n + sqrt(snr) H (x_i - x_j)||^2) }.
// The outer sum over i is exhaustive; noise draws are shared across i.
MiEstimate mi_mc(const ChannelMatrix& h, const Alphabet& a, Snr snr,
                 const McConfig& cfg);

// I(snr) = int_0^snr mmse(x) dx by composite Gauss-Legendre over the grid
// panels. The grid must reach snr.
double mi_from_mmse(const std::function<double(double)>& mmse_curve, Snr snr,
                    const SnrGrid& grid);

// entropy(a) - int_snr^cap of the opposite MMSE bound, in nats.
// Throws "increase tail cap" when the upper-bound integrand has not
// decayed below 1e-10 at the cap.
BoundPair mi_bounds(const ReceivedConstellation& rc, const Alphabet& a,
                    Snr snr, Snr tail_cap, const QuadratureRule& rule);

// I(infinity; H) = H(x), nats.
double mi_asymptote(const Alphabet& a);

}  // namespace mimo

#endif
