#ifndef MIMO_BOUNDS_HPP
#define MIMO_BOUNDS_HPP

#include "mimo/alphabet.hpp"
#include "mimo/channel.hpp"
#include "mimo/numerics.hpp"

namespace mimo {

struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
};

// Genie kernel: f_l(x) = 1/4 [1 - int tanh(sqrt(x) a) exp(-(a - sqrt(x)/2)^2)/sqrt(pi) da].
// Range [0, 1/4], f_l(0) = 1/4.
double f_lower(double x, const QuadratureRule& rule);

// Pairwise-error kernel: f_u(x) = Q(sqrt(x/2)). Range (0, 1/2].
double f_upper(double x);

// sum over ordered pairs of d_ij^2 f_l(snr d_ij^2) / (M (M-1)).
// Requires equiprobable inputs.
double mmse_lower_bound(const ReceivedConstellation& rc, const Alphabet& a,
                        Snr snr, const QuadratureRule& rule);

// sum over ordered pairs of d_ij^2 f_u(snr d_ij^2) / M.
// Requires equiprobable inputs.
double mmse_upper_bound(const ReceivedConstellation& rc, const Alphabet& a,
                        Snr snr);

BoundPair mmse_bounds(const ReceivedConstellation& rc, const Alphabet& a,
                      Snr snr, const QuadratureRule& rule);

}  // namespace mimo

#endif
