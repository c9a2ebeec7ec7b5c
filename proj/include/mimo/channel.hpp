#ifndef MIMO_CHANNEL_HPP
#define MIMO_CHANNEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "mimo/alphabet.hpp"
#include "mimo/numerics.hpp"

namespace mimo {

// Complex N x N_t channel matrix, row-major.
struct ChannelMatrix {
  std::size_t n_rx = 1;
  std::size_t n_tx = 1;
  cvec entries;

  cplx at(std::size_t r, std::size_t c) const { return entries[r * n_tx + c]; }

  cvec apply(const cvec& x) const;  // H x
  double frobenius_sq() const;      // tr(H H^dag)

  static ChannelMatrix scalar(cplx h);

  // {"rows":N,"cols":Nt,"re":[[...]],"im":[[...]]}; exact parse.
  static ChannelMatrix from_json_file(const std::string& path);
};

// Images H x_i and the full table of squared pairwise distances
// d_ij^2 = ||H x_i - H x_j||^2, computed once.
struct ReceivedConstellation {
  std::vector<cvec> images;
  std::vector<double> pair_d2;  // M x M row-major, symmetric, zero diagonal
  std::size_t size() const { return images.size(); }
  double d2(std::size_t i, std::size_t j) const { return pair_d2[i * size() + j]; }
};

ReceivedConstellation received_constellation(const ChannelMatrix& h,
                                             const Alphabet& a);

// i.i.d. CN(0,1) entries (Rayleigh fading).
ChannelMatrix sample_rayleigh(RngStream& stream, std::size_t n_rx,
                              std::size_t n_tx);

// Small helpers shared by the estimator and Monte Carlo layers.
double norm_sq(const cvec& v);
cplx inner(const cvec& a, const cvec& b);  // a^dag b

}  // namespace mimo

#endif
