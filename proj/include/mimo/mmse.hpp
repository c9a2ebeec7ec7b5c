#ifndef MIMO_MMSE_HPP
#define MIMO_MMSE_HPP

#include <cstdint>

#include "mimo/alphabet.hpp"
#include "mimo/channel.hpp"
#include "mimo/numerics.hpp"

namespace mimo {

struct McConfig {
  std::uint64_t seed = 1;
  std::size_t samples = 1'000'000;
  std::size_t chunk = 10'000;
  int threads = 0;                  // <= 0: hardware concurrency
  std::uint64_t stream_base = 0;    // substream offset (chunk c uses stream_base + c)

  std::size_t n_chunks() const { return (samples + chunk - 1) / chunk; }
  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Real AWGN channel, BPSK inputs: 1 - int tanh(sqrt(snr) y) phi(y - sqrt(snr)) dy.
double mmse_real_bpsk(Snr snr, const QuadratureRule& rule);

// Complex AWGN channel, BPSK inputs:
// 1 - int tanh(2 sqrt(snr) a) exp(-(a - sqrt(snr))^2)/sqrt(pi) da.
double mmse_complex_bpsk(Snr snr, const QuadratureRule& rule);

// General scalar alphabet via tensor-product quadrature over Re/Im,
// recentered at each mixture component. Requires n_t = 1, M <= 64.
double mmse_siso_general(const Alphabet& a, Snr snr, const QuadratureRule& rule);

// Matched-filter reduction: ||h||^2 * mmse_siso(snr ||h||^2). N_t = 1 only.
double mmse_simo(const ChannelMatrix& h, const Alphabet& a, Snr snr,
                 const QuadratureRule& rule);

// Monte Carlo estimate of E || H(x - E{x|y}) ||^2 for general MIMO.
// Bit-identical for a fixed (seed, chunk) schedule regardless of threads.
McEstimate mmse_mimo_mc(const ChannelMatrix& h, const Alphabet& a, Snr snr,
                        const McConfig& cfg);

}  // namespace mimo

#endif
