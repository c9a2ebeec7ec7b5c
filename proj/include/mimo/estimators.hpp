#ifndef MIMO_ESTIMATORS_HPP
#define MIMO_ESTIMATORS_HPP

#include <cstddef>

#include "mimo/alphabet.hpp"
#include "mimo/channel.hpp"
#include "mimo/numerics.hpp"

namespace mimo {

struct GeniePair {
  std::size_t i;
  std::size_t j;
};

// Precomputed sqrt(snr) H x_i images and log priors. The hot path for
// Monte Carlo: build once per (H, alphabet, snr), evaluate per draw.
class PosteriorContext {
 public:
  PosteriorContext(const ChannelMatrix& h, const Alphabet& a, Snr snr);

  // E{x | y}: softmax-weighted mean of the alphabet points. Weights are
  // max-shifted so no underflow occurs even at snr ~ 1e6.
  cvec conditional_mean(const cvec& y) const;

  // argmin_i ||y - sqrt(snr) H x_i||^2, ties to the lowest index.
  std::size_t ml_index(const cvec& y) const;

  const std::vector<cvec>& scaled_images() const { return scaled_images_; }
  const Alphabet& alphabet() const { return *alphabet_; }

 private:
  const Alphabet* alphabet_;
  std::vector<cvec> scaled_images_;  // sqrt(snr) H x_i
  std::vector<double> log_probs_;
  std::size_t n_rx_;
};

cvec conditional_mean(const cvec& y, const ChannelMatrix& h, const Alphabet& a,
                      Snr snr);

std::size_t ml_estimate(const cvec& y, const ChannelMatrix& h,
                        const Alphabet& a, Snr snr);

// Two-point conditional mean given the genie pair {x_i, x_j}:
//   S(y) (x_i - x_j)/2 + (x_i + x_j)/2
// with S a tanh of the matched-filter output against H(x_i - x_j)/2.
cvec genie_estimate(const cvec& y, GeniePair pair, const ChannelMatrix& h,
                    const Alphabet& a, Snr snr);

// The scalar S above; exposed for its oddness property.
double genie_scalar(const cvec& y, GeniePair pair, const ChannelMatrix& h,
                    const Alphabet& a, Snr snr);

}  // namespace mimo

#endif
