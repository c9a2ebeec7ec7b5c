#include "mimo/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mimo {

PosteriorContext::PosteriorContext(const ChannelMatrix& h, const Alphabet& a,
                                   Snr snr)
    : alphabet_(&a), n_rx_(h.n_rx) {
  if (a.n_t != h.n_tx) {
    throw std::invalid_argument("posterior: alphabet n_t != channel n_tx");
  }
  const double root = std::sqrt(snr.value);
  scaled_images_.reserve(a.size());
  for (const auto& x : a.points) {
    cvec img = h.apply(x);
    for (auto& z : img) z *= root;
    scaled_images_.push_back(std::move(img));
  }
  log_probs_.reserve(a.size());
  for (double p : a.probs) log_probs_.push_back(std::log(p));
}

cvec PosteriorContext::conditional_mean(const cvec& y) const {
  const std::size_t m = scaled_images_.size();
  // per-thread scratch so one context can serve concurrent MC workers
  static thread_local std::vector<double> scratch;
  scratch.resize(m);
  double max_arg = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    double d2 = 0.0;
    for (std::size_t r = 0; r < n_rx_; ++r) {
      d2 += std::norm(y[r] - scaled_images_[i][r]);
    }
    scratch[i] = log_probs_[i] - d2;
    max_arg = std::max(max_arg, scratch[i]);
  }
  cvec out(alphabet_->n_t, cplx{0.0, 0.0});
  double wsum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double w = std::exp(scratch[i] - max_arg);
    wsum += w;
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] += w * alphabet_->points[i][k];
    }
  }
  for (auto& z : out) z /= wsum;
  return out;
}

std::size_t PosteriorContext::ml_index(const cvec& y) const {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scaled_images_.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t r = 0; r < n_rx_; ++r) {
      d2 += std::norm(y[r] - scaled_images_[i][r]);
    }
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

cvec conditional_mean(const cvec& y, const ChannelMatrix& h, const Alphabet& a,
                      Snr snr) {
  return PosteriorContext(h, a, snr).conditional_mean(y);
}

std::size_t ml_estimate(const cvec& y, const ChannelMatrix& h,
                        const Alphabet& a, Snr snr) {
  return PosteriorContext(h, a, snr).ml_index(y);
}

double genie_scalar(const cvec& y, GeniePair pair, const ChannelMatrix& h,
                    const Alphabet& a, Snr snr) {
  if (pair.i == pair.j || pair.i >= a.size() || pair.j >= a.size()) {
    throw std::invalid_argument("genie: invalid pair");
  }
  const double root = std::sqrt(snr.value);
  cvec img_i = h.apply(a.points[pair.i]);
  cvec img_j = h.apply(a.points[pair.j]);
  cvec half_diff(h.n_rx), centered(h.n_rx);
  for (std::size_t r = 0; r < h.n_rx; ++r) {
    half_diff[r] = 0.5 * (img_i[r] - img_j[r]);
    centered[r] = y[r] - root * 0.5 * (img_i[r] + img_j[r]);
  }
  return std::tanh(2.0 * root * inner(centered, half_diff).real());
}

cvec genie_estimate(const cvec& y, GeniePair pair, const ChannelMatrix& h,
                    const Alphabet& a, Snr snr) {
  double s = genie_scalar(y, pair, h, a, snr);
  const cvec& xi = a.points[pair.i];
  const cvec& xj = a.points[pair.j];
  cvec out(a.n_t);
  for (std::size_t k = 0; k < a.n_t; ++k) {
    out[k] = s * 0.5 * (xi[k] - xj[k]) + 0.5 * (xi[k] + xj[k]);
  }
  return out;
}

}  // namespace mimo
