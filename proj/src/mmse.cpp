#include "mimo/mmse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mimo/estimators.hpp"

namespace mimo {

void McConfig::validate() const {
  if (samples < 1000) throw std::invalid_argument("mc: need samples >= 1000");
  if (chunk < 1) throw std::invalid_argument("mc: chunk must be >= 1");
}

double mmse_real_bpsk(Snr snr, const QuadratureRule& rule) {
  const double k = std::sqrt(2.0 * snr.value);
  const double center = std::sqrt(snr.value / 2.0);
  double integral = gauss_weighted_integral(
      [k](double a) { return std::tanh(k * a); }, center, rule);
  return 1.0 - integral;
}

double mmse_complex_bpsk(Snr snr, const QuadratureRule& rule) {
  const double k = 2.0 * std::sqrt(snr.value);
  const double center = std::sqrt(snr.value);
  double integral = gauss_weighted_integral(
      [k](double a) { return std::tanh(k * a); }, center, rule);
  return 1.0 - integral;
}

double mmse_siso_general(const Alphabet& a, Snr snr,
                         const QuadratureRule& rule) {
  if (a.n_t != 1) throw std::invalid_argument("siso: alphabet must be scalar");
  if (a.size() > 64) {
    throw std::invalid_argument(
        "siso: M too large for 2-D quadrature; use mmse_mimo_mc");
  }
  const double root = std::sqrt(snr.value);
  const std::size_t m = a.size();

  std::vector<cplx> means(m);  // sqrt(snr) x_i
  std::vector<double> logp(m);
  for (std::size_t i = 0; i < m; ++i) {
    means[i] = root * a.points[i][0];
    logp[i] = std::log(a.probs[i]);
  }

  // |E{x|y}|^2 with max-shifted weights.
  auto posterior_sq = [&](cplx y) {
    double max_arg = -std::numeric_limits<double>::infinity();
    static thread_local std::vector<double> args;
    args.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      args[i] = logp[i] - std::norm(y - means[i]);
      max_arg = std::max(max_arg, args[i]);
    }
    cplx num{0.0, 0.0};
    double den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double w = std::exp(args[i] - max_arg);
      num += w * a.points[i][0];
      den += w;
    }
    return std::norm(num / den);
  };

  // 1 - sum_k p_k E_{y ~ CN(sqrt(snr) x_k, 1)} |E{x|y}|^2, each expectation
  // by a grid recentered at its own mixture mode.
  const double inv_pi = 1.0 / M_PI;
  double acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double comp = 0.0;
    for (int iu = 0; iu < rule.order(); ++iu) {
      const double u = rule.nodes[iu] + means[k].real();
      const double wu = rule.weights[iu];
      double row = 0.0;
      for (int iv = 0; iv < rule.order(); ++iv) {
        const double v = rule.nodes[iv] + means[k].imag();
        row += rule.weights[iv] * posterior_sq({u, v});
      }
      comp += wu * row;
    }
    acc += a.probs[k] * comp * inv_pi;
  }
  return 1.0 - acc;
}

double mmse_simo(const ChannelMatrix& h, const Alphabet& a, Snr snr,
                 const QuadratureRule& rule) {
  if (h.n_tx != 1) throw std::invalid_argument("simo: channel must have N_t = 1");
  double gain = h.frobenius_sq();  // ||h||^2
  if (gain == 0.0) return 0.0;
  return gain * mmse_siso_general(a, Snr(snr.value * gain), rule);
}

namespace {

std::size_t draw_index(RngStream& rng, const std::vector<double>& probs) {
  double u = rng.uniform();
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cum += probs[i];
    if (u <= cum) return i;
  }
  return probs.size() - 1;
}

}  // namespace

McEstimate mmse_mimo_mc(const ChannelMatrix& h, const Alphabet& a, Snr snr,
                        const McConfig& cfg) {
  cfg.validate();
  a.validate();
  PosteriorContext ctx(h, a, snr);
  const std::size_t n_rx = h.n_rx;
  const std::size_t n_chunks = cfg.n_chunks();

  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
  };
  std::vector<Partial> partials(n_chunks);

  parallel_chunks(n_chunks, cfg.threads, [&](std::size_t c) {
    RngStream rng(cfg.seed, cfg.stream_base + c);
    std::size_t count = std::min(cfg.chunk, cfg.samples - c * cfg.chunk);
    Partial p;
    cvec y(n_rx);
    for (std::size_t s = 0; s < count; ++s) {
      std::size_t idx = draw_index(rng, a.probs);
      const cvec& img = ctx.scaled_images()[idx];  // sqrt(snr) H x_idx
      for (std::size_t r = 0; r < n_rx; ++r) {
        y[r] = img[r] + rng.cnormal();
      }
      cvec est = ctx.conditional_mean(y);
      for (std::size_t k = 0; k < a.n_t; ++k) {
        est[k] = a.points[idx][k] - est[k];
      }
      double err = norm_sq(h.apply(est));
      p.sum += err;
      p.sum_sq += err * err;
      p.n += 1;
    }
    partials[c] = p;
  });

  // fixed combination order: chunk 0, 1, ...
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  for (const auto& p : partials) {
    sum += p.sum;
    sum_sq += p.sum_sq;
    n += p.n;
  }
  McEstimate est;
  est.samples = n;
  est.mean = sum / static_cast<double>(n);
  double var = sum_sq / static_cast<double>(n) - est.mean * est.mean;
  var = std::max(var, 0.0);
  est.std_error = std::sqrt(var / static_cast<double>(n));
  return est;
}

}  // namespace mimo
