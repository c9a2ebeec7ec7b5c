#include "mimo/mi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mimo {

SnrGrid SnrGrid::log_db(double lo_db, double hi_db, std::size_t n) {
  if (n < 2) throw std::invalid_argument("snr grid: need >= 2 points");
  if (!(hi_db > lo_db)) throw std::invalid_argument("snr grid: hi_db must exceed lo_db");
  SnrGrid g;
  g.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double db = lo_db + (hi_db - lo_db) * static_cast<double>(k) /
                            static_cast<double>(n - 1);
    g.points.push_back(std::pow(10.0, db / 10.0));
  }
  return g;
}

void SnrGrid::validate() const {
  if (points.size() < 2) throw std::invalid_argument("snr grid: need >= 2 points");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(points[k] > 0.0)) throw std::invalid_argument("snr grid: points must be positive");
    if (k > 0 && !(points[k] > points[k - 1])) {
      throw std::invalid_argument("snr grid: points must be strictly increasing");
    }
  }
}

MiEstimate mi_mc(const ChannelMatrix& h, const Alphabet& a, Snr snr,
                 const McConfig& cfg) {
  cfg.validate();
  a.validate();
  if (a.n_t != h.n_tx) throw std::invalid_argument("mi: alphabet n_t != channel n_tx");

  const std::size_t m = a.size();
  const std::size_t n_rx = h.n_rx;
  const double root = std::sqrt(snr.value);

  // g_i = sqrt(snr) H x_i; inner argument is -||n + g_i - g_j||^2.
  std::vector<cvec> images(m);
  for (std::size_t i = 0; i < m; ++i) {
    images[i] = h.apply(a.points[i]);
    for (auto& z : images[i]) z *= root;
  }
  std::vector<double> logp(m);
  for (std::size_t i = 0; i < m; ++i) logp[i] = std::log(a.probs[i]);

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
    cvec noise(n_rx);
    std::vector<double> args(m);
    for (std::size_t s = 0; s < count; ++s) {
      double noise_sq = 0.0;
      for (std::size_t r = 0; r < n_rx; ++r) {
        noise[r] = rng.cnormal();
        noise_sq += std::norm(noise[r]);
      }
      // -||n||^2 rather than its mean -N: same expectation, but the noise
      // power cancels against the mixture term, so I(0) = 0 and the
      // saturation value are exact per draw.
      double draw_value = -noise_sq;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          double d2 = 0.0;
          for (std::size_t r = 0; r < n_rx; ++r) {
            d2 += std::norm(noise[r] + images[i][r] - images[j][r]);
          }
          args[j] = logp[j] - d2;
        }
        draw_value -= a.probs[i] * log_sum_exp(std::span<const double>(args));
      }
      p.sum += draw_value;
      p.sum_sq += draw_value * draw_value;
      p.n += 1;
    }
    partials[c] = p;
  });

  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  for (const auto& p : partials) {
    sum += p.sum;
    sum_sq += p.sum_sq;
    n += p.n;
  }
  MiEstimate est;
  est.samples = n;
  est.mean = sum / static_cast<double>(n);
  double var = sum_sq / static_cast<double>(n) - est.mean * est.mean;
  var = std::max(var, 0.0);
  est.std_error = std::sqrt(var / static_cast<double>(n));
  return est;
}

namespace {

// 16-point Gauss-Legendre on [-1, 1]; positive half, mirrored.
constexpr int kGlN = 8;
constexpr double kGlX[kGlN] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[kGlN] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

double gl_panel(const std::function<double(double)>& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int k = 0; k < kGlN; ++k) {
    acc += kGlW[k] * (f(mid - half * kGlX[k]) + f(mid + half * kGlX[k]));
  }
  return acc * half;
}

// Composite quadrature over log-spaced panels of [lo, hi].
double integrate_log_panels(const std::function<double(double)>& f, double lo,
                            double hi, int panels) {
  if (hi <= lo) return 0.0;
  // log spacing needs a positive left edge; peel off a linear panel first.
  double start = lo;
  double acc = 0.0;
  const double floor_edge = hi * 1e-9;
  if (start < floor_edge) {
    acc += gl_panel(f, start, floor_edge);
    start = floor_edge;
  }
  const double ratio = std::pow(hi / start, 1.0 / panels);
  double a = start;
  for (int k = 0; k < panels; ++k) {
    double b = (k == panels - 1) ? hi : a * ratio;
    acc += gl_panel(f, a, b);
    a = b;
  }
  return acc;
}

}  // namespace

double mi_from_mmse(const std::function<double(double)>& mmse_curve, Snr snr,
                    const SnrGrid& grid) {
  grid.validate();
  if (snr.value <= 0.0) return 0.0;
  if (grid.points.back() < snr.value) {
    throw std::invalid_argument("mi_from_mmse: grid does not cover snr range");
  }
  // panel edges: 0, grid points below snr, snr
  std::vector<double> edges{0.0};
  for (double p : grid.points) {
    if (p < snr.value) edges.push_back(p);
  }
  edges.push_back(snr.value);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    acc += gl_panel(mmse_curve, edges[k], edges[k + 1]);
  }
  return acc;
}

BoundPair mi_bounds(const ReceivedConstellation& rc, const Alphabet& a,
                    Snr snr, Snr tail_cap, const QuadratureRule& rule) {
  if (tail_cap.value <= snr.value) {
    throw std::invalid_argument("increase tail cap");
  }
  if (mmse_upper_bound(rc, a, tail_cap) >= 1e-10) {
    throw std::invalid_argument("increase tail cap");
  }
  const double h_inf = entropy(a);
  auto upper_kernel = [&](double x) { return mmse_upper_bound(rc, a, Snr(x)); };
  auto lower_kernel = [&](double x) {
    return mmse_lower_bound(rc, a, Snr(x), rule);
  };
  double tail_u = integrate_log_panels(upper_kernel, snr.value, tail_cap.value, 64);
  double tail_l = integrate_log_panels(lower_kernel, snr.value, tail_cap.value, 64);
  return {h_inf - tail_u, h_inf - tail_l};
}

double mi_asymptote(const Alphabet& a) { return entropy(a); }

}  // namespace mimo
