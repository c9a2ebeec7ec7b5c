#include "mimo/fading.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mimo {

namespace {

// Disjoint substream spaces for channel draws and per-(trial, point) noise.
constexpr std::uint64_t kChannelStreamBase = 0x4348414Eull << 16;  // "CHAN"
constexpr std::uint64_t kNoiseStreamBase = 0x4E4F4953ull << 20;    // "NOIS"

}  // namespace

FadingSweepResult average_mi(std::size_t n_rx, const Alphabet& a,
                             const SnrGrid& grid, std::size_t trials,
                             const McConfig& cfg) {
  if (trials < 10) throw std::invalid_argument("average_mi: need trials >= 10");
  grid.validate();
  cfg.validate();

  const std::size_t n_grid = grid.points.size();
  const std::size_t stride = cfg.n_chunks();

  // per-trial MI at every grid point, combined in trial order
  std::vector<std::vector<double>> per_trial(trials,
                                             std::vector<double>(n_grid));
  parallel_chunks(trials, cfg.threads, [&](std::size_t t) {
    RngStream ch_stream(cfg.seed, kChannelStreamBase + t);
    ChannelMatrix h = sample_rayleigh(ch_stream, n_rx, a.n_t);
    McConfig inner = cfg;
    inner.threads = 1;  // parallelism lives at the trial level
    for (std::size_t g = 0; g < n_grid; ++g) {
      inner.stream_base = kNoiseStreamBase + (t * n_grid + g) * stride;
      per_trial[t][g] = mi_mc(h, a, Snr(grid.points[g]), inner).mean;
    }
  });

  FadingSweepResult result;
  result.trials = trials;
  for (std::size_t g = 0; g < n_grid; ++g) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      sum += per_trial[t][g];
      sum_sq += per_trial[t][g] * per_trial[t][g];
    }
    double mean = sum / static_cast<double>(trials);
    double var = std::max(sum_sq / static_cast<double>(trials) - mean * mean, 0.0);
    result.snr_db.push_back(10.0 * std::log10(grid.points[g]));
    result.avg_mi.push_back(mean);
    result.std_error.push_back(std::sqrt(var / static_cast<double>(trials)));
  }
  return result;
}

SlopeFit diversity_slope(const FadingSweepResult& result, double asymptote,
                         double window_lo_db, double window_hi_db) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < result.snr_db.size(); ++k) {
    double db = result.snr_db[k];
    if (db < window_lo_db - 1e-9 || db > window_hi_db + 1e-9) continue;
    double gap = asymptote - result.avg_mi[k];
    if (!(gap > 0.0)) {
      throw std::invalid_argument("window too high; lower snr range");
    }
    xs.push_back(db / 10.0);  // log10(snr)
    ys.push_back(std::log10(gap));
  }
  if (xs.size() < 4) {
    throw std::invalid_argument("diversity fit: need >= 4 grid points in window");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
    syy += ys[k] * ys[k];
  }
  SlopeFit fit;
  fit.window_lo_db = window_lo_db;
  fit.window_hi_db = window_hi_db;
  double den = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double r = ys[k] - (fit.intercept + fit.slope * xs[k]);
    ss_res += r * r;
  }
  fit.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double Histogram::mass_below(double x) const {
  auto it = std::lower_bound(sorted_values.begin(), sorted_values.end(), x);
  return static_cast<double>(it - sorted_values.begin()) /
         static_cast<double>(sorted_values.size());
}

Histogram distance_density_probe(std::size_t n_rx, const Alphabet& a,
                                 GeniePair pair, std::size_t trials,
                                 RngStream stream) {
  if (trials < 1000) throw std::invalid_argument("density probe: need trials >= 1000");
  if (pair.i == pair.j || pair.i >= a.size() || pair.j >= a.size()) {
    throw std::invalid_argument("density probe: invalid pair");
  }
  Histogram h;
  h.total = trials;
  h.sorted_values.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    ChannelMatrix ch = sample_rayleigh(stream, n_rx, a.n_t);
    cvec gi = ch.apply(a.points[pair.i]);
    cvec gj = ch.apply(a.points[pair.j]);
    double d2 = 0.0;
    for (std::size_t r = 0; r < n_rx; ++r) d2 += std::norm(gi[r] - gj[r]);
    h.sorted_values.push_back(d2);
  }
  std::sort(h.sorted_values.begin(), h.sorted_values.end());

  const std::size_t bins = 64;
  double max_v = h.sorted_values.back();
  h.edges.resize(bins + 1);
  h.counts.assign(bins, 0);
  for (std::size_t b = 0; b <= bins; ++b) {
    h.edges[b] = max_v * static_cast<double>(b) / static_cast<double>(bins);
  }
  for (double v : h.sorted_values) {
    std::size_t b = std::min(bins - 1, static_cast<std::size_t>(
                                           v / max_v * static_cast<double>(bins)));
    h.counts[b] += 1;
  }
  return h;
}

}  // namespace mimo
