#ifndef MIMO_NUMERICS_HPP
#define MIMO_NUMERICS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mimo {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Linear-scale signal-to-noise ratio. Always non-negative and finite.
struct Snr {
  double value;

  explicit Snr(double v);
  static Snr from_db(double db);
  double db() const;
};

// Standard normal tail probability Q(x) = Pr{N(0,1) > x}.
double q_function(double x);

struct LogTerm {
  double log_weight;
  double exponent;
};

// log sum_k exp(log_weight_k + exponent_k), max-shifted.
double log_sum_exp(std::span<const LogTerm> terms);

// log sum_k exp(args_k), max-shifted.
double log_sum_exp(std::span<const double> args);

// Nodes/weights for the weight function exp(-x^2) on (-inf, inf).
// Weights sum to sqrt(pi).
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // all positive

  // tanh(k a) has poles at distance pi/(2k) from the real axis, which slows
  // Gauss-Hermite convergence at moderate snr; 320 nodes keeps the absolute
  // error of every integrand in use (including the 2-D tensor grids, whose
  // tanh^2 double poles converge slowest) below ~5e-9 across the snr range.
  static constexpr int kDefaultOrder = 320;
  static QuadratureRule gauss_hermite(int order = kDefaultOrder);

  int order() const { return static_cast<int>(nodes.size()); }
};

// Integrates f(a) exp(-(a-center)^2)/sqrt(pi) da, so f == 1 gives 1.
double gauss_weighted_integral(const std::function<double(double)>& f,
                               double center, const QuadratureRule& rule);

// Counter-based generator. The sample sequence is a pure function of
// (seed, stream, call index), so substreams can be handed to workers in
// any order without changing the totals they produce.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t counter = 0;

  RngStream() = default;
  RngStream(std::uint64_t seed_, std::uint64_t stream_)
      : seed(seed_), stream(stream_) {}

  double uniform();  // (0, 1]
  double normal();   // N(0, 1); consumes two counter words
  cplx cnormal();    // CN(0, 1): Re, Im ~ N(0, 1/2)
};

// n components, each CN(0,1). One draw of the AWGN vector.
cvec sample_standard_complex_gaussian(RngStream& stream, std::size_t n);

// Runs fn(chunk_index) for chunk_index in [0, n_chunks) across up to
// n_threads workers. fn must only write to per-chunk slots; callers
// combine the slots in index order so results do not depend on the
// worker count. n_threads <= 0 means hardware concurrency.
void parallel_chunks(std::size_t n_chunks, int n_threads,
                     const std::function<void(std::size_t)>& fn);

}  // namespace mimo

#endif
