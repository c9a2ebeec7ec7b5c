#include "mimo/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace mimo {

Snr::Snr(double v) : value(v) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument("snr must be finite and non-negative");
  }
}

Snr Snr::from_db(double db) { return Snr(std::pow(10.0, db / 10.0)); }

double Snr::db() const { return 10.0 * std::log10(value); }

double q_function(double x) {
  // erfc keeps relative accuracy deep into the tail, unlike 1 - Phi(x).
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double log_sum_exp(std::span<const LogTerm> terms) {
  if (terms.empty()) {
    throw std::invalid_argument("empty mixture");
  }
  double max_arg = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    max_arg = std::max(max_arg, t.log_weight + t.exponent);
  }
  double sum = 0.0;
  for (const auto& t : terms) {
    sum += std::exp(t.log_weight + t.exponent - max_arg);
  }
  return max_arg + std::log(sum);
}

double log_sum_exp(std::span<const double> args) {
  if (args.empty()) {
    throw std::invalid_argument("empty mixture");
  }
  double max_arg = *std::max_element(args.begin(), args.end());
  double sum = 0.0;
  for (double a : args) {
    sum += std::exp(a - max_arg);
  }
  return max_arg + std::log(sum);
}

QuadratureRule QuadratureRule::gauss_hermite(int order) {
  if (order < 2) {
    throw std::invalid_argument("quadrature order must be >= 2");
  }
  // Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
  // Jacobi matrix (zero diagonal, off-diagonal sqrt(j/2)); each weight is
  // sqrt(pi) times the squared first component of the eigenvector. Implicit
  // QL with shifts, rotating only the first-component row; robust at any
  // order, unlike Newton refinement of asymptotic root guesses.
  const int n = order;
  std::vector<double> d(n, 0.0), e(n, 0.0), q(n, 0.0);
  for (int j = 0; j < n - 1; ++j) e[j] = std::sqrt((j + 1) / 2.0);
  q[0] = 1.0;

  for (int l = 0; l < n; ++l) {
    for (int iter = 0;; ++iter) {
      int m = l;
      for (; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (iter >= 60) {
        throw std::runtime_error("quadrature: eigenvalue iteration stalled");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = q[i + 1];
        q[i + 1] = s * q[i] + c * f;
        q[i] = c * q[i] - s * f;
      }
      if (r == 0.0 && m - 1 >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }

  std::vector<int> idx(n);
  for (int k = 0; k < n; ++k) idx[k] = k;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = d[idx[k]];
    rule.weights[k] = sqrt_pi * q[idx[k]] * q[idx[k]];
  }
  return rule;
}

double gauss_weighted_integral(const std::function<double(double)>& f,
                               double center, const QuadratureRule& rule) {
  if (rule.order() < 2) {
    throw std::invalid_argument("quadrature order must be >= 2");
  }
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  double acc = 0.0;
  for (int k = 0; k < rule.order(); ++k) {
    acc += rule.weights[k] * f(rule.nodes[k] + center);
  }
  return acc * inv_sqrt_pi;
}

namespace {

inline std::uint64_t mix_word(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t ctr) {
  std::uint64_t z = ctr + 0x9E3779B97F4A7C15ull;
  z ^= seed * 0xBF58476D1CE4E5B9ull;
  z ^= stream * 0x94D049BB133111EBull;
  // two splitmix64 finalization rounds
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

double RngStream::uniform() {
  std::uint64_t w = mix_word(seed, stream, counter++);
  return ((w >> 11) + 1) * 0x1.0p-53;  // (0, 1], safe for log()
}

double RngStream::normal() {
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

cplx RngStream::cnormal() {
  // Box-Muller pair scaled to unit complex variance.
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-std::log(u1));
  double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

cvec sample_standard_complex_gaussian(RngStream& stream, std::size_t n) {
  cvec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = stream.cnormal();
  }
  return out;
}

void parallel_chunks(std::size_t n_chunks, int n_threads,
                     const std::function<void(std::size_t)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = n_threads > 0 ? static_cast<std::size_t>(n_threads)
                                      : std::max(1u, hw);
  workers = std::min(workers, n_chunks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_chunks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n_chunks) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mimo
