#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mimo/mmse.hpp"
#include "oracles.hpp"

using namespace mimo;

namespace {

const QuadratureRule kRule = QuadratureRule::gauss_hermite();

}  // namespace

TEST_CASE("bpsk closed forms at snr = 0") {
  CHECK(mmse_real_bpsk(Snr(0.0), kRule) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mmse_complex_bpsk(Snr(0.0), kRule) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bpsk closed forms decrease and vanish") {
  double prev_r = 1.0 + 1e-12, prev_c = 1.0 + 1e-12;
  for (double s : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
    double r = mmse_real_bpsk(Snr(s), kRule);
    double c = mmse_complex_bpsk(Snr(s), kRule);
    CHECK(r < prev_r);
    CHECK(c < prev_c);
    CHECK(r > 0.0);
    CHECK(c > 0.0);
    prev_r = r;
    prev_c = c;
  }
  CHECK(mmse_complex_bpsk(Snr(100.0), kRule) < 1e-10);
}

TEST_CASE("real bpsk against a trapezoid oracle") {
  for (double s : {0.25, 1.0, 4.0}) {
    double want = 1.0 - oracles::trapezoid(
                            [s](double y) {
                              return std::tanh(std::sqrt(s) * y) *
                                     std::exp(-0.5 * (y - std::sqrt(s)) *
                                              (y - std::sqrt(s))) /
                                     std::sqrt(2.0 * M_PI);
                            },
                            std::sqrt(s) - 14.0, std::sqrt(s) + 14.0, 400'000);
    CHECK(std::abs(mmse_real_bpsk(Snr(s), kRule) - want) < 5e-9);
  }
}

TEST_CASE("complex bpsk against a trapezoid oracle") {
  for (double s : {0.25, 1.0, 4.0}) {
    double want = 1.0 - oracles::trapezoid(
                            [s](double a) {
                              return std::tanh(2.0 * std::sqrt(s) * a) *
                                     std::exp(-(a - std::sqrt(s)) *
                                              (a - std::sqrt(s))) /
                                     std::sqrt(M_PI);
                            },
                            std::sqrt(s) - 10.0, std::sqrt(s) + 10.0, 400'000);
    CHECK(std::abs(mmse_complex_bpsk(Snr(s), kRule) - want) < 5e-9);
  }
}

TEST_CASE("real and complex forms are a power-of-two apart") {
  for (double s : {0.3, 1.0, 3.7, 9.0}) {
    CHECK(mmse_complex_bpsk(Snr(s), kRule) ==
          doctest::Approx(mmse_real_bpsk(Snr(2.0 * s), kRule)).epsilon(1e-11));
  }
}

TEST_CASE("general siso path reproduces bpsk") {
  auto a = make_bpsk();
  for (double s : {0.0, 0.5, 2.0, 8.0}) {
    CHECK(std::abs(mmse_siso_general(a, Snr(s), kRule) -
                   mmse_complex_bpsk(Snr(s), kRule)) < 2e-8);
  }
}

TEST_CASE("qpsk is bpsk at half snr") {
  auto a = make_qpsk();
  for (double s : {0.5, 2.0, 8.0}) {
    CHECK(std::abs(mmse_siso_general(a, Snr(s), kRule) -
                   mmse_complex_bpsk(Snr(0.5 * s), kRule)) < 2e-8);
  }
}

TEST_CASE("siso qam16 endpoints") {
  auto a = make_qam(16);
  CHECK(mmse_siso_general(a, Snr(0.0), kRule) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mmse_siso_general(a, Snr(3000.0), kRule) < 1e-8);
}

TEST_CASE("siso alphabet size cap") {
  CHECK_THROWS(mmse_siso_general(make_psk(128), Snr(1.0), kRule));
}

TEST_CASE("simo is the matched-filter reduction") {
  RngStream rng(41, 0);
  auto h = sample_rayleigh(rng, 3, 1);
  auto a = make_qpsk();
  double gain = h.frobenius_sq();
  for (double s : {0.5, 2.0}) {
    CHECK(mmse_simo(h, a, Snr(s), kRule) ==
          doctest::Approx(gain * mmse_siso_general(a, Snr(s * gain), kRule))
              .epsilon(1e-12));
  }
}

TEST_CASE("simo is phase invariant") {
  auto a = make_qam(16);
  ChannelMatrix h1;
  h1.n_rx = 2;
  h1.n_tx = 1;
  h1.entries = {{0.8, 0.0}, {0.6, 0.0}};
  ChannelMatrix h2 = h1;
  const cplx rot = std::polar(1.0, 1.234);
  for (auto& e : h2.entries) e *= rot;
  CHECK(mmse_simo(h1, a, Snr(2.0), kRule) ==
        doctest::Approx(mmse_simo(h2, a, Snr(2.0), kRule)).epsilon(1e-12));
}

TEST_CASE("mc config validation") {
  McConfig bad;
  bad.samples = 10;
  CHECK_THROWS(bad.validate());
  McConfig ok;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("monte carlo agrees with the siso closed form") {
  auto a = make_bpsk();
  auto h = ChannelMatrix::scalar({1.0, 0.0});
  McConfig cfg;
  cfg.seed = 7;
  cfg.samples = 400'000;
  for (double s : {0.5, 2.0}) {
    auto est = mmse_mimo_mc(h, a, Snr(s), cfg);
    double exact = mmse_complex_bpsk(Snr(s), kRule);
    CHECK(est.samples == cfg.samples);
    CHECK(est.std_error > 0.0);
    CHECK(std::abs(est.mean - exact) < 4.0 * est.std_error);
  }
}

TEST_CASE("monte carlo agrees with the simo closed form") {
  RngStream rng(43, 0);
  auto h = sample_rayleigh(rng, 2, 1);
  auto a = make_qpsk();
  McConfig cfg;
  cfg.seed = 9;
  cfg.samples = 400'000;
  auto est = mmse_mimo_mc(h, a, Snr(1.5), cfg);
  double exact = mmse_simo(h, a, Snr(1.5), kRule);
  CHECK(std::abs(est.mean - exact) < 4.0 * est.std_error);
}

TEST_CASE("monte carlo is thread-count invariant") {
  RngStream rng(47, 0);
  auto h = sample_rayleigh(rng, 2, 2);
  auto a = product_alphabet(make_qpsk(), 2);
  McConfig c1;
  c1.seed = 11;
  c1.samples = 50'000;
  c1.chunk = 1'000;
  c1.threads = 1;
  McConfig c4 = c1;
  c4.threads = 4;
  auto e1 = mmse_mimo_mc(h, a, Snr(2.0), c1);
  auto e4 = mmse_mimo_mc(h, a, Snr(2.0), c4);
  CHECK(e1.mean == e4.mean);
  CHECK(e1.std_error == e4.std_error);
}

TEST_CASE("monte carlo depends on the seed, not incidental state") {
  auto h = ChannelMatrix::scalar({1.0, 0.0});
  auto a = make_qam(16);
  McConfig cfg;
  cfg.seed = 100;
  cfg.samples = 20'000;
  auto e1 = mmse_mimo_mc(h, a, Snr(1.0), cfg);
  auto e2 = mmse_mimo_mc(h, a, Snr(1.0), cfg);
  CHECK(e1.mean == e2.mean);
  cfg.seed = 101;
  auto e3 = mmse_mimo_mc(h, a, Snr(1.0), cfg);
  CHECK(e1.mean != e3.mean);
}

TEST_CASE("mimo monte carlo at zero snr gives the total signal power") {
  // x hat is the prior mean (zero), so the error averages E||Hx||^2; only
  // the random choice of x contributes to the spread.
  RngStream rng(53, 0);
  auto h = sample_rayleigh(rng, 2, 2);
  auto a = product_alphabet(make_bpsk(), 2);
  double want = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cvec img = h.apply(a.points[i]);
    for (const auto& z : img) want += a.probs[i] * std::norm(z);
  }
  McConfig cfg;
  cfg.seed = 5;
  cfg.samples = 100'000;
  auto est = mmse_mimo_mc(h, a, Snr(0.0), cfg);
  CHECK(std::abs(est.mean - want) < 4.0 * est.std_error);
}
