#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mimo/channel.hpp"

using namespace mimo;

TEST_CASE("scalar channel with bpsk") {
  auto rc = received_constellation(ChannelMatrix::scalar({1.0, 0.0}), make_bpsk());
  REQUIRE(rc.size() == 2);
  CHECK(rc.images[0][0] == cplx{1.0, 0.0});
  CHECK(rc.images[1][0] == cplx{-1.0, 0.0});
  CHECK(rc.d2(0, 1) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(rc.d2(0, 0) == 0.0);
  CHECK(rc.d2(1, 1) == 0.0);
}

TEST_CASE("two-antenna repetition channel") {
  ChannelMatrix h;
  h.n_rx = 2;
  h.n_tx = 1;
  h.entries = {{1.0, 0.0}, {1.0, 0.0}};
  auto rc = received_constellation(h, make_bpsk());
  CHECK(rc.images[0][0] == cplx{1.0, 0.0});
  CHECK(rc.images[0][1] == cplx{1.0, 0.0});
  CHECK(rc.d2(0, 1) == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("dimension mismatch errors") {
  CHECK_THROWS(received_constellation(ChannelMatrix::scalar({1.0, 0.0}),
                                      product_alphabet(make_bpsk(), 2)));
}

TEST_CASE("distance table matches a naive recomputation") {
  RngStream rng(5, 0);
  auto h = sample_rayleigh(rng, 2, 2);
  auto a = product_alphabet(make_qpsk(), 2);
  auto rc = received_constellation(h, a);
  REQUIRE(rc.size() == 16);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      // recompute from scratch, entry by entry
      double d2 = 0.0;
      for (std::size_t r = 0; r < 2; ++r) {
        cplx yi{0, 0}, yj{0, 0};
        for (std::size_t c = 0; c < 2; ++c) {
          yi += h.at(r, c) * a.points[i][c];
          yj += h.at(r, c) * a.points[j][c];
        }
        d2 += std::norm(yi - yj);
      }
      CHECK(std::abs(rc.d2(i, j) - d2) < 1e-12);
      CHECK(rc.d2(i, j) == rc.d2(j, i));
    }
  }
}

TEST_CASE("rayleigh sampling is deterministic") {
  RngStream s1(77, 3), s2(77, 3);
  auto h1 = sample_rayleigh(s1, 3, 2);
  auto h2 = sample_rayleigh(s2, 3, 2);
  CHECK(h1.entries == h2.entries);
}

TEST_CASE("rayleigh entry power") {
  RngStream rng(11, 0);
  const std::size_t n = 100'000;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += std::norm(sample_rayleigh(rng, 1, 1).entries[0]);
  }
  CHECK(acc / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("rayleigh vector norm is gamma distributed") {
  RngStream rng(12, 0);
  const std::size_t n = 100'000;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += sample_rayleigh(rng, 2, 1).frobenius_sq();
  }
  // ||h||^2 ~ Gamma(shape 2, scale 1): mean 2
  CHECK(acc / n == doctest::Approx(2.0).epsilon(0.015));
}

TEST_CASE("scaling the channel scales distances") {
  RngStream rng(21, 0);
  auto h = sample_rayleigh(rng, 2, 2);
  auto a = product_alphabet(make_bpsk(), 2);
  auto rc = received_constellation(h, a);
  const cplx c{0.7, -1.3};
  ChannelMatrix hs = h;
  for (auto& e : hs.entries) e *= c;
  auto rcs = received_constellation(hs, a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(std::abs(rcs.d2(i, j) - std::norm(c) * rc.d2(i, j)) <
            1e-12 * std::max(1.0, rc.d2(i, j)));
    }
  }
}

TEST_CASE("simo distances factor through the channel norm") {
  RngStream rng(22, 0);
  auto h = sample_rayleigh(rng, 3, 1);
  auto a = make_qpsk();
  auto rc = received_constellation(h, a);
  double gain = h.frobenius_sq();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      double want = gain * std::norm(a.points[i][0] - a.points[j][0]);
      CHECK(rc.d2(i, j) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("channel json parse") {
  const char* path = "channel_test.json";
  {
    std::ofstream out(path);
    out << R"({"rows":2,"cols":1,"re":[[1.0],[0.5]],"im":[[0.0],[-0.5]]})";
  }
  auto h = ChannelMatrix::from_json_file(path);
  CHECK(h.n_rx == 2);
  CHECK(h.n_tx == 1);
  CHECK(h.at(1, 0) == cplx{0.5, -0.5});

  {
    std::ofstream out(path);
    out << R"({"rows":2,"cols":1,"re":[[1.0],[0.5]]})";
  }
  CHECK_THROWS_WITH(ChannelMatrix::from_json_file(path),
                    "channel json: missing field 'im'");
  {
    std::ofstream out(path);
    out << R"({"rows":2,"cols":1,"re":[[1.0]],"im":[[0.0],[0.0]]})";
  }
  CHECK_THROWS_AS(ChannelMatrix::from_json_file(path), std::invalid_argument);
  std::remove(path);
}
