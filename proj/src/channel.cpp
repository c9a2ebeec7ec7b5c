#include "mimo/channel.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mimo {

cvec ChannelMatrix::apply(const cvec& x) const {
  if (x.size() != n_tx) throw std::invalid_argument("channel: dimension mismatch");
  cvec y(n_rx, cplx{0.0, 0.0});
  for (std::size_t r = 0; r < n_rx; ++r) {
    cplx acc{0.0, 0.0};
    for (std::size_t c = 0; c < n_tx; ++c) {
      acc += at(r, c) * x[c];
    }
    y[r] = acc;
  }
  return y;
}

double ChannelMatrix::frobenius_sq() const {
  double s = 0.0;
  for (const auto& e : entries) s += std::norm(e);
  return s;
}

ChannelMatrix ChannelMatrix::scalar(cplx h) {
  ChannelMatrix m;
  m.n_rx = 1;
  m.n_tx = 1;
  m.entries = {h};
  return m;
}

ChannelMatrix ChannelMatrix::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("channel json: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("channel json: parse error: ") + e.what());
  }
  for (const char* field : {"rows", "cols", "re", "im"}) {
    if (!j.contains(field)) {
      throw std::invalid_argument(std::string("channel json: missing field '") + field + "'");
    }
  }
  ChannelMatrix m;
  m.n_rx = j.at("rows").get<std::size_t>();
  m.n_tx = j.at("cols").get<std::size_t>();
  if (m.n_rx < 1 || m.n_tx < 1) {
    throw std::invalid_argument("channel json: 'rows' and 'cols' must be >= 1");
  }
  auto re = j.at("re").get<std::vector<std::vector<double>>>();
  auto im = j.at("im").get<std::vector<std::vector<double>>>();
  if (re.size() != m.n_rx) throw std::invalid_argument("channel json: 're' row count != rows");
  if (im.size() != m.n_rx) throw std::invalid_argument("channel json: 'im' row count != rows");
  for (std::size_t r = 0; r < m.n_rx; ++r) {
    if (re[r].size() != m.n_tx) throw std::invalid_argument("channel json: 're' row length != cols");
    if (im[r].size() != m.n_tx) throw std::invalid_argument("channel json: 'im' row length != cols");
    for (std::size_t c = 0; c < m.n_tx; ++c) {
      if (!std::isfinite(re[r][c]) || !std::isfinite(im[r][c])) {
        throw std::invalid_argument("channel json: non-finite entry in 're'/'im'");
      }
      m.entries.push_back({re[r][c], im[r][c]});
    }
  }
  return m;
}

double norm_sq(const cvec& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

cplx inner(const cvec& a, const cvec& b) {
  cplx s{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

ReceivedConstellation received_constellation(const ChannelMatrix& h,
                                             const Alphabet& a) {
  if (a.n_t != h.n_tx) {
    throw std::invalid_argument("received constellation: alphabet n_t != channel n_tx");
  }
  ReceivedConstellation rc;
  const std::size_t m = a.size();
  rc.images.reserve(m);
  for (const auto& x : a.points) {
    rc.images.push_back(h.apply(x));
  }
  rc.pair_d2.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double d2 = 0.0;
      for (std::size_t r = 0; r < h.n_rx; ++r) {
        d2 += std::norm(rc.images[i][r] - rc.images[j][r]);
      }
      rc.pair_d2[i * m + j] = d2;
      rc.pair_d2[j * m + i] = d2;
    }
  }
  return rc;
}

ChannelMatrix sample_rayleigh(RngStream& stream, std::size_t n_rx,
                              std::size_t n_tx) {
  if (n_rx < 1 || n_tx < 1) throw std::invalid_argument("rayleigh: counts must be >= 1");
  ChannelMatrix m;
  m.n_rx = n_rx;
  m.n_tx = n_tx;
  m.entries.resize(n_rx * n_tx);
  for (auto& e : m.entries) e = stream.cnormal();
  return m;
}

}  // namespace mimo
