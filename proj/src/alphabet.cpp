#include "mimo/alphabet.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mimo {

bool Alphabet::equiprobable(double tol) const {
  const double u = 1.0 / static_cast<double>(size());
  for (double p : probs) {
    if (std::abs(p - u) > tol) return false;
  }
  return true;
}

void Alphabet::validate() const {
  if (n_t < 1) throw std::invalid_argument("alphabet: n_t must be >= 1");
  if (points.size() < 2) throw std::invalid_argument("alphabet: need M >= 2 points");
  if (probs.size() != points.size()) {
    throw std::invalid_argument("alphabet: probs/points length mismatch");
  }
  double psum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) throw std::invalid_argument("alphabet: probabilities must be positive");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-12) {
    throw std::invalid_argument("alphabet: probabilities must sum to 1");
  }
  for (const auto& x : points) {
    if (x.size() != n_t) throw std::invalid_argument("alphabet: point dimension mismatch");
  }
  // E{x x^dag} = (1/n_t) I
  const double target = 1.0 / static_cast<double>(n_t);
  for (std::size_t r = 0; r < n_t; ++r) {
    for (std::size_t c = 0; c < n_t; ++c) {
      cplx m{0.0, 0.0};
      for (std::size_t i = 0; i < points.size(); ++i) {
        m += probs[i] * points[i][r] * std::conj(points[i][c]);
      }
      cplx want = (r == c) ? cplx{target, 0.0} : cplx{0.0, 0.0};
      if (std::abs(m - want) > 1e-9) {
        throw std::invalid_argument("alphabet: second moment is not (1/n_t) I");
      }
    }
  }
}

namespace {

Alphabet from_scalar_points(cvec pts) {
  Alphabet a;
  a.n_t = 1;
  const double p = 1.0 / static_cast<double>(pts.size());
  for (auto& z : pts) {
    a.points.push_back({z});
    a.probs.push_back(p);
  }
  a.validate();
  return a;
}

}  // namespace

Alphabet make_bpsk() { return from_scalar_points({{1.0, 0.0}, {-1.0, 0.0}}); }

Alphabet make_qpsk() {
  const double s = 1.0 / std::sqrt(2.0);
  return from_scalar_points({{s, s}, {-s, s}, {-s, -s}, {s, -s}});
}

Alphabet make_psk(std::size_t m) {
  if (m < 2) throw std::invalid_argument("psk: need m >= 2");
  cvec pts;
  for (std::size_t k = 0; k < m; ++k) {
    double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m);
    pts.push_back({std::cos(phi), std::sin(phi)});
  }
  return from_scalar_points(std::move(pts));
}

Alphabet make_qam(std::size_t m) {
  if (m != 4 && m != 16 && m != 64) {
    throw std::invalid_argument("qam: supported sizes are 4, 16, 64");
  }
  std::size_t side = (m == 4) ? 2 : (m == 16 ? 4 : 8);
  std::vector<double> levels;
  for (std::size_t k = 0; k < side; ++k) {
    levels.push_back(-static_cast<double>(side - 1) + 2.0 * static_cast<double>(k));
  }
  cvec pts;
  double power = 0.0;
  for (double re : levels) {
    for (double im : levels) {
      pts.push_back({re, im});
      power += re * re + im * im;
    }
  }
  double scale = 1.0 / std::sqrt(power / static_cast<double>(m));
  for (auto& z : pts) z *= scale;
  return from_scalar_points(std::move(pts));
}

Alphabet make_scalar(const std::string& kind) {
  if (kind == "bpsk") return make_bpsk();
  if (kind == "qpsk") return make_qpsk();
  if (kind.rfind("psk", 0) == 0) {
    return make_psk(std::stoul(kind.substr(3)));
  }
  if (kind.rfind("qam", 0) == 0) {
    return make_qam(std::stoul(kind.substr(3)));
  }
  throw std::invalid_argument("unknown constellation: " + kind);
}

Alphabet product_alphabet(const Alphabet& scalar, std::size_t n_t,
                          std::size_t cap) {
  if (scalar.n_t != 1) throw std::invalid_argument("product: base alphabet must be scalar");
  if (n_t < 1) throw std::invalid_argument("product: n_t must be >= 1");
  scalar.validate();

  double m_out = std::pow(static_cast<double>(scalar.size()),
                          static_cast<double>(n_t));
  if (m_out > static_cast<double>(cap)) {
    throw std::invalid_argument("alphabet too large");
  }
  if (n_t == 1) return scalar;

  const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
  Alphabet out;
  out.n_t = n_t;
  std::size_t total = static_cast<std::size_t>(m_out + 0.5);
  for (std::size_t idx = 0; idx < total; ++idx) {
    cvec v(n_t);
    double p = 1.0;
    std::size_t rem = idx;
    for (std::size_t k = 0; k < n_t; ++k) {
      std::size_t digit = rem % scalar.size();
      rem /= scalar.size();
      v[k] = scalar.points[digit][0] * scale;
      p *= scalar.probs[digit];
    }
    out.points.push_back(std::move(v));
    out.probs.push_back(p);
  }
  out.validate();
  return out;
}

double entropy(const Alphabet& a) {
  double h = 0.0;
  for (double p : a.probs) {
    h -= p * std::log(p);
  }
  return h;
}

Alphabet alphabet_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("alphabet json: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("alphabet json: parse error: ") + e.what());
  }
  for (const char* field : {"nt", "points", "probs"}) {
    if (!j.contains(field)) {
      throw std::invalid_argument(std::string("alphabet json: missing field '") + field + "'");
    }
  }
  Alphabet a;
  a.n_t = j.at("nt").get<std::size_t>();
  for (const auto& pt : j.at("points")) {
    if (!pt.contains("re") || !pt.contains("im")) {
      throw std::invalid_argument("alphabet json: point missing 're'/'im'");
    }
    auto re = pt.at("re").get<std::vector<double>>();
    auto im = pt.at("im").get<std::vector<double>>();
    if (re.size() != a.n_t || im.size() != a.n_t) {
      throw std::invalid_argument("alphabet json: point dimension != nt");
    }
    cvec v(a.n_t);
    for (std::size_t k = 0; k < a.n_t; ++k) v[k] = {re[k], im[k]};
    a.points.push_back(std::move(v));
  }
  a.probs = j.at("probs").get<std::vector<double>>();
  a.validate();
  return a;
}

}  // namespace mimo
