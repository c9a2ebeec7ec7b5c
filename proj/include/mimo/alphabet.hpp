#ifndef MIMO_ALPHABET_HPP
#define MIMO_ALPHABET_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "mimo/numerics.hpp"

namespace mimo {

// Finite input alphabet: M complex vectors of dimension n_t with a
// probability for each. Normalized so E{x x^dag} = (1/n_t) I, which for
// n_t = 1 is plain unit average power.
struct Alphabet {
  std::vector<cvec> points;
  std::vector<double> probs;
  std::size_t n_t = 1;

  std::size_t size() const { return points.size(); }
  bool equiprobable(double tol = 1e-12) const;

  // Checks the probability simplex and the second-moment normalization.
  // Throws std::invalid_argument on violation.
  void validate() const;
};

// kind: "bpsk", "qpsk", "psk<m>", "qam<m>" (square m in {4, 16, 64}).
Alphabet make_scalar(const std::string& kind);

Alphabet make_bpsk();
Alphabet make_qpsk();
Alphabet make_psk(std::size_t m);
Alphabet make_qam(std::size_t m);

// Per-antenna product of a unit-power scalar alphabet, rescaled by
// 1/sqrt(n_t). Output size M^n_t; throws "alphabet too large" past cap.
Alphabet product_alphabet(const Alphabet& scalar, std::size_t n_t,
                          std::size_t cap = 4096);

// sum_i p_i log(1/p_i), nats.
double entropy(const Alphabet& a);

// {"nt":K,"points":[{"re":[...],"im":[...]},...],"probs":[...]}
Alphabet alphabet_from_json_file(const std::string& path);

}  // namespace mimo

#endif
