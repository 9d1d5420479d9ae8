#include "deformq/random.hpp"

namespace dq {

long RandomSource::integer(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(engine_() % span);
}

Rational RandomSource::rational(long max_num, long max_den) {
  long p = 0;
  while (p == 0) p = integer(-max_num, max_num);
  return make_rational(p, integer(1, max_den));
}

PolyRep RandomSource::poly(int dim, int max_degree, int max_terms) {
  PolyRep p(dim);
  const long terms = integer(1, max_terms);
  for (long t = 0; t < terms; ++t) {
    long budget = integer(0, max_degree);
    Exponent e(static_cast<std::size_t>(dim), 0);
    while (budget-- > 0) e[static_cast<std::size_t>(integer(0, dim - 1))] += 1;
    p.add_term(e, rational());
  }
  return p;
}

TrigRep RandomSource::trig(int dim, int max_freq, int max_modes, bool real_valued) {
  TrigRep t(dim);
  const long modes = integer(1, max_modes);
  for (long m = 0; m < modes; ++m) {
    Exponent k(static_cast<std::size_t>(dim));
    for (int& v : k) v = static_cast<int>(integer(-max_freq, max_freq));
    ComplexRational c(rational(), integer(0, 1) == 0 ? Rational(0) : rational());
    t.add_mode(k, c);
    if (real_valued) {
      Exponent neg = k;
      for (int& v : neg) v = -v;
      if (neg == k) {
        t.add_mode(k, ComplexRational(Rational(0), -c.im));
      } else {
        t.add_mode(neg, c.conj());
      }
    }
  }
  return t;
}

FormalFunction RandomSource::formal_poly(int dim, int N, int max_degree, int max_terms) {
  std::vector<SmoothRep> coeffs;
  for (int i = 0; i <= N; ++i) {
    if (integer(0, 2) == 0) {
      coeffs.emplace_back(dim);
    } else {
      coeffs.emplace_back(poly(dim, max_degree, max_terms));
    }
  }
  return FormalFunction(std::move(coeffs));
}

FormalFunction RandomSource::formal_trig(int dim, int N, int max_freq, int max_modes) {
  std::vector<SmoothRep> coeffs;
  for (int i = 0; i <= N; ++i) {
    if (integer(0, 2) == 0) {
      coeffs.emplace_back(TrigRep(dim));
    } else {
      coeffs.emplace_back(trig(dim, max_freq, max_modes));
    }
  }
  return FormalFunction(std::move(coeffs));
}

}  // namespace dq
