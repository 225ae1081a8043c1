#include "escalier/field.hpp"

namespace escalier {

Field Field::prime(long p) {
  if (p < 2 || p >= (1L << 31))
    throw Error("UnsupportedField", "prime characteristic must satisfy 2 <= p < 2^31");
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) throw Error("UnsupportedField", "characteristic is not prime");
  return Field(p);
}

Q Field::reduce(const Q& x) const {
  if (p_ == 0) {
    Q y = x;
    y.canonicalize();
    return y;
  }
  // residue of num * den^{-1} mod p
  Z num = x.get_num(), den = x.get_den();
  Z p(p_);
  Z dres;
  mpz_mod(dres.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
  if (dres == 0) throw Error("FieldMismatch", "denominator divisible by the characteristic");
  Z dinv;
  if (mpz_invert(dinv.get_mpz_t(), dres.get_mpz_t(), p.get_mpz_t()) == 0)
    throw Error("FieldMismatch", "denominator not invertible mod p");
  Z r;
  mpz_mod(r.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
  r = r * dinv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
  return Q(r);
}

Q Field::add(const Q& a, const Q& b) const { return reduce(Q(a + b)); }
Q Field::sub(const Q& a, const Q& b) const { return reduce(Q(a - b)); }
Q Field::mul(const Q& a, const Q& b) const { return reduce(Q(a * b)); }
Q Field::neg(const Q& a) const { return reduce(Q(-a)); }

Q Field::inv(const Q& a) const {
  Q r = reduce(a);
  if (r == 0) throw Error("DivisionByZero", "inverse of zero");
  if (p_ == 0) return Q(1) / r;
  Z ai = r.get_num(), p(p_), out;
  if (mpz_invert(out.get_mpz_t(), ai.get_mpz_t(), p.get_mpz_t()) == 0)
    throw Error("DivisionByZero", "element not invertible mod p");
  return Q(out);
}

Q Field::div(const Q& a, const Q& b) const { return mul(a, inv(b)); }

Q Field::binomial(long b, long a) const {
  if (a < 0 || b < 0 || a > b) return Q(0);
  if (p_ == 0) {
    Z r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(a));
    return Q(r);
  }
  // Lucas: product of digit binomials base p
  Z acc(1), p(p_);
  long bb = b, aa = a;
  while (bb > 0 || aa > 0) {
    long bd = bb % p_, ad = aa % p_;
    if (ad > bd) return Q(0);
    Z d;
    mpz_bin_uiui(d.get_mpz_t(), static_cast<unsigned long>(bd), static_cast<unsigned long>(ad));
    acc = acc * d;
    mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), p.get_mpz_t());
    bb /= p_;
    aa /= p_;
  }
  return Q(acc);
}

Q Field::parse(const std::string& s) const {
  if (s.empty()) throw Error("ParseError", "empty rational literal");
  Q v;
  if (mpq_set_str(v.get_mpq_t(), s.c_str(), 10) != 0)
    throw Error("ParseError", "bad rational literal '" + s + "'");
  if (v.get_den() == 0) throw Error("ParseError", "zero denominator in '" + s + "'");
  v.canonicalize();
  return reduce(v);
}

std::string Field::print(const Q& x) { return x.get_str(); }

std::string Field::tag() const {
  return p_ == 0 ? std::string("q") : "fp:" + std::to_string(p_);
}

Field Field::from_tag(const std::string& tag) {
  if (tag == "q") return rationals();
  if (tag.rfind("fp:", 0) == 0) {
    try {
      return prime(std::stol(tag.substr(3)));
    } catch (const std::logic_error&) {
      throw Error("UnsupportedField", "bad field tag '" + tag + "'");
    }
  }
  throw Error("UnsupportedField", "bad field tag '" + tag + "' (want q or fp:<p>)");
}

std::uint64_t Rng::next() {
  std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

long Rng::below(long n) {
  if (n <= 0) throw Error("Internal", "Rng::below needs n > 0");
  // rejection sampling keeps the distribution exactly uniform
  std::uint64_t un = static_cast<std::uint64_t>(n);
  std::uint64_t lim = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= lim);
  return static_cast<long>(v % un);
}

long Rng::range(long lo, long hi) { return lo + below(hi - lo + 1); }

Rng Rng::fork() { return Rng(next() ^ 0xd1b54a32d192ed03ULL); }

}  // namespace escalier
