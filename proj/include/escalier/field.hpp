#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace escalier {

using Q = mpq_class;
using Z = mpz_class;

// All failures surface as Error with a stable machine-readable code
// ("FieldMismatch", "JacobianSingular", "NotFiniteType", ...) plus a
// human-oriented message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

// Coefficient field chosen at runtime: the rationals (characteristic 0) or a
// prime field F_p with p < 2^31.  Elements are mpq_class values; in the F_p
// case every element is kept as the canonical residue 0..p-1 and each
// operation reduces.  Keeping a single element type makes series, matrices,
// and JSON plumbing field-agnostic.
class Field {
public:
  Field() : p_(0) {}

  static Field rationals() { return Field(0); }
  static Field prime(long p);

  bool is_rationals() const { return p_ == 0; }
  long characteristic() const { return p_; }
  bool operator==(const Field& o) const { return p_ == o.p_; }
  bool operator!=(const Field& o) const { return p_ != o.p_; }

  Q reduce(const Q& x) const;
  Q add(const Q& a, const Q& b) const;
  Q sub(const Q& a, const Q& b) const;
  Q mul(const Q& a, const Q& b) const;
  Q div(const Q& a, const Q& b) const;
  Q neg(const Q& a) const;
  Q inv(const Q& a) const;
  Q from_long(long v) const { return reduce(Q(v)); }

  // C(b, a) as a field element; base-p digit product (Lucas) in char p.
  Q binomial(long b, long a) const;

  // "n" or "n/d"; reduced into the field.
  Q parse(const std::string& s) const;
  static std::string print(const Q& x);

  std::string tag() const;  // "q" or "fp:<p>"
  static Field from_tag(const std::string& tag);

private:
  explicit Field(long p) : p_(p) {}
  long p_;
};

inline void check_same_field(const Field& a, const Field& b) {
  if (a != b) throw Error("FieldMismatch", "operands over different fields");
}

// Deterministic PRNG (splitmix64) used everywhere randomness is called for;
// no std distributions so streams are identical across platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next();
  // uniform in [0, n), n > 0
  long below(long n);
  // uniform in [lo, hi] inclusive
  long range(long lo, long hi);
  Rng fork();  // independent substream

private:
  std::uint64_t s_;
};

}  // namespace escalier
