#ifndef TRIGSTAT_RATIONAL_HPP
#define TRIGSTAT_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <gmpxx.h>

namespace trigstat {

// Exact rational arithmetic, backed by GMP. All probability masses and
// densities in this library are Rat end to end; doubles appear only in
// human-readable rendering.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_u(std::uint64_t num, std::uint64_t den = 1) {
    Rat r(mpz_class(static_cast<unsigned long>(num)),
          mpz_class(static_cast<unsigned long>(den)));
    r.canonicalize();
    return r;
}

// q^e with e possibly negative.
inline Rat rat_pow(const Rat& base, long e) {
    Rat acc(1);
    Rat b = e >= 0 ? base : Rat(1) / base;
    long n = e >= 0 ? e : -e;
    for (long i = 0; i < n; ++i) acc *= b;
    return acc;
}

// Canonical "num/den" form, denominator always explicit.
inline std::string rat_str(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double rat_double(const Rat& r) { return r.get_d(); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

} // namespace trigstat

#endif
