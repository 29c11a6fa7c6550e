#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace shuttercert {

// Small exact rational for tolerance-free geometry in test fixtures.
// Arithmetic goes through 128-bit intermediates; inputs are expected to be
// probabilities with modest denominators, far from overflow.
struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rat() = default;
    Rat(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend Rat operator+(Rat a, Rat b) {
        __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return make(n, d);
    }
    friend Rat operator-(Rat a, Rat b) {
        __int128 n = static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return make(n, d);
    }
    friend Rat operator*(Rat a, Rat b) {
        return make(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
    }
    friend bool operator==(Rat a, Rat b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(Rat a, Rat b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(Rat a, Rat b) { return a < b || a == b; }

    int sign() const { return num > 0 ? 1 : num < 0 ? -1 : 0; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

private:
    static Rat make(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        return from_reduced(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    }
    static Rat from_reduced(std::int64_t n, std::int64_t d) {
        Rat r;
        r.num = n;
        r.den = d;
        return r;
    }
};

// Exact membership of (alpha, beta) in the detector-strategy polytope, the
// convex hull of (0,0), (p,0), (1,1), (1-p,1). Boundary counts as inside.
bool feasible_exact(const Rat& alpha, const Rat& beta, const Rat& p);

}  // namespace shuttercert
