#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace jdrift {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Exact binomial coefficient via the multiplicative formula.
inline BigInt binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (long i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

// log C(n,k) through lgamma; float path for instances too large for exact work.
inline double log_binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

// Natural log of a positive big integer. Values beyond double range are
// handled by shifting down to a 64-bit window and adding back shift*log(2).
inline double log_big(const BigInt& x) {
    if (x <= 0) throw std::domain_error("log_big: argument must be positive");
    const unsigned long bits = boost::multiprecision::msb(x);
    if (bits <= 900) return std::log(x.convert_to<double>());
    const unsigned long shift = bits - 64;
    const BigInt top = x >> shift;
    return std::log(top.convert_to<double>()) + double(shift) * M_LN2;
}

// Double rendering of a big rational that stays finite even when numerator
// or denominator individually overflow double range.
inline double rat_to_double(const BigRat& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (num == 0) return 0.0;
    const bool negative = num < 0;
    const BigInt a = negative ? BigInt(-num) : num;
    const unsigned long la = boost::multiprecision::msb(a);
    const unsigned long lb = boost::multiprecision::msb(den);
    double value;
    if (la <= 900 && lb <= 900) {
        value = a.convert_to<double>() / den.convert_to<double>();
    } else {
        const unsigned long sa = la > 64 ? la - 64 : 0;
        const unsigned long sb = lb > 64 ? lb - 64 : 0;
        const double top = BigInt(a >> sa).convert_to<double>();
        const double bot = BigInt(den >> sb).convert_to<double>();
        value = std::ldexp(top / bot, int(long(sa) - long(sb)));
    }
    return negative ? -value : value;
}

inline double log_big_rat(const BigRat& r) {
    return log_big(boost::multiprecision::numerator(r)) -
           log_big(boost::multiprecision::denominator(r));
}

inline double logaddexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

// Streaming log-sum-exp with running-max renormalization. The linear-domain
// partial sum is kept Kahan-compensated; shell sums here span dozens of
// orders of magnitude.
class LogSumAccumulator {
public:
    void add(double log_term) {
        if (log_term == -std::numeric_limits<double>::infinity()) return;
        if (log_term > max_) {
            const double scale = std::exp(max_ - log_term);
            sum_ *= scale;
            comp_ *= scale;
            max_ = log_term;
            add_compensated(1.0);
        } else {
            add_compensated(std::exp(log_term - max_));
        }
    }

    double log_sum() const {
        if (sum_ <= 0.0) return -std::numeric_limits<double>::infinity();
        return max_ + std::log(sum_);
    }

private:
    void add_compensated(double term) {
        const double y = term - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }

    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Binary entropy in nats.
inline double binary_entropy(double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0) return 0.0;
    return -alpha * std::log(alpha) - (1.0 - alpha) * std::log(1.0 - alpha);
}

}  // namespace jdrift
