#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "cfllab/errors.hpp"

namespace cfllab {

/// Exact fraction of machine integers. Used for stability exponents such as
/// 2r/(2r-1), which tests compare exactly rather than through doubles.
class Rational {
  public:
    Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) : p_(num), q_(den) {
        if (q_ == 0) throw ContractError("Rational: zero denominator");
        normalize();
    }

    std::int64_t num() const { return p_; }
    std::int64_t den() const { return q_; }

    double value() const { return static_cast<double>(p_) / static_cast<double>(q_); }

    std::string str() const {
        if (q_ == 1) return std::to_string(p_);
        return std::to_string(p_) + "/" + std::to_string(q_);
    }

    friend Rational operator+(Rational a, Rational b) {
        return Rational(a.p_ * b.q_ + b.p_ * a.q_, a.q_ * b.q_);
    }
    friend Rational operator-(Rational a, Rational b) {
        return Rational(a.p_ * b.q_ - b.p_ * a.q_, a.q_ * b.q_);
    }
    friend Rational operator*(Rational a, Rational b) {
        return Rational(a.p_ * b.p_, a.q_ * b.q_);
    }
    friend Rational operator/(Rational a, Rational b) {
        if (b.p_ == 0) throw ContractError("Rational: division by zero");
        return Rational(a.p_ * b.q_, a.q_ * b.p_);
    }
    friend bool operator==(Rational a, Rational b) { return a.p_ == b.p_ && a.q_ == b.q_; }
    friend bool operator!=(Rational a, Rational b) { return !(a == b); }
    friend bool operator<(Rational a, Rational b) { return a.p_ * b.q_ < b.p_ * a.q_; }
    friend bool operator<=(Rational a, Rational b) { return a.p_ * b.q_ <= b.p_ * a.q_; }
    friend bool operator>(Rational a, Rational b) { return b < a; }
    friend bool operator>=(Rational a, Rational b) { return b <= a; }

  private:
    void normalize() {
        if (q_ < 0) {
            p_ = -p_;
            q_ = -q_;
        }
        const std::int64_t g = std::gcd(p_ < 0 ? -p_ : p_, q_);
        if (g > 1) {
            p_ /= g;
            q_ /= g;
        }
    }

    std::int64_t p_ = 0;
    std::int64_t q_ = 1;
};

} // namespace cfllab
