#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "cfllab/errors.hpp"

namespace cfllab {

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace detail

/// Iterative radix-2 FFT with precomputed twiddles and bit-reversal table,
/// plus packed real transforms built on a half-size complex plan. One plan
/// per grid size; transforms reuse the tables with no allocation.
class Fft {
  public:
    explicit Fft(std::size_t n) : n_(n) {
        if (!detail::is_power_of_two(n) || n < 2) throw ContractError("Fft: size must be a power of two >= 2");
        rev_.resize(n);
        std::size_t bits = 0;
        while ((std::size_t{1} << bits) < n) ++bits;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < bits; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
            rev_[i] = r;
        }
        tw_.resize(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j) {
            const double ang = -2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
            tw_[j] = std::complex<double>(std::cos(ang), std::sin(ang));
        }
    }

    std::size_t size() const { return n_; }

    /// In-place forward transform, X_k = sum_j x_j e^{-2 pi i jk/n}.
    void forward(std::complex<double>* a) const { transform(a, false); }

    /// In-place inverse transform including the 1/n factor.
    void inverse(std::complex<double>* a) const {
        transform(a, true);
        const double s = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) a[i] *= s;
    }

  private:
    void transform(std::complex<double>* a, bool inv) const {
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j = rev_[i];
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t stride = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                std::size_t tw = 0;
                for (std::size_t j = 0; j < half; ++j, tw += stride) {
                    const std::complex<double> w = inv ? std::conj(tw_[tw]) : tw_[tw];
                    const std::complex<double> t = w * a[start + j + half];
                    a[start + j + half] = a[start + j] - t;
                    a[start + j] += t;
                }
            }
        }
    }

    std::size_t n_;
    std::vector<std::size_t> rev_;
    std::vector<std::complex<double>> tw_;
};

/// Real transforms of size n (n = 2^k >= 4) through one complex transform of
/// size n/2. Spectra hold modes 0..n/2 inclusive.
class RealFft {
  public:
    explicit RealFft(std::size_t n) : n_(n), half_(n / 2), cfft_(n / 2), z_(n / 2) {
        if (!detail::is_power_of_two(n) || n < 4) throw ContractError("RealFft: size must be a power of two >= 4");
        rot_.resize(half_ + 1);
        for (std::size_t k = 0; k <= half_; ++k) {
            const double ang = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
            rot_[k] = std::complex<double>(std::cos(ang), std::sin(ang));
        }
    }

    std::size_t size() const { return n_; }
    std::size_t spectrum_size() const { return half_ + 1; }

    void forward(const double* x, std::complex<double>* spec) const {
        for (std::size_t j = 0; j < half_; ++j) z_[j] = std::complex<double>(x[2 * j], x[2 * j + 1]);
        cfft_.forward(z_.data());
        for (std::size_t k = 0; k <= half_; ++k) {
            const std::complex<double> zk = (k == half_) ? z_[0] : z_[k];
            const std::complex<double> zmk = std::conj(z_[(half_ - k) % half_]);
            const std::complex<double> even = 0.5 * (zk + zmk);
            const std::complex<double> odd = 0.5 * (zk - zmk);
            spec[k] = even + std::complex<double>(0.0, -1.0) * rot_[k] * odd;
        }
    }

    void inverse(const std::complex<double>* spec, double* x) const {
        for (std::size_t k = 0; k < half_; ++k) {
            const std::complex<double> xk = spec[k];
            const std::complex<double> xmk = std::conj(spec[half_ - k]);
            const std::complex<double> sum = xk + xmk;
            const std::complex<double> diff = xk - xmk;
            z_[k] = 0.5 * (sum + std::complex<double>(0.0, 1.0) * std::conj(rot_[k]) * diff);
        }
        cfft_.inverse(z_.data());
        for (std::size_t j = 0; j < half_; ++j) {
            x[2 * j] = z_[j].real();
            x[2 * j + 1] = z_[j].imag();
        }
    }

  private:
    std::size_t n_;
    std::size_t half_;
    Fft cfft_;
    mutable std::vector<std::complex<double>> z_;
    std::vector<std::complex<double>> rot_;
};

} // namespace cfllab
