#include "quadprop/fft.hpp"
#include "quadprop/errors.hpp"

#include <cmath>

namespace quadprop {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_pow2(std::vector<cdouble>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw NumericError("fft_pow2 requires a power-of-two length");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = static_cast<double>(sign) * 2.0 * M_PI / static_cast<double>(len);
        const cdouble wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<cdouble> czt(const std::vector<cdouble>& a, std::size_t m, double theta_w,
                         double theta_a) {
    const std::size_t n = a.size();
    const std::size_t L = next_pow2(n + m - 1);

    auto chirp = [&](std::size_t k) {
        const double kd = static_cast<double>(k);
        const double ang = theta_w * kd * kd * 0.5;
        return cdouble(std::cos(ang), std::sin(ang));
    };

    std::vector<cdouble> b(L, cdouble(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = theta_a * static_cast<double>(k);
        b[k] = a[k] * cdouble(std::cos(ang), std::sin(ang)) * chirp(k);
    }
    std::vector<cdouble> c(L, cdouble(0.0, 0.0));
    for (std::size_t j = 0; j < m; ++j) c[j] = std::conj(chirp(j));
    for (std::size_t k = 1; k < n; ++k) c[L - k] = std::conj(chirp(k));

    fft_pow2(b, -1);
    fft_pow2(c, -1);
    for (std::size_t i = 0; i < L; ++i) b[i] *= c[i];
    fft_pow2(b, +1);

    std::vector<cdouble> out(m);
    const double inv = 1.0 / static_cast<double>(L);
    for (std::size_t j = 0; j < m; ++j) out[j] = b[j] * chirp(j) * inv;
    return out;
}

} // namespace quadprop
