#ifndef QUADPROP_FFT_HPP
#define QUADPROP_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace quadprop {

using cdouble = std::complex<double>;

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 DFT, unnormalized:
//   forward (sign = -1): A_k = sum_m a_m exp(-2 pi i k m / N)
void fft_pow2(std::vector<cdouble>& a, int sign);

// Chirp-z transform via Bluestein:
//   X_j = sum_{k=0}^{N-1} a_k exp(i theta_a k) exp(i theta_w k j),  j = 0..M-1.
// Phases are passed as angles so that k*j phase products can be reduced accurately.
std::vector<cdouble> czt(const std::vector<cdouble>& a, std::size_t m, double theta_w,
                         double theta_a);

} // namespace quadprop

#endif
