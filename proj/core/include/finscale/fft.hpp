#pragma once

#include <complex>
#include <vector>

namespace finscale {

// In-place iterative radix-2 Cooley-Tukey transform.  Size must be a power of
// two.  The inverse transform divides by the size.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse = false);

}  // namespace finscale
