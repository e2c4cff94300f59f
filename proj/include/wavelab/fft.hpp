#pragma once

// Thin FFTW wrapper: unnormalized c2c transforms with a mutex-guarded plan
// cache. Plans are created with FFTW_ESTIMATE | FFTW_UNALIGNED so the
// new-array execute interface is safe from any thread on any buffer.

#include <complex>

#include "wavelab/grid.hpp"

namespace wavelab::detail {

// sign +1: sum_x f(x) exp(+i k x)  (FFTW_BACKWARD)
// sign -1: sum_k f(k) exp(-i k x)  (FFTW_FORWARD)
// in and out must be distinct buffers of g.node_count() entries.
void dft(const GridSpec& g, const cplx* in, cplx* out, int sign);

}  // namespace wavelab::detail
