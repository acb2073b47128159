// rctrp - statistics toolkit for reverberation-chamber TRP measurements
// Copyright (C) 2026 the rctrp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RCTRP_FFT_HPP
#define RCTRP_FFT_HPP

#include <complex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace rctrp {

// Thin FFTW wrappers for the small transforms this toolkit needs (grids of
// a few hundred points). Transforms are unnormalized, matching FFTW:
// backward(forward(x)) == n * x. Plans are created per call with
// FFTW_ESTIMATE; plan creation is not thread-safe, so keep transform calls
// on one thread.

inline void fft_1d_inplace(std::vector<std::complex<double>> &data, int sign) {
    if (data.empty())
        throw std::invalid_argument("fft_1d_inplace: empty input");
    auto *ptr = reinterpret_cast<fftw_complex *>(data.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr,
                                      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

inline void fft_2d_inplace(std::vector<std::complex<double>> &data, int rows, int cols, int sign) {
    if (rows < 1 || cols < 1 || data.size() != static_cast<size_t>(rows) * cols)
        throw std::invalid_argument("fft_2d_inplace: size mismatch");
    auto *ptr = reinterpret_cast<fftw_complex *>(data.data());
    fftw_plan plan = fftw_plan_dft_2d(rows, cols, ptr, ptr,
                                      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

} // namespace rctrp

#endif
