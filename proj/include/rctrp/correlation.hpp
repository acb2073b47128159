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

#ifndef RCTRP_CORRELATION_HPP
#define RCTRP_CORRELATION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "rctrp/fft.hpp"
#include "rctrp/model.hpp"
#include "rctrp/sampling.hpp"

namespace rctrp {

// Effective-sample estimation on the two-stirrer grid.
//
// The stir sequence is correlated against every cyclic shift of itself
// along both stirrer axes. A shift whose Pearson coefficient reaches the
// finite-sample threshold marks a dependence between samples that far
// apart in stir state; the count of such shifts drives the number of
// effective (independent) samples N_eff and hence the TRP uncertainty
// sigma = 1/sqrt(N_eff).

enum class CorrelationRoute { Direct, Spectral };
enum class ThresholdMode { OneSided, TwoSided };
enum class NeffView { Grid2D, Sequence1D };

inline const char *to_string(NeffView v) {
    return v == NeffView::Grid2D ? "grid2d" : "sequence1d";
}

/// Pearson coefficients of the data against all n_rows x n_cols cyclic
/// shifts of itself; entry (0,0) is exactly 1. A 1D sequence is the
/// n_rows == 1 case.
struct CorrelationMatrix {
    std::vector<double> r;
    int n_rows = 0;
    int n_cols = 0;

    double at(int p, int q) const { return r[static_cast<size_t>(p) * n_cols + q]; }
    long shifts() const { return static_cast<long>(n_rows) * n_cols; }
};

namespace detail {

inline double grid_mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

/// Unnormalized circular autocovariance at one shift. Both sequences in
/// the Pearson formula are the same data cyclically re-indexed, so their
/// means and variances coincide and the coefficient reduces to
/// sum((x_i - m)(x_{i+s} - m)) / sum((x_i - m)^2); the population-vs-
/// sample normalization cancels.
inline double shifted_product_sum(std::span<const double> centered, int rows, int cols, int p, int q) {
    double s = 0.0;
    for (int r = 0; r < rows; ++r) {
        const int rr = r + p < rows ? r + p : r + p - rows;
        const size_t row0 = static_cast<size_t>(r) * cols;
        const size_t row1 = static_cast<size_t>(rr) * cols;
        for (int c = 0; c < cols; ++c) {
            const int cc = c + q < cols ? c + q : c + q - cols;
            s += centered[row0 + c] * centered[row1 + cc];
        }
    }
    return s;
}

inline std::vector<double> centered_values(std::span<const double> values) {
    std::vector<double> c(values.begin(), values.end());
    const double m = grid_mean(values);
    for (double &x : c)
        x -= m;
    return c;
}

inline double centered_norm(std::span<const double> centered) {
    double s = 0.0;
    for (double x : centered)
        s += x * x;
    return s;
}

/// Constant data has zero variance only up to summation rounding (observed
/// around 1e-28 relative for a 600-sample constant grid); anything with
/// relative variance below 1e-18 is indistinguishable from constant and far
/// below any physical stir sequence.
inline void require_variance(std::span<const double> values, double centered_sq_sum,
                             const char *where) {
    double scale = 0.0;
    for (double x : values)
        scale += x * x;
    if (!(centered_sq_sum > scale * 1e-18))
        throw std::domain_error(std::string(where) + ": degenerate data (zero variance)");
}

inline CorrelationMatrix correlation_matrix_impl(std::span<const double> values, int rows, int cols,
                                                 CorrelationRoute route) {
    if (static_cast<long>(values.size()) != static_cast<long>(rows) * cols || values.empty())
        throw std::invalid_argument("correlation_matrix: size mismatch");
    if (values.size() < 2)
        throw std::invalid_argument("correlation_matrix: need at least 2 samples");

    const std::vector<double> xc = centered_values(values);
    const double denom = centered_norm(xc);
    require_variance(values, denom, "correlation_matrix");

    CorrelationMatrix out;
    out.n_rows = rows;
    out.n_cols = cols;
    out.r.resize(values.size());

    if (route == CorrelationRoute::Direct) {
        for (int p = 0; p < rows; ++p)
            for (int q = 0; q < cols; ++q)
                out.r[static_cast<size_t>(p) * cols + q] =
                    shifted_product_sum(xc, rows, cols, p, q) / denom;
    } else {
        // Cyclic autocorrelation via the convolution theorem:
        // ifft(|fft(xc)|^2)(s) = n * sum_i xc_i * xc_{i+s}.
        const size_t n = values.size();
        std::vector<std::complex<double>> buf(n);
        for (size_t i = 0; i < n; ++i)
            buf[i] = xc[i];
        if (rows == 1)
            fft_1d_inplace(buf, -1);
        else
            fft_2d_inplace(buf, rows, cols, -1);
        for (auto &z : buf)
            z = std::norm(z);
        if (rows == 1)
            fft_1d_inplace(buf, +1);
        else
            fft_2d_inplace(buf, rows, cols, +1);
        const double scale = 1.0 / (static_cast<double>(n) * denom);
        for (size_t i = 0; i < n; ++i)
            out.r[i] = buf[i].real() * scale;
    }
    out.r[0] = 1.0;
    return out;
}

} // namespace detail

/// Pearson correlation between the flattened grid and the grid cyclically
/// shifted by p rows (turntable) and q columns (paddle).
inline double circular_shift_correlation(const StirrerGrid &grid, int p, int q) {
    if (grid.size() < 2)
        throw std::invalid_argument("circular_shift_correlation: need at least 2 samples");
    if (p < 0 || p >= grid.rows() || q < 0 || q >= grid.cols())
        throw std::invalid_argument("circular_shift_correlation: shift out of range");
    if (p == 0 && q == 0)
        return 1.0;
    const std::vector<double> xc = detail::centered_values(grid.values);
    const double denom = detail::centered_norm(xc);
    detail::require_variance(grid.values, denom, "circular_shift_correlation");
    return detail::shifted_product_sum(xc, grid.rows(), grid.cols(), p, q) / denom;
}

inline CorrelationMatrix correlation_matrix(const StirrerGrid &grid,
                                            CorrelationRoute route = CorrelationRoute::Direct) {
    return detail::correlation_matrix_impl(grid.values, grid.rows(), grid.cols(), route);
}

inline CorrelationMatrix circular_correlation_sequence(std::span<const double> seq,
                                                       CorrelationRoute route = CorrelationRoute::Direct) {
    return detail::correlation_matrix_impl(seq, 1, static_cast<int>(seq.size()), route);
}

/// Finite-sample 95% dependence threshold from the IEC/3GPP chamber
/// standards: rho_crit(n) = e^-1 * (1 - 7.22 * n^-0.64). Strictly
/// increasing in n and approaching 1/e from below, so fewer samples mean
/// a stricter (lower) threshold. Valid for n >= 100.
inline double correlation_threshold(long n) {
    if (n < 100)
        throw std::domain_error("correlation_threshold: n = " + std::to_string(n) +
                                " is below the standards' validity range (n >= 100)");
    const double nn = static_cast<double>(n);
    return std::exp(-1.0) * (1.0 - 7.22 / std::pow(nn, 0.64));
}

struct NeffResult {
    long n_samp = 0;
    double threshold = 0.0;
    long dependent_shifts = 0;   // nonzero shifts with r >= threshold
    long dependent_classes = 0;  // mirror pairs {s, -s} counted once
    long n_eff = 0;
    double ratio = 0.0;          // n_eff / n_samp
    NeffView view = NeffView::Grid2D;
};

namespace detail {

/// Counts dependent shifts and derives N_eff. Cyclic autocorrelation is
/// mirror-symmetric, r(s) == r(-s), so each dependence direction shows up
/// as the pair {s, -s}; classes are evaluated once at a canonical
/// representative to keep the count deterministic. Each dependent class
/// extends the dependence neighborhood of a sample by one stir step,
/// giving n_eff = n / (1 + classes): well-stirred data keeps n_eff == n,
/// and duplicating every sample (one dependent class) halves it.
inline NeffResult effective_samples_from_matrix(const CorrelationMatrix &m, ThresholdMode mode,
                                                NeffView view) {
    const long n = m.shifts();
    NeffResult res;
    res.n_samp = n;
    res.threshold = correlation_threshold(n);
    res.view = view;

    for (int p = 0; p < m.n_rows; ++p) {
        for (int q = 0; q < m.n_cols; ++q) {
            if (p == 0 && q == 0)
                continue;
            const int mp = p == 0 ? 0 : m.n_rows - p;
            const int mq = q == 0 ? 0 : m.n_cols - q;
            const bool self_mirror = mp == p && mq == q;
            const bool canonical = self_mirror || p < mp || (p == mp && q < mq);
            if (!canonical)
                continue;
            const double r = m.at(p, q);
            const bool dependent = mode == ThresholdMode::OneSided ? r >= res.threshold
                                                                   : std::abs(r) >= res.threshold;
            if (dependent) {
                res.dependent_classes += 1;
                res.dependent_shifts += self_mirror ? 1 : 2;
            }
        }
    }

    const double raw = static_cast<double>(n) / (1.0 + static_cast<double>(res.dependent_classes));
    res.n_eff = std::clamp(std::lround(raw), 1L, n);
    res.ratio = static_cast<double>(res.n_eff) / static_cast<double>(n);
    return res;
}

} // namespace detail

inline NeffResult effective_samples(const StirrerGrid &grid,
                                    ThresholdMode mode = ThresholdMode::OneSided,
                                    CorrelationRoute route = CorrelationRoute::Direct) {
    if (grid.size() < 100)
        throw std::domain_error("effective_samples: n = " + std::to_string(grid.size()) +
                                " is below the supported regime (n >= 100)");
    return detail::effective_samples_from_matrix(correlation_matrix(grid, route), mode,
                                                 NeffView::Grid2D);
}

inline NeffResult effective_samples(std::span<const double> sequence,
                                    ThresholdMode mode = ThresholdMode::OneSided,
                                    CorrelationRoute route = CorrelationRoute::Direct) {
    if (sequence.size() < 100)
        throw std::domain_error("effective_samples: n = " + std::to_string(sequence.size()) +
                                " is below the supported regime (n >= 100)");
    return detail::effective_samples_from_matrix(circular_correlation_sequence(sequence, route),
                                                 mode, NeffView::Sequence1D);
}

/// Whether a subsample still forms complete turntable rows, so the
/// two-stirrer (grid) correlation view applies.
inline bool plan_preserves_grid(const SamplingPlan &plan, const GridLayout &layout) {
    return plan.stride == 1 && plan.start % layout.n_in == 0 && plan.count % layout.n_in == 0 &&
           plan.count >= layout.n_in;
}

/// Full and contiguous plans keep whole turntable rows and use the 2D
/// grid view; decimated strides (2, 3, 4, 6 against 25 paddle positions)
/// break the rectangular structure, so those subsamples are analyzed as a
/// 1D cyclic sequence compatible with the single-tuner standards. The
/// chosen view is recorded in the result.
inline NeffResult effective_samples(const SubsampledSweep &sub, const GridLayout &layout,
                                    ThresholdMode mode = ThresholdMode::OneSided,
                                    CorrelationRoute route = CorrelationRoute::Direct) {
    if (plan_preserves_grid(sub.plan, layout)) {
        GridLayout sub_layout{static_cast<int>(sub.plan.count / layout.n_in), layout.n_in,
                              layout.turntable_step_deg};
        const StirrerGrid grid =
            reshape_to_grid(std::span<const SampleRecord>(sub.samples), sub_layout);
        return effective_samples(grid, mode, route);
    }
    const std::vector<double> powers = sub.powers();
    return effective_samples(std::span<const double>(powers), mode, route);
}

} // namespace rctrp

#endif
