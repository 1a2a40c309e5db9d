#pragma once

#include "aelts/arma_model.hpp"

#include <cstddef>
#include <vector>

namespace aelts {

// Which Fourier frequencies w_j = 2 pi j / T are retained.
enum class FrequencyRange {
    HalfBand,  // j = 1 .. floor((T-1)/2): frequencies strictly inside (0, pi)
    Full,      // j = 1 .. T-1: every nonzero Fourier frequency, mirrored pairs included
};

struct Periodogram {
    std::vector<double> freqs;
    std::vector<double> ords;
    std::size_t series_length = 0;
    FrequencyRange range = FrequencyRange::HalfBand;

    [[nodiscard]] std::size_t size() const noexcept { return ords.size(); }
};

std::size_t ordinate_count(std::size_t series_length, FrequencyRange range);

// I(w_j) = |sum_t (z_t - zbar) exp(i w_j t)|^2 / (2 pi T), t = 1..T, by direct
// trigonometric sums.
Periodogram compute_periodogram(const TimeSeries& series,
                                FrequencyRange range = FrequencyRange::HalfBand);

// Wraps externally supplied ordinates (tests, plug-in spectra). Throws
// InputError on size mismatch, negative or non-finite ordinates.
Periodogram make_periodogram(std::vector<double> freqs, std::vector<double> ords,
                             std::size_t series_length,
                             FrequencyRange range = FrequencyRange::HalfBand);

}  // namespace aelts
