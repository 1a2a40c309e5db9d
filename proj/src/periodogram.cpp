#include "aelts/periodogram.hpp"

#include "aelts/error.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace aelts {

std::size_t ordinate_count(std::size_t series_length, FrequencyRange range) {
    if (series_length < 2) return 0;
    return range == FrequencyRange::Full ? series_length - 1 : (series_length - 1) / 2;
}

Periodogram compute_periodogram(const TimeSeries& series, FrequencyRange range) {
    const std::size_t T = series.size();
    const std::size_t n = ordinate_count(T, range);
    const double zbar = series.mean();
    const double two_pi = 2.0 * std::numbers::pi;

    Periodogram pg;
    pg.series_length = T;
    pg.range = range;
    pg.freqs.resize(n);
    pg.ords.resize(n);

    std::vector<double> centered(T);
    for (std::size_t t = 0; t < T; ++t) centered[t] = series[t] - zbar;
    // Every angle w_j t reduces to 2 pi r / T with r = j t mod T.
    std::vector<double> sin_table(T);
    std::vector<double> cos_table(T);
    for (std::size_t r = 0; r < T; ++r) {
        const double angle = two_pi * static_cast<double>(r) / static_cast<double>(T);
        sin_table[r] = std::sin(angle);
        cos_table[r] = std::cos(angle);
    }

    for (std::size_t j = 1; j <= n; ++j) {
        pg.freqs[j - 1] = two_pi * static_cast<double>(j) / static_cast<double>(T);
        if (2 * j > T) {
            // I(w_{T-j}) = I(w_j): reuse the mirrored ordinate.
            pg.ords[j - 1] = pg.ords[T - j - 1];
            continue;
        }
        double s = 0.0;
        double c = 0.0;
        std::size_t r = 0;
        for (std::size_t t = 1; t <= T; ++t) {
            r += j;
            if (r >= T) r -= T;
            s += centered[t - 1] * sin_table[r];
            c += centered[t - 1] * cos_table[r];
        }
        pg.ords[j - 1] = (s * s + c * c) / (two_pi * static_cast<double>(T));
    }
    return pg;
}

Periodogram make_periodogram(std::vector<double> freqs, std::vector<double> ords,
                             std::size_t series_length, FrequencyRange range) {
    if (freqs.size() != ords.size()) throw InputError("frequency and ordinate counts differ");
    if (ords.empty()) throw InputError("periodogram has no ordinates");
    for (std::size_t j = 0; j < ords.size(); ++j) {
        if (!std::isfinite(ords[j]) || ords[j] < 0.0) {
            throw InputError("periodogram ordinates must be finite and nonnegative");
        }
        if (!std::isfinite(freqs[j])) throw InputError("periodogram frequency is not finite");
    }
    Periodogram pg;
    pg.freqs = std::move(freqs);
    pg.ords = std::move(ords);
    pg.series_length = series_length;
    pg.range = range;
    return pg;
}

}  // namespace aelts
