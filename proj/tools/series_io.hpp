#pragma once

#include "aelts/arma_model.hpp"

#include <iosfwd>
#include <string>

namespace aelts::cli {

// One observation per line; blank lines and lines starting with '#' are
// skipped. Throws InputError naming the offending line.
TimeSeries read_series(std::istream& in, const std::string& source);
TimeSeries read_series_file(const std::string& path);

void write_series(std::ostream& out, const TimeSeries& series);

}  // namespace aelts::cli
