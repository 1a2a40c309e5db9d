#include "series_io.hpp"

#include "aelts/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <vector>

namespace aelts::cli {

TimeSeries read_series(std::istream& in, const std::string& source) {
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        const char* begin = line.data() + first;
        const char* end = line.data() + last + 1;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
            throw InputError(source + ":" + std::to_string(line_no) + ": cannot parse '" +
                             std::string(begin, end) + "' as a number");
        }
        values.push_back(v);
    }
    if (values.size() < TimeSeries::kMinLength) {
        throw InputError(source + ": need at least " + std::to_string(TimeSeries::kMinLength) +
                         " observations, found " + std::to_string(values.size()));
    }
    return TimeSeries(std::move(values));
}

TimeSeries read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open series file '" + path + "'");
    return read_series(in, path);
}

void write_series(std::ostream& out, const TimeSeries& series) {
    out << std::setprecision(17);
    for (double v : series.values()) out << v << '\n';
}

}  // namespace aelts::cli
