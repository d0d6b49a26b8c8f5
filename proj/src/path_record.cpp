#include "triadic/path_record.hpp"

#include "triadic/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace triadic {

void PathRecord::push(double t, double value) {
    if (!times.empty() && !(t > times.back())) {
        throw Error(ErrorCode::InvalidArgument, "path record times must be strictly increasing");
    }
    times.push_back(t);
    values.push_back(value);
}

double PathRecord::value_at(double t) const {
    if (times.empty()) throw Error(ErrorCode::InvalidArgument, "empty path record");
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return values.front();
    return values[static_cast<std::size_t>(std::distance(times.begin(), it)) - 1];
}

void RecordStride::validate() const {
    if (kind == Kind::Events && every_events == 0) {
        throw Error(ErrorCode::InvalidArgument, "event record stride must be >= 1");
    }
    if (kind == Kind::Time && !(every_time > 0.0 && std::isfinite(every_time))) {
        throw Error(ErrorCode::InvalidArgument, "time record stride must be > 0");
    }
}

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error(ErrorCode::Io, "number formatting failed");
    return {buf, end};
}

void write_path_csv(const PathRecord& path, std::ostream& out) {
    out << "t,value\n";
    for (std::size_t k = 0; k < path.size(); ++k) {
        out << format_double(path.times[k]) << ',' << format_double(path.values[k]) << '\n';
    }
}

}  // namespace triadic
