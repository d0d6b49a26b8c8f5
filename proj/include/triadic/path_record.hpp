#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace triadic {

enum class Observable { EdgeCount, Density };

/// Time-stamped trajectory of a scalar observable. Times start at 0 and are
/// strictly increasing.
struct PathRecord {
    Observable observable = Observable::Density;
    std::vector<double> times;
    std::vector<double> values;

    void push(double t, double value);
    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] bool empty() const { return times.empty(); }

    /// Piecewise-constant value at time t (last record at or before t).
    [[nodiscard]] double value_at(double t) const;
};

/// How a simulator samples its trajectory: after every k-th event/step, or
/// on a fixed time grid holding the last state between events.
struct RecordStride {
    enum class Kind { Events, Time };

    Kind kind = Kind::Events;
    std::size_t every_events = 1;
    double every_time = 0.0;

    static RecordStride events(std::size_t k) { return {Kind::Events, k, 0.0}; }
    static RecordStride time(double dt) { return {Kind::Time, 0, dt}; }

    void validate() const;

    friend bool operator==(const RecordStride&, const RecordStride&) = default;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// CSV with header "t,value".
void write_path_csv(const PathRecord& path, std::ostream& out);

}  // namespace triadic
