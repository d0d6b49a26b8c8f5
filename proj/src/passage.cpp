#include "passage.hpp"

#include "triadic/error.hpp"

#include <algorithm>
#include <cmath>

namespace triadic::detail {

std::vector<double> passage_times_to_right(std::span<const double> up, std::span<const double> down,
                                           double first_difference) {
    const std::size_t nodes = up.size();
    if (nodes < 2 || down.size() != nodes) throw Error(ErrorCode::InvalidArgument, "passage problem needs >= 2 nodes");
    const std::size_t m = nodes - 1;
    if (!(first_difference > 0.0) || !std::isfinite(first_difference)) {
        throw Error(ErrorCode::SingularSystem, "reflecting-end pivot is not positive");
    }
    std::vector<double> diff(m);
    diff[0] = first_difference;
    for (std::size_t k = 1; k < m; ++k) {
        if (!(up[k] > 0.0)) throw Error(ErrorCode::SingularSystem, "zero rate toward the absorbing end");
        diff[k] = (1.0 + down[k] * diff[k - 1]) / up[k];
        if (!std::isfinite(diff[k])) throw Error(ErrorCode::SingularSystem, "passage time overflow");
    }
    std::vector<double> times(nodes, 0.0);
    double acc = 0.0;
    for (std::size_t k = m; k-- > 0;) {
        acc += diff[k];
        times[k] = acc;
    }
    return times;
}

std::vector<double> passage_times_to_left(std::span<const double> up, std::span<const double> down,
                                          double last_difference) {
    std::vector<double> rev_up(down.rbegin(), down.rend());
    std::vector<double> rev_down(up.rbegin(), up.rend());
    auto times = passage_times_to_right(rev_up, rev_down, last_difference);
    std::reverse(times.begin(), times.end());
    return times;
}

}  // namespace triadic::detail
