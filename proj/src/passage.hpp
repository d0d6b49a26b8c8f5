#pragma once

// Mean hitting times for nearest-neighbour generators
//
//   down[k] T[k-1] - (down[k] + up[k]) T[k] + up[k] T[k+1] = -1,
//
// with T = 0 at the absorbing end and a reflecting opposite end. Both the
// macroscale chain and the finite-difference MFPT scheme have this form.
//
// Elimination runs on successive differences D[k] = T[k] - T[k+1]:
//     up[k] D[k] = 1 + down[k] D[k-1],
// so every pivot is a single positive rate. The textbook Thomas sweep has
// pivots -(up + down) + down (1 + eps) instead, and that cancellation is
// amplified by prod(down / up) across a metastable barrier.

#include <span>
#include <vector>

namespace triadic::detail {

/// Nodes 0..m, absorbing at node m. `first_difference` is D[0]; the
/// recursion then covers k = 1..m-1. Returns T[0..m], T[m] = 0.
/// Throws Error(SingularSystem) on a nonpositive pivot.
std::vector<double> passage_times_to_right(std::span<const double> up, std::span<const double> down,
                                           double first_difference);

/// Mirror image: nodes 0..m absorbing at node 0, reflecting at m; D[m] is
/// given as `last_difference` = T[m] - T[m-1].
std::vector<double> passage_times_to_left(std::span<const double> up, std::span<const double> down,
                                          double last_difference);

}  // namespace triadic::detail
