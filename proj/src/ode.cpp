#include "signet/ode.hpp"

#include <algorithm>

namespace signet {

std::size_t DenseSolution::locate(double t) const {
    // clamp to the covered interval; interior lookup via binary search
    if (t <= times_.front()) return 0;
    if (t >= times_.back()) return step_count() - 1;
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

} // namespace signet
