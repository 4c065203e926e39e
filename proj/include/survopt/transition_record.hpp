#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace survopt {

/// One state-machine transition as logged by the controller: the node
/// spent `duration` seconds in `from_state` before moving to `to_state`.
struct TransitionRecord {
    std::string node_id;
    std::string from_state;
    std::string to_state;
    double duration = 0.0;
    std::int64_t timestamp = 0;
    std::vector<double> features;  // empty when the log carries none

    friend bool operator==(const TransitionRecord&, const TransitionRecord&) = default;
};

}  // namespace survopt
