#pragma once

#include <cstddef>

namespace tensor1 {

// Size caps for dense tensor storage. `max_order` can be overridden by the
// CLI through the TENSOR1_MAX_ORDER environment variable.
struct Limits {
    int max_order = 8;
    int max_dim = 16;
    int levi_max_dim = 6;
    std::size_t max_components = std::size_t(1) << 27;
};

// Process-wide limits. Written once at startup, read everywhere.
Limits& limits();

}  // namespace tensor1
