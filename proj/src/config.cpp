#include "tensor1/config.hpp"

namespace tensor1 {

Limits& limits() {
    static Limits instance;
    return instance;
}

}  // namespace tensor1
