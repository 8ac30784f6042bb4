#pragma once

#include <string>

namespace tensor1 {

// The tensor1 content dictionary as OpenMath CD XML: exactly the eleven
// symbols, byte-identical across runs.
std::string emit_tensor1_cd();

}  // namespace tensor1
