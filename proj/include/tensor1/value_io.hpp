#pragma once

#include <string>

#include "tensor1/semantics.hpp"

namespace tensor1::sem {

enum class OutputFormat { Text, Json, Xml };

// Text renders reals with 6 significant digits for reading; json and xml
// use 17 significant digits so values round-trip exactly.
std::string format_real(double v, OutputFormat f);

std::string format_value(const Value& v, OutputFormat f);

std::string format_frame_info(const std::string& name, const Frame& frame, OutputFormat f);

std::string format_tensor(const TensorValue& t, OutputFormat f);

}  // namespace tensor1::sem
