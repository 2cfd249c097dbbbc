#pragma once

#include <string>

#include "muxnet/matrix.hpp"

namespace muxnet {

// {"rows": r, "cols": c, "q": q, "entries": [row-major integers]}
std::string matrix_to_json(const Matrix& m);

// Inverse of matrix_to_json. The field is built with its default modulus.
// Throws ConfigError on malformed input or entries outside the field.
Matrix matrix_from_json(const std::string& text);

}  // namespace muxnet
