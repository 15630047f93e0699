#pragma once

#include <string>

namespace barrierwalk {

// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_double(double v);

}  // namespace barrierwalk
