#pragma once

#include <string>

#include "smgan/matrix.hpp"

namespace smgan {

// One row per line, comma separated, full double precision, no header.
void write_matrix_csv(const Matrix& m, const std::string& path);

}  // namespace smgan
