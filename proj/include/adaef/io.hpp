#pragma once

#include "adaef/types.hpp"

#include <vector>

namespace adaef {

/// fvecs: per record a little-endian int32 dimension followed by that many
/// little-endian float32 values. All records must share one dimension.
RowMatrixf load_fvecs(const std::string& path);
void save_fvecs(const std::string& path, const RowMatrixf& rows);

/// ivecs: same framing with int32 payloads (ground-truth id lists).
std::vector<std::vector<std::int32_t>> load_ivecs(const std::string& path);
void save_ivecs(const std::string& path,
                const std::vector<std::vector<std::int32_t>>& rows);

}  // namespace adaef
