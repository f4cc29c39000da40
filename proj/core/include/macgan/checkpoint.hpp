#pragma once

#include <filesystem>

#include "macgan/mlp.hpp"

namespace macgan {

/// Writes `dir/manifest.json` plus `layer<i>_weight.csv` / `layer<i>_bias.csv`.
void save_checkpoint(const std::filesystem::path& dir, const MlpNetwork& net);
MlpNetwork load_checkpoint(const std::filesystem::path& dir);

}  // namespace macgan
