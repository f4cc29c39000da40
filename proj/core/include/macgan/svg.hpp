#pragma once

#include <filesystem>
#include <string>

#include "macgan/dataset.hpp"

namespace macgan {

/// Scatter plot of real (grey) against generated (blue) points. Points of the
/// 3-D Gaussian dataset are drawn in the coordinates of the mode plane, and
/// generated points are shaded toward red with their distance from it.
std::string scatter_svg(const Matrix& real, const Matrix& generated, const SyntheticDataset& ds,
                        const std::string& title = {});

void write_scatter_svg(const std::filesystem::path& path, const Matrix& real,
                       const Matrix& generated, const SyntheticDataset& ds,
                       const std::string& title = {});

}  // namespace macgan
