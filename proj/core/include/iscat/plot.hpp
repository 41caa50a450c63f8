#ifndef ISCAT_PLOT_HPP
#define ISCAT_PLOT_HPP

#include <string>
#include <utility>
#include <vector>

#include "iscat/geometry.hpp"

namespace iscat {

/// Standalone SVG with each boundary as a closed 720-point polyline,
/// distinct stroke styles, a legend and equal-aspect axes.
void write_shape_svg(const std::vector<std::pair<TrigShape, std::string>>& shapes,
                     const std::string& path);

} // namespace iscat

#endif // ISCAT_PLOT_HPP
