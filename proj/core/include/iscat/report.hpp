#ifndef ISCAT_REPORT_HPP
#define ISCAT_REPORT_HPP

#include <string>

#include "iscat/dataset.hpp"
#include "iscat/newton.hpp"

namespace iscat {

/// Relative L2[0,2pi] error of the reconstructed radial function against the
/// truth. Coefficient-space when the centers coincide; otherwise the
/// reconstructed boundary is resampled as a radial function about the truth
/// center on a dense grid.
double shape_relative_error(const TrigShape& truth, const TrigShape& reconstructed);

/// Same, restricted to the illuminated side {t : (cos t, sin t).theta < 0}.
double shape_relative_error_illuminated(const TrigShape& truth,
                                        const TrigShape& reconstructed,
                                        const Vec2& theta);

/// Writes errors.tsv (per-frequency errors when truth is present),
/// iterations.tsv (residual/step-norm curves) and sigma.tsv into out_dir.
void write_report(const ReconstructionTrace& trace, const Dataset& data,
                  const std::string& out_dir);

void save_trace(const ReconstructionTrace& trace, const std::string& path);
ReconstructionTrace load_trace(const std::string& path);

} // namespace iscat

#endif // ISCAT_REPORT_HPP
