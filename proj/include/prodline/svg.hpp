#pragma once

#include <string>

#include "prodline/model.hpp"

namespace prodline {

/// Renders the three quality curves (first best, commitment, limited) over
/// the type space plus a product-line bar with the offered-quality intervals
/// and atoms. Byte output is deterministic for fixed inputs.
std::string render_quality_plot(const Schedule& first_best, const Schedule& commitment,
                                const Schedule& limited);

}  // namespace prodline
