#pragma once

#include <string>
#include <vector>

#include "pqlap/continuation.hpp"

namespace pqlap {

/// Bifurcation diagram in the Figure-1 convention: lambda on the horizontal
/// axis, the original-variable norm ||u||_{1,q} on the vertical axis, one
/// polyline per mode, and a dashed vertical marker at each reference
/// eigenvalue lambda_k^D(q). No plotting dependency: the SVG is assembled
/// directly.
std::string render_diagram_svg(const std::vector<Branch>& branches,
                               const std::vector<double>& reference_eigenvalues,
                               const std::string& title);

}  // namespace pqlap
