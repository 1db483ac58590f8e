#pragma once

#include <string>
#include <vector>

#include "inspectra/curve.hpp"
#include "inspectra/optimizer.hpp"
#include "inspectra/unfolding.hpp"

namespace inspectra::cli {

/// Fixed orthographic view of a curve (first three coordinates) with the
/// unit sphere outline.
std::string curve_svg(const Polyline& poly);

/// Planar unfolded curve with the unit circle; spirals coloured by direction
/// when a decomposition is supplied.
std::string unfolded_svg(const UnfoldedCurve& unf, const DecompositionReport* report);

/// Length against iteration, one polyline per stage.
std::string trace_svg(const std::vector<TraceRow>& rows);

/// Parses the CSV written by OptimizerTrace::to_csv.
std::vector<TraceRow> parse_trace_csv(const std::string& text);

}  // namespace inspectra::cli
