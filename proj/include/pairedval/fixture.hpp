#pragma once

// Published counts at the ρ50 operating point and the values printed next to
// them, embedded so that the full result set can be regenerated offline.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairedval/counts_io.hpp"

namespace pairedval {

// Six anomalies in kAllAnomalies order, with both areas.
std::vector<AnomalyCounts> paper_fixture();

enum class ToleranceKind : std::uint8_t {
    absolute,    // |computed - printed| <= tolerance
    log10,       // |log10(computed) - log10(printed)| <= tolerance
};

struct PrintedCell {
    std::string_view table;
    std::string_view row;
    std::string_view column;
    double value;
    double tolerance;
    ToleranceKind kind = ToleranceKind::absolute;
};

// Every printed cell covered by the reproduction check. Percent-valued
// cells are stored in percent.
std::span<const PrintedCell> printed_cells();

// Applies "anomaly.part.field[+-]N" to the counts, e.g. "caries.control.tp+1"
// or "bone_loss.spec.loss-2". `part` is control, study, sens or spec. A
// missing offset means +1. Throws Error on unknown names.
void perturb_counts(std::vector<AnomalyCounts>& counts, std::string_view spec);

}  // namespace pairedval
