// SPDX-License-Identifier: Apache-2.0
//
// Inter-rater agreement statistics.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace letgames {

enum class MeasurementLevel { nominal, interval };

struct AgreementResult {
  double value = 1.0;
  bool degenerate = false;  // no expected disagreement; value fixed at 1 by convention
};

/// ratings[rater][item]; nullopt marks a missing rating. Uses the coincidence
/// matrix over pairable values (items rated at least twice). Throws
/// INVALID_ARGUMENT with fewer than two raters or no pairable item.
AgreementResult krippendorff_alpha(const std::vector<std::vector<std::optional<double>>>& ratings,
                                   MeasurementLevel level);

/// (p_o - p_e) / (1 - p_e). Throws INVALID_ARGUMENT for empty or unequal inputs.
AgreementResult cohen_kappa(const std::vector<std::string>& r1, const std::vector<std::string>& r2);

}  // namespace letgames
