#pragma once
/**
 * @file
 * Reference training-set fidelities and the pass thresholds derived from
 * them. Baselines are two-sided (value +- tolerance); trained models are
 * one-sided (reference value - 0.01).
 */

#include "wfsr/dataset.hpp"

namespace wfsr::targets {

struct CaseTargets {
    double noansatz;
    double interp;
    double ansatz1_min;
    double ansatz2_min;
};

inline constexpr double kBaselineTolerance = 0.005;

[[nodiscard]] constexpr CaseTargets for_case(CaseLabel label) {
    return label == CaseLabel::I ? CaseTargets{0.890, 0.839, 0.949, 0.973}
                                 : CaseTargets{0.981, 0.954, 0.982, 0.987};
}

} // namespace wfsr::targets
