#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "interimsim/engine.hpp"

namespace interimsim {

struct CalibrationSpec {
    Scenario base;                 // matched prior and no interims are forced
    double target_pfdr = 0.05;
    double grid_step = 0.0;        // 0 picks 0.001, or 0.002 for survival
    std::size_t replicates = 0;    // 0 keeps base.n_replicates
    unsigned threads = 1;
    std::function<void(std::size_t, std::size_t)> progress;

    void validate() const;
    double effective_step() const;
};

struct CalibrationPoint {
    double cutoff = 0.0;
    std::size_t n_reject = 0;
    std::size_t n_false_reject = 0;
    double pfdr = 0.0;
    double pfdr_se = 0.0;
};

struct CalibrationResult {
    double cutoff = 0.0;
    double achieved_pfdr = 0.0;
    double achieved_pfdr_se = 0.0;
    std::size_t n_reject = 0;
    // Grid cutoffs whose pFDR lies within 2 SE of the target.
    double band_lower = 0.0;
    double band_upper = 0.0;
    std::size_t n_replicates = 0;
};

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/* Empirical pFDR on the grid k * step, k = 1 .. floor(1/step), rejecting when p > C. */
std::vector<CalibrationPoint> pfdr_sweep(const std::vector<FinalAnalysis>& finals, double step);

/*
 * Largest pFDR not above the target, smallest cutoff on ties. Cutoffs with no
 * false rejection are not candidates, so an unreachable target throws CalibrationError.
 */
CalibrationResult select_cutoff(const std::vector<CalibrationPoint>& sweep, double target, std::size_t n_replicates);

CalibrationResult calibrate_cutoff(const CalibrationSpec& spec);

/* The fixed-design, matched-prior scenario that calibration simulates. */
Scenario calibration_scenario(const CalibrationSpec& spec);

}  // namespace interimsim
