#include "interimsim/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "interimsim/metrics.hpp"

namespace interimsim {

namespace {

constexpr double kBandSe = 2.0;

}  // namespace

void CalibrationSpec::validate() const {
    if (!(target_pfdr > 0.0 && target_pfdr < 1.0)) throw std::invalid_argument("calibration target must lie in (0, 1)");
    if (!(grid_step >= 0.0 && grid_step < 1.0)) throw std::invalid_argument("calibration grid step must lie in [0, 1)");
}

double CalibrationSpec::effective_step() const {
    if (grid_step > 0.0) return grid_step;
    return base.endpoint == Endpoint::survival ? 0.002 : 0.001;
}

Scenario calibration_scenario(const CalibrationSpec& spec) {
    Scenario s = spec.base.with_matched_prior().without_interims();
    if (spec.replicates > 0) s.n_replicates = spec.replicates;
    return s;
}

std::vector<CalibrationPoint> pfdr_sweep(const std::vector<FinalAnalysis>& finals, double step) {
    if (!(step > 0.0 && step < 1.0)) throw std::invalid_argument("pfdr_sweep: step must lie in (0, 1)");
    std::vector<double> all, null;
    all.reserve(finals.size());
    for (const auto& f : finals) {
        all.push_back(f.prob_superior);
        if (f.h0_true) null.push_back(f.prob_superior);
    }
    std::sort(all.begin(), all.end());
    std::sort(null.begin(), null.end());
    auto above = [](const std::vector<double>& v, double c) {
        return static_cast<std::size_t>(v.end() - std::upper_bound(v.begin(), v.end(), c));
    };

    const auto k_max = static_cast<int>(std::floor(1.0 / step + 1e-9));
    // k / n rounds correctly when the step divides 1, so 0.689 prints as 0.689.
    const double n_steps = std::round(1.0 / step);
    const bool divides = std::abs(1.0 / step - n_steps) < 1e-9;
    std::vector<CalibrationPoint> sweep;
    sweep.reserve(k_max);
    for (int k = k_max; k >= 1; --k) {
        CalibrationPoint p;
        p.cutoff = divides ? k / n_steps : k * step;
        p.n_reject = above(all, p.cutoff);
        p.n_false_reject = above(null, p.cutoff);
        if (p.n_reject > 0) {
            p.pfdr = static_cast<double>(p.n_false_reject) / p.n_reject;
            p.pfdr_se = proportion_se(p.pfdr, p.n_reject);
        }
        sweep.push_back(p);
    }
    return sweep;
}

CalibrationResult select_cutoff(const std::vector<CalibrationPoint>& sweep, double target, std::size_t n_replicates) {
    const CalibrationPoint* best = nullptr;
    for (const auto& p : sweep) {
        if (p.n_false_reject == 0 || p.pfdr > target) continue;
        if (!best || p.pfdr > best->pfdr || (p.pfdr == best->pfdr && p.cutoff < best->cutoff)) best = &p;
    }
    if (!best) {
        std::ostringstream msg;
        msg << "target pFDR " << target << " is unattainable: every grid cutoff either exceeds it or has no false rejection";
        throw CalibrationError(msg.str());
    }

    CalibrationResult r;
    r.cutoff = best->cutoff;
    r.achieved_pfdr = best->pfdr;
    r.achieved_pfdr_se = best->pfdr_se;
    r.n_reject = best->n_reject;
    r.n_replicates = n_replicates;
    r.band_lower = r.band_upper = r.cutoff;
    for (const auto& p : sweep) {
        if (p.n_reject == 0 || std::abs(p.pfdr - target) > kBandSe * p.pfdr_se) continue;
        r.band_lower = std::min(r.band_lower, p.cutoff);
        r.band_upper = std::max(r.band_upper, p.cutoff);
    }
    return r;
}

CalibrationResult calibrate_cutoff(const CalibrationSpec& spec) {
    spec.validate();
    const Scenario s = calibration_scenario(spec);
    RunOptions options;
    options.threads = spec.threads;
    options.progress = spec.progress;
    const auto finals = run_final_analyses(s, options);
    return select_cutoff(pfdr_sweep(finals, spec.effective_step()), spec.target_pfdr, finals.size());
}

}  // namespace interimsim
