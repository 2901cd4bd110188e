#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <decolab/engine.hpp>
#include <decolab/entropy.hpp>

namespace decolab {

// Per-snapshot observables. Entropies are only defined for nonnegative
// densities; on fields with genuine negative regions they are NaN rather
// than an error, so quantum runs still get the rest of the record.
struct Diagnostics {
    double time = 0;
    double norm = 0;
    double mean_x = 0, mean_p = 0;
    double var_x = 0, var_p = 0, cov_xp = 0;
    double coherence_length = 0;  // hbar / sqrt(var_p)
    double negativity = 0;
    double purity = 0;
    double entropy_fine = std::numeric_limits<double>::quiet_NaN();
    double entropy_coarse = std::numeric_limits<double>::quiet_NaN();
};

inline Diagnostics compute_diagnostics(const WignerField& f, const EvolutionSpec& spec) {
    Diagnostics d;
    d.time = f.time;
    FieldMoments m = moments(f);
    d.norm = m.norm;
    d.mean_x = m.mean_x;
    d.mean_p = m.mean_p;
    d.var_x = m.var_x;
    d.var_p = m.var_p;
    d.cov_xp = m.cov_xp;
    d.coherence_length = m.var_p > 0 ? f.hbar / std::sqrt(m.var_p) : 0.0;
    d.negativity = negativity_volume(f);
    d.purity = purity(f);
    if (min_value(f) >= -1e-9 * std::max(0.0, max_value(f))) {
        d.entropy_fine = gibbs_entropy(f);
        if (spec.entropy_box_x > 0 && spec.entropy_box_p > 0)
            d.entropy_coarse =
                gibbs_entropy(f, CoarseBox{spec.entropy_box_x, spec.entropy_box_p});
    }
    return d;
}

using SnapshotSink = std::function<void(const WignerField&, const Diagnostics&)>;

inline int planned_steps(const EvolutionSpec& spec) {
    return static_cast<int>(std::floor(spec.t_end / spec.dt + 1e-9));
}

// Drives the stepper from the initial state to t_end, emitting the initial
// snapshot, every snapshot_stride-th step, and the final step. Advances by
// exactly planned_steps(spec) * dt; pick dt to divide t_end.
inline WignerField evolve(const WignerField& initial, const EvolutionSpec& spec,
                          const SnapshotSink& sink = {}) {
    Stepper stepper(initial.grid, spec);
    WignerField f = initial;
    if (sink) sink(f, compute_diagnostics(f, spec));
    int steps = planned_steps(spec);
    for (int s = 1; s <= steps; ++s) {
        stepper.advance(f);
        if (sink && (s % spec.snapshot_stride == 0 || s == steps))
            sink(f, compute_diagnostics(f, spec));
    }
    return f;
}

inline WignerField step(const WignerField& state, const EvolutionSpec& spec) {
    Stepper stepper(state.grid, spec);
    WignerField f = state;
    stepper.advance(f);
    return f;
}

struct DistancePoint {
    double time = 0;
    double distance = 0;
};

struct DistanceSeries {
    std::vector<DistancePoint> points;
    // First crossing of the threshold, linearly interpolated between the
    // bracketing snapshots; empty if the distance never gets there.
    std::optional<double> breakdown_time;
    double threshold = 0;
};

inline double default_breakdown_threshold = 0.1;

// Evolves the same initial state with the cubic correction on and off and
// records the L1 distance per snapshot pair. The two runs march in
// lockstep, so memory stays at two fields.
inline DistanceSeries classical_quantum_distance(
    const WignerField& initial, const EvolutionSpec& spec,
    double threshold = default_breakdown_threshold,
    const std::function<void(const DistancePoint&)>& on_point = {}) {
    EvolutionSpec spec_q = spec;
    spec_q.moyal_enabled = true;
    EvolutionSpec spec_c = spec;
    spec_c.moyal_enabled = false;

    Stepper quantum(initial.grid, spec_q);
    Stepper classical(initial.grid, spec_c);
    WignerField fq = initial;
    WignerField fc = initial;

    DistanceSeries series;
    series.threshold = threshold;
    auto record = [&](double t) {
        DistancePoint pt{t, l1_distance(fq, fc)};
        if (!series.breakdown_time && !series.points.empty() && pt.distance >= threshold) {
            const DistancePoint& prev = series.points.back();
            if (pt.distance > prev.distance) {
                double frac = (threshold - prev.distance) / (pt.distance - prev.distance);
                series.breakdown_time = prev.time + frac * (pt.time - prev.time);
            } else {
                series.breakdown_time = pt.time;
            }
        }
        if (!series.breakdown_time && series.points.empty() && pt.distance >= threshold)
            series.breakdown_time = pt.time;
        series.points.push_back(pt);
        if (on_point) on_point(pt);
    };

    record(initial.time);
    int steps = planned_steps(spec);
    for (int s = 1; s <= steps; ++s) {
        quantum.advance(fq);
        classical.advance(fc);
        if (s % spec.snapshot_stride == 0 || s == steps) record(fq.time);
    }
    return series;
}

struct LinearFit {
    double slope = 0;
    double intercept = 0;
};

inline LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw config_error("linear_fit: need two or more paired points");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace decolab
