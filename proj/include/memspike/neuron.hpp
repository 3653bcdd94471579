#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace memspike {

// Postsynaptic potential kernels. psp_exact is the double-exponential
// reference (peak 0.25*w at t = 4*ln 2); psp_lin is the ramp-and-hold
// approximation actually simulated: slope a per unit time up to the knee b,
// flat afterwards. Timestamps are integer ticks; ticks_per_unit converts
// them to kernel time units.
struct PspConfig {
    double a = 0.09;
    double b = 2.77;
    long ticks_per_unit = 180;
};

inline void validate(const PspConfig& c) {
    if (!(c.a > 0.0)) throw std::invalid_argument("psp slope a must be positive");
    if (!(c.b > 0.0)) throw std::invalid_argument("psp knee b must be positive");
    if (c.ticks_per_unit <= 0) throw std::invalid_argument("ticks_per_unit must be positive");
    // The ramp should cap at the exact kernel's peak height: a*b ~ 0.25.
    if (std::fabs(c.a * c.b - 0.25) > 0.02 * 0.25 + 1e-12)
        throw std::invalid_argument("a*b must approximate the 0.25 kernel peak within 2%");
}

inline double psp_exact(double w, double t) {
    if (t < 0.0) return 0.0;
    return w * (std::exp(-t / 4.0) - std::exp(-t / 2.0));
}

inline double psp_lin(const PspConfig& cfg, double w, double t) {
    if (t < 0.0) return 0.0;
    return cfg.a * w * std::min(t, cfg.b);
}

struct NeuronInput {
    long tick = 0;
    double weight = 0.0;
};

struct NeuronState {
    std::vector<NeuronInput> inputs;
    std::optional<long> fired_at;
};

inline double accumulate(const NeuronState& n, const PspConfig& cfg, long now) {
    double sum = 0.0;
    for (const auto& in : n.inputs) {
        if (in.tick > now) continue;
        const double t = static_cast<double>(now - in.tick) / static_cast<double>(cfg.ticks_per_unit);
        sum += psp_lin(cfg, in.weight, t);
    }
    return sum;
}

// Advance one tick. Fires at the first tick where the potential reaches
// v_threshold; with a nonpositive threshold the potential must additionally
// be strictly positive, so an idle neuron never fires spontaneously. At most
// one fire per slot: once fired the neuron ignores everything until reset.
inline std::optional<long> step_fire(NeuronState& n, const PspConfig& cfg, double v_threshold, long now) {
    if (n.fired_at) return n.fired_at;
    const double m = accumulate(n, cfg, now);
    const bool reached = m >= v_threshold && (v_threshold > 0.0 || m > 0.0);
    if (reached) n.fired_at = now;
    return n.fired_at;
}

// Stylized output spike drawn by the trace emitter: rise, slower overshoot,
// then a linear fall back to rest.
struct SrmTraceShape {
    double s1 = 1.0;
    double s2 = 0.5;
    double s3 = -1.0;
};

inline std::vector<std::pair<double, double>> srm_trace_waveform(const SrmTraceShape& s) {
    if (!(s.s1 > 0.0) || !(s.s2 > 0.0) || !(s.s3 < 0.0))
        throw std::invalid_argument("trace shape needs two positive slopes and a negative one");
    const double v1 = s.s1 * 1.0;            // end of primary rise
    const double v2 = v1 + s.s2 * 1.0;       // end of overshoot
    const double t3 = 2.0 + v2 / -s.s3;      // fall back to zero
    return {{0.0, 0.0}, {1.0, v1}, {2.0, v2}, {t3, 0.0}};
}

}  // namespace memspike
