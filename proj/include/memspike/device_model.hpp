#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace memspike {

// Linear drift memristor under unit programming current. Memristance falls
// linearly with the signed accumulated interval dt (in microseconds):
//
//     M(dt) = k1 - k2 * dt,    G(dt) = 1 / M(dt)
//
// k1 is the unprogrammed (high) resistance, k2 the drop per microsecond.
// dt_max bounds |dt| so M stays strictly positive; past it the device is
// treated as fully switched and integration is an error.

struct MemristorParams {
    double k1 = 100.0;   // ohm
    double k2 = 1.0;     // ohm per us of accumulated interval
    double dt_max = 4.0; // us
};

// Device geometry and mobility; k1/k2 derive from these.
struct PhysicalParams {
    double r_on = 100.0;
    double r_off = 16000.0;
    double mu_v = 1e-10;
    double d = 1e-8;
};

struct MemristorState {
    MemristorParams params;
    double accumulated = 0.0;  // us of recorded interval so far
};

inline void validate(const MemristorParams& p) {
    if (!(p.k1 > 0.0)) throw std::invalid_argument("memristor k1 must be positive");
    if (!(p.k2 > 0.0)) throw std::invalid_argument("memristor k2 must be positive");
    if (!(p.dt_max > 0.0) || !(p.dt_max < p.k1 / p.k2))
        throw std::invalid_argument("memristor dt_max must lie in (0, k1/k2)");
}

inline MemristorParams make_memristor_params(double k1, double k2, double dt_max) {
    MemristorParams p{k1, k2, dt_max};
    validate(p);
    return p;
}

inline MemristorParams default_device() { return MemristorParams{100.0, 1.0, 4.0}; }

inline MemristorParams params_from_physical(const PhysicalParams& ph, double dt_max) {
    if (!(ph.r_on > 0.0) || !(ph.r_off > ph.r_on))
        throw std::invalid_argument("need 0 < r_on < r_off");
    if (!(ph.mu_v > 0.0) || !(ph.d > 0.0))
        throw std::invalid_argument("mobility and thickness must be positive");
    const double k1 = ph.r_off;
    const double k2 = (ph.r_off - ph.r_on) * ph.mu_v * ph.r_on / (ph.d * ph.d);
    return make_memristor_params(k1, k2, dt_max);
}

inline double memristance(const MemristorParams& p, double dt) {
    if (std::fabs(dt) > p.dt_max)
        throw std::domain_error("interval " + std::to_string(dt) + " us outside [-dt_max, dt_max]");
    return p.k1 - p.k2 * dt;
}

inline double conductance(const MemristorParams& p, double dt) {
    return 1.0 / memristance(p, dt);
}

// Conductance change when the recorded interval moves from dt_old to dt_new.
// Sign equals sign(dt_new - dt_old) because G is strictly increasing in dt.
inline double delta_conductance(const MemristorParams& p, double dt_new, double dt_old) {
    return conductance(p, dt_new) - conductance(p, dt_old);
}

inline MemristorState integrate_interval(MemristorState s, double duration) {
    if (duration < 0.0) throw std::invalid_argument("cannot integrate a negative duration");
    const double total = s.accumulated + duration;
    if (total > s.params.dt_max)
        throw std::domain_error("memristor saturated: accumulated interval " +
                                std::to_string(total) + " us exceeds dt_max");
    s.accumulated = total;
    return s;
}

// Windowed variant: drift scaled by a window value f in [0, 1] evaluated by
// the caller. f == 1 reduces exactly to the linear law above with charge as
// the interval; f == 0 pins the device at r_off.
inline double windowed_memristance(const PhysicalParams& ph, double charge, double window) {
    if (!(window >= 0.0 && window <= 1.0))
        throw std::invalid_argument("window value must lie in [0, 1]");
    if (!(ph.r_on > 0.0) || !(ph.r_off > ph.r_on))
        throw std::invalid_argument("need 0 < r_on < r_off");
    const double m = ph.r_off - (ph.r_off - ph.r_on) * ph.mu_v * (ph.r_on / (ph.d * ph.d)) * window * charge;
    if (m < ph.r_on || m > ph.r_off)
        throw std::domain_error("windowed memristance left [r_on, r_off]: device saturated");
    return m;
}

}  // namespace memspike
