#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "memspike/device_model.hpp"
#include "memspike/spike_codec.hpp"

namespace memspike {

// One interval-recording unit per output class: two memristors behind a
// switch pair. The first spike of a slot closes k1 and M1 starts recording;
// the second opens k1 and closes k2 so M2 records; the third opens k2. With
// the usual ordering (black volley, own output, white volley) M1 ends up
// holding t_out - t_black and M2 holds t_white - t_out. A slot with no
// output spike leaves the unit short of Done, which reads back as NoFire.

enum class UnitPhase : uint8_t { Idle, RecordingFirst, RecordingSecond, Done };

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MemristorTimeUnit {
    UnitPhase phase = UnitPhase::Idle;
    bool k1_closed = false;
    bool k2_closed = false;
    std::optional<long> t_black, t_out, t_white;
    long last_tick = -1;
    MemristorState m1, m2;
    TimingConfig timing;
};

inline MemristorTimeUnit make_time_unit(const MemristorParams& device, const TimingConfig& timing) {
    validate(device);
    validate(timing);
    MemristorTimeUnit u;
    u.m1 = MemristorState{device, 0.0};
    u.m2 = MemristorState{device, 0.0};
    u.timing = timing;
    return u;
}

namespace detail {
inline const char* spike_name(SpikeKind k) {
    switch (k) {
        case SpikeKind::BlackVolley: return "black volley";
        case SpikeKind::WhiteVolley: return "white volley";
        case SpikeKind::Output: return "output spike";
    }
    return "?";
}
}  // namespace detail

inline MemristorTimeUnit on_spike(MemristorTimeUnit u, const SpikeEvent& e) {
    if (e.tick < u.last_tick)
        throw ProtocolError("out-of-order delivery: tick " + std::to_string(e.tick) +
                            " after tick " + std::to_string(u.last_tick));

    auto& stamp = e.kind == SpikeKind::BlackVolley ? u.t_black
                : e.kind == SpikeKind::WhiteVolley ? u.t_white
                                                   : u.t_out;
    if (stamp.has_value())
        throw ProtocolError(std::string("duplicate ") + detail::spike_name(e.kind) + " in slot");
    stamp = e.tick;

    switch (u.phase) {
        case UnitPhase::Idle:
            u.k1_closed = true;
            u.phase = UnitPhase::RecordingFirst;
            break;
        case UnitPhase::RecordingFirst:
            u.m1 = integrate_interval(u.m1, (e.tick - u.last_tick) * u.timing.tick_us());
            u.k1_closed = false;
            u.k2_closed = true;
            u.phase = UnitPhase::RecordingSecond;
            break;
        case UnitPhase::RecordingSecond:
            u.m2 = integrate_interval(u.m2, (e.tick - u.last_tick) * u.timing.tick_us());
            u.k2_closed = false;
            u.phase = UnitPhase::Done;
            break;
        case UnitPhase::Done:
            throw ProtocolError(std::string("spike after recording finished: ") +
                                detail::spike_name(e.kind));
    }
    u.last_tick = e.tick;
    return u;
}

// Signed intervals in us: dt1 relative to the black volley (positive when the
// output trails it), dt2 relative to the white volley (negative when the
// output leads it). Computed from the timestamps, so they stay meaningful
// even when a straggler output arrives after the white volley.
struct IntervalPair {
    double dt1 = 0.0;
    double dt2 = 0.0;
};

inline std::optional<IntervalPair> read_intervals(const MemristorTimeUnit& u) {
    if (!u.t_out || !u.t_black || !u.t_white) return std::nullopt;  // NoFire
    const double tick = u.timing.tick_us();
    return IntervalPair{(*u.t_out - *u.t_black) * tick, (*u.t_out - *u.t_white) * tick};
}

// Relative conductance gain of a device programmed for |interval| over an
// unprogrammed one: (G(|x|) - G(0)) / G(0). Zero at zero, strictly
// increasing in |x|.
inline double normalized_conductance_excess(const MemristorParams& p, double interval) {
    return conductance(p, std::fabs(interval)) / conductance(p, 0.0) - 1.0;
}

struct WeightUpdate {
    double dw_black = 0.0;
    double dw_white = 0.0;
};

// Update rule: magnitudes come from each memristor's recorded interval, the
// sign pattern from the competition outcome. The winner strengthens black
// synapses and weakens white ones; losers get the mirror image.
inline WeightUpdate weight_updates(const MemristorParams& p, const IntervalPair& iv,
                                   bool is_winner, double eta) {
    if (!(eta >= 0.0)) throw std::invalid_argument("eta must be nonnegative");
    const double ub = eta * normalized_conductance_excess(p, iv.dt1);
    const double uw = eta * normalized_conductance_excess(p, iv.dt2);
    return is_winner ? WeightUpdate{+ub, -uw} : WeightUpdate{-ub, +uw};
}

}  // namespace memspike
