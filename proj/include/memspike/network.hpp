#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "memspike/device_model.hpp"
#include "memspike/glyphs.hpp"
#include "memspike/neuron.hpp"
#include "memspike/spike_codec.hpp"
#include "memspike/time_unit.hpp"

namespace memspike {

enum class SharingMode : uint8_t { Unshared, Shared };

inline const char* sharing_name(SharingMode m) {
    return m == SharingMode::Shared ? "shared" : "unshared";
}

struct NetworkConfig {
    int width = 3;
    int height = 3;
    int n_classes = 3;
    SharingMode sharing = SharingMode::Unshared;
    TimingConfig timing;
    PspConfig psp;
    MemristorParams device;

    double w0 = 1.0;
    double eta = 30.0;
    // Per-cycle learning-rate factor. Interval magnitudes alone cannot shrink
    // below theta_conv while the output fires between the volleys (dt1 and
    // |dt2| always sum to the volley gap), so convergence is driven by an
    // explicit geometric schedule: eta_c = eta * eta_decay^(c-1).
    double eta_decay = 0.1;
    // Losers update with flipped signs at a fraction of the winner's rate; at
    // full strength the accumulated loser white potentiation from the T-1
    // losses per cycle would cancel the winner's white depression.
    double loser_scale = 0.1;
    double v_threshold = 0.1425;
    double theta_conv = 0.01;
    int max_cycles = 50;
    double w_min = -4.0;
    double w_max = 4.0;
};

inline void validate(const NetworkConfig& c) {
    if (c.width <= 0 || c.height <= 0) throw std::invalid_argument("image dimensions must be positive");
    if (c.n_classes < 2) throw std::invalid_argument("need at least two classes");
    validate(c.timing);
    validate(c.psp);
    validate(c.device);
    if (!(c.eta > 0.0)) throw std::invalid_argument("eta must be positive");
    if (!(c.eta_decay > 0.0 && c.eta_decay <= 1.0))
        throw std::invalid_argument("eta_decay must lie in (0, 1]");
    if (!(c.loser_scale >= 0.0)) throw std::invalid_argument("loser_scale must be nonnegative");
    if (!(c.v_threshold > 0.0)) throw std::invalid_argument("v_threshold must be positive");
    if (!(c.theta_conv > 0.0)) throw std::invalid_argument("theta_conv must be positive");
    if (c.max_cycles < 1) throw std::invalid_argument("max_cycles must be at least 1");
    if (!(c.w_min < c.w0 && c.w0 <= c.w_max))
        throw std::invalid_argument("need w_min < w0 <= w_max");
    // In-slot intervals must stay inside the device's recording range.
    if (c.timing.slot_us() > c.device.dt_max + 1e-12)
        throw std::invalid_argument("slot duration exceeds the device recording range dt_max");
}

// Default threshold: a quarter-peak crossing for the mean-ink template, so a
// fresh network fires about a quarter kernel unit after the black volley.
inline double default_threshold(const PspConfig& psp, double w0,
                                const std::vector<BinaryImage>& templates) {
    if (templates.empty()) throw std::invalid_argument("no templates");
    double mean_black = 0.0;
    for (const auto& t : templates) mean_black += t.black_count();
    mean_black /= static_cast<double>(templates.size());
    return psp.a * w0 * mean_black * 0.25;
}

// Weight storage. Unshared: one scalar per (pixel, class), pixel-major.
// Shared: two scalars per class plus the class template as the pixel ->
// {black, white} selection map.
struct SynapseBank {
    SharingMode mode = SharingMode::Unshared;
    int n_pixels = 0;
    int n_classes = 0;
    std::vector<double> w;        // unshared, size n_pixels * n_classes
    std::vector<double> w_black;  // shared, size n_classes
    std::vector<double> w_white;  // shared, size n_classes

    size_t scalar_count() const { return w.size() + w_black.size() + w_white.size(); }
};

struct Network {
    NetworkConfig cfg;
    SynapseBank bank;
    std::vector<BinaryImage> templates;
    std::vector<int> assignment;   // class index -> neuron index
    std::vector<long> last_win;    // presentation counter of each neuron's last win
    long presentation_count = 0;
};

inline Network init_network(const NetworkConfig& cfg, const std::vector<BinaryImage>& templates) {
    validate(cfg);
    if (static_cast<int>(templates.size()) != cfg.n_classes)
        throw std::invalid_argument("expected one template per class");
    const int n_pixels = cfg.width * cfg.height;
    for (const auto& t : templates)
        if (t.width != cfg.width || t.height != cfg.height)
            throw std::invalid_argument("template dimensions do not match the network");
    for (size_t i = 0; i < templates.size(); ++i)
        for (size_t j = i + 1; j < templates.size(); ++j)
            if (templates[i] == templates[j])
                throw std::invalid_argument("duplicate templates: classes are not separable");

    Network net;
    net.cfg = cfg;
    net.templates = templates;
    net.bank.mode = cfg.sharing;
    net.bank.n_pixels = n_pixels;
    net.bank.n_classes = cfg.n_classes;
    if (cfg.sharing == SharingMode::Unshared) {
        net.bank.w.assign(static_cast<size_t>(n_pixels) * cfg.n_classes, cfg.w0);
    } else {
        net.bank.w_black.assign(static_cast<size_t>(cfg.n_classes), cfg.w0);
        net.bank.w_white.assign(static_cast<size_t>(cfg.n_classes), cfg.w0);
    }
    net.assignment.resize(static_cast<size_t>(cfg.n_classes));
    for (int c = 0; c < cfg.n_classes; ++c) net.assignment[static_cast<size_t>(c)] = c;
    net.last_win.assign(static_cast<size_t>(cfg.n_classes), -1);
    return net;
}

inline double effective_weight(const Network& net, int pixel, int cls) {
    if (pixel < 0 || pixel >= net.bank.n_pixels) throw std::out_of_range("pixel index");
    if (cls < 0 || cls >= net.bank.n_classes) throw std::out_of_range("class index");
    if (net.bank.mode == SharingMode::Unshared)
        return net.bank.w[static_cast<size_t>(pixel) * net.bank.n_classes + cls];
    const bool black_in_template =
        net.templates[static_cast<size_t>(cls)].pixels[static_cast<size_t>(pixel)] == Pixel::Black;
    return black_in_template ? net.bank.w_black[static_cast<size_t>(cls)]
                             : net.bank.w_white[static_cast<size_t>(cls)];
}

namespace detail {

// All pixels of one volley share an arrival tick, so each neuron reduces to
// two aggregate inputs: the summed black-pixel weight at t_black and the
// summed white-pixel weight at t_white. Identical to per-pixel accumulation
// by linearity of the kernel sum.
inline std::vector<std::optional<long>> fire_competition(const Network& net, const BinaryImage& img) {
    const auto& cfg = net.cfg;
    std::vector<NeuronState> neurons(static_cast<size_t>(cfg.n_classes));
    for (int c = 0; c < cfg.n_classes; ++c) {
        double black_sum = 0.0, white_sum = 0.0;
        for (int p = 0; p < net.bank.n_pixels; ++p) {
            const double w = effective_weight(net, p, c);
            (img.pixels[static_cast<size_t>(p)] == Pixel::Black ? black_sum : white_sum) += w;
        }
        neurons[static_cast<size_t>(c)].inputs = {
            {cfg.timing.t_black_tick, black_sum},
            {cfg.timing.t_white_tick, white_sum},
        };
    }
    std::vector<std::optional<long>> fire(static_cast<size_t>(cfg.n_classes));
    for (long t = 0; t < cfg.timing.slot_ticks; ++t) {
        bool all_done = true;
        for (int c = 0; c < cfg.n_classes; ++c) {
            auto& f = fire[static_cast<size_t>(c)];
            if (f) continue;
            f = step_fire(neurons[static_cast<size_t>(c)], cfg.psp, cfg.v_threshold, t);
            if (!f) all_done = false;
        }
        if (all_done) break;
    }
    return fire;
}

inline void apply_update(Network& net, int cls, const BinaryImage& img, const WeightUpdate& up) {
    const auto clamp = [&](double w) { return std::clamp(w, net.cfg.w_min, net.cfg.w_max); };
    if (net.bank.mode == SharingMode::Unshared) {
        for (int p = 0; p < net.bank.n_pixels; ++p) {
            auto& w = net.bank.w[static_cast<size_t>(p) * net.bank.n_classes + cls];
            w = clamp(w + (img.pixels[static_cast<size_t>(p)] == Pixel::Black ? up.dw_black
                                                                              : up.dw_white));
        }
    } else {
        auto& wb = net.bank.w_black[static_cast<size_t>(cls)];
        auto& ww = net.bank.w_white[static_cast<size_t>(cls)];
        wb = clamp(wb + up.dw_black);
        ww = clamp(ww + up.dw_white);
    }
}

}  // namespace detail

struct ClassPresentation {
    std::optional<long> fire_tick;
    std::optional<IntervalPair> intervals;  // nullopt on NoFire
    WeightUpdate update;                    // zeros on NoFire
    bool winner = false;
};

struct PresentationResult {
    std::vector<ClassPresentation> per_class;
    std::optional<int> winner;
    double max_abs_dw = 0.0;
    bool all_silent = false;
};

// One training slot: run the fire competition, pick the winner (earliest
// fire; ties go to the least recently won, then lowest index), feed each
// class's interval recorder, and apply the resulting updates.
inline PresentationResult present(Network& net, const BinaryImage& img, double eta_cycle) {
    const auto& cfg = net.cfg;
    if (img.width != cfg.width || img.height != cfg.height)
        throw std::invalid_argument("presented image dimensions do not match the network");

    PresentationResult res;
    res.per_class.resize(static_cast<size_t>(cfg.n_classes));
    const auto fire = detail::fire_competition(net, img);

    for (int c = 0; c < cfg.n_classes; ++c) {
        if (!fire[static_cast<size_t>(c)]) continue;
        const long tick = *fire[static_cast<size_t>(c)];
        if (!res.winner) {
            res.winner = c;
            continue;
        }
        const long best = *fire[static_cast<size_t>(*res.winner)];
        if (tick < best) {
            res.winner = c;
        } else if (tick == best && net.last_win[static_cast<size_t>(c)] <
                                       net.last_win[static_cast<size_t>(*res.winner)]) {
            res.winner = c;  // least recently won; lowest index wins fresh ties
        }
    }
    res.all_silent = !res.winner.has_value();
    if (res.winner) net.last_win[static_cast<size_t>(*res.winner)] = net.presentation_count;
    net.presentation_count += 1;

    for (int c = 0; c < cfg.n_classes; ++c) {
        auto& out = res.per_class[static_cast<size_t>(c)];
        out.fire_tick = fire[static_cast<size_t>(c)];
        out.winner = res.winner && *res.winner == c;

        auto unit = make_time_unit(cfg.device, cfg.timing);
        std::vector<SpikeEvent> events;
        events.push_back({cfg.timing.t_black_tick, SpikeKind::BlackVolley, -1, {}});
        events.push_back({cfg.timing.t_white_tick, SpikeKind::WhiteVolley, -1, {}});
        if (out.fire_tick) events.push_back({*out.fire_tick, SpikeKind::Output, c, {}});
        std::stable_sort(events.begin(), events.end(),
                         [](const SpikeEvent& a, const SpikeEvent& b) { return a.tick < b.tick; });
        for (const auto& e : events) unit = on_spike(unit, e);

        out.intervals = read_intervals(unit);
        if (out.intervals) {
            const double eta_eff = out.winner ? eta_cycle : eta_cycle * cfg.loser_scale;
            out.update = weight_updates(cfg.device, *out.intervals, out.winner, eta_eff);
            detail::apply_update(net, c, img, out.update);
        }
        res.max_abs_dw = std::max({res.max_abs_dw, std::fabs(out.update.dw_black),
                                   std::fabs(out.update.dw_white)});
    }
    return res;
}

struct DwRecord {
    int cycle = 0;       // 1-based
    int slot = 0;        // presentation index within the cycle
    int presented = 0;   // class index of the presented template
    int cls = 0;         // class whose recorder produced this row
    bool fired = false;
    long fire_tick = -1;
    double dt1 = 0.0, dt2 = 0.0;
    double dw_black = 0.0, dw_white = 0.0;
    bool winner = false;
};

struct TrainReport {
    bool converged = false;
    int cycles_run = 0;
    std::vector<double> cycle_max_abs_dw;  // one entry per cycle run
    std::vector<DwRecord> history;
    std::vector<int> assignment;           // class -> neuron, from the final cycle
};

// Labels ride along for reporting only; updates never see them.
inline TrainReport train(Network& net, const std::vector<LabeledImage>& dataset) {
    const auto& cfg = net.cfg;
    if (static_cast<int>(dataset.size()) != cfg.n_classes)
        throw std::invalid_argument("training set must present each class template once per cycle");
    for (size_t i = 0; i < dataset.size(); ++i)
        if (!(dataset[i].image == net.templates[i]))
            throw std::invalid_argument("training images must be the class templates, in order");

    TrainReport report;
    std::vector<int> cycle_winners(static_cast<size_t>(cfg.n_classes), -1);
    for (int cycle = 1; cycle <= cfg.max_cycles; ++cycle) {
        const double eta_cycle = cfg.eta * std::pow(cfg.eta_decay, cycle - 1);
        double cycle_max = 0.0;
        std::fill(cycle_winners.begin(), cycle_winners.end(), -1);
        for (int slot = 0; slot < static_cast<int>(dataset.size()); ++slot) {
            const auto res = present(net, dataset[static_cast<size_t>(slot)].image, eta_cycle);
            cycle_max = std::max(cycle_max, res.max_abs_dw);
            if (res.winner) cycle_winners[static_cast<size_t>(slot)] = *res.winner;
            for (int c = 0; c < cfg.n_classes; ++c) {
                const auto& pc = res.per_class[static_cast<size_t>(c)];
                DwRecord r;
                r.cycle = cycle;
                r.slot = slot;
                r.presented = slot;
                r.cls = c;
                r.fired = pc.fire_tick.has_value();
                r.fire_tick = pc.fire_tick.value_or(-1);
                if (pc.intervals) {
                    r.dt1 = pc.intervals->dt1;
                    r.dt2 = pc.intervals->dt2;
                }
                r.dw_black = pc.update.dw_black;
                r.dw_white = pc.update.dw_white;
                r.winner = pc.winner;
                report.history.push_back(r);
            }
        }
        report.cycles_run = cycle;
        report.cycle_max_abs_dw.push_back(cycle_max);
        if (cycle_max < cfg.theta_conv) {
            report.converged = true;
            break;
        }
    }

    // Adopt the final cycle's winners as the class -> neuron assignment.
    for (int c = 0; c < cfg.n_classes; ++c)
        if (cycle_winners[static_cast<size_t>(c)] >= 0)
            net.assignment[static_cast<size_t>(c)] = cycle_winners[static_cast<size_t>(c)];
    report.assignment = net.assignment;
    return report;
}

// Test-time competition: earliest fire wins, ties to the lowest neuron
// index. No tie bookkeeping and no updates.
inline std::optional<int> classify(const Network& net, const BinaryImage& img) {
    if (img.width != net.cfg.width || img.height != net.cfg.height)
        throw std::invalid_argument("image dimensions do not match the network");
    const auto fire = detail::fire_competition(net, img);
    std::optional<int> best;
    for (int c = 0; c < net.cfg.n_classes; ++c) {
        if (!fire[static_cast<size_t>(c)]) continue;
        if (!best || *fire[static_cast<size_t>(c)] < *fire[static_cast<size_t>(*best)]) best = c;
    }
    if (!best) return std::nullopt;
    for (int cls = 0; cls < net.cfg.n_classes; ++cls)
        if (net.assignment[static_cast<size_t>(cls)] == *best) return cls;
    return std::nullopt;  // winner neuron not assigned to any class
}

struct ConfusionMatrix {
    int n_classes = 0;
    std::vector<long> counts;  // n x (n + 1); last column counts none-results
    long total = 0;
    double accuracy = 0.0;
    bool accuracy_defined = false;

    long at(int expected, int predicted_or_none) const {
        return counts[static_cast<size_t>(expected) * (n_classes + 1) + predicted_or_none];
    }
};

inline ConfusionMatrix evaluate(const Network& net,
                                const std::vector<std::pair<int, BinaryImage>>& testset) {
    ConfusionMatrix m;
    m.n_classes = net.cfg.n_classes;
    m.counts.assign(static_cast<size_t>(m.n_classes) * (m.n_classes + 1), 0);
    long hits = 0;
    for (const auto& [expected, img] : testset) {
        if (expected < 0 || expected >= m.n_classes) throw std::invalid_argument("label out of range");
        const auto got = classify(net, img);
        const int col = got ? *got : m.n_classes;
        m.counts[static_cast<size_t>(expected) * (m.n_classes + 1) + col] += 1;
        if (got && *got == expected) ++hits;
        ++m.total;
    }
    m.accuracy_defined = m.total > 0;
    m.accuracy = m.accuracy_defined ? static_cast<double>(hits) / static_cast<double>(m.total) : 0.0;
    return m;
}

}  // namespace memspike
