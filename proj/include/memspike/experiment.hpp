#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "memspike/csv.hpp"
#include "memspike/network.hpp"
#include "memspike/resource_model.hpp"
#include "memspike/rng.hpp"
#include "memspike/run_config.hpp"

namespace memspike {

// Every subcommand builds its complete output in memory first; the files are
// pure functions of (config, fixtures), which is what makes rerun outputs
// byte-identical.
struct ReportBundle {
    std::vector<std::pair<std::string, std::string>> files;

    void add(std::string name, std::string contents) {
        files.emplace_back(std::move(name), std::move(contents));
    }
    const std::string& get(const std::string& name) const {
        for (const auto& [n, c] : files)
            if (n == name) return c;
        throw std::out_of_range("no file '" + name + "' in bundle");
    }
};

inline void write_bundle(const ReportBundle& b, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& [name, contents] : b.files) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    }
}

namespace detail {

inline std::string class_list_string(const std::vector<Glyph>& classes) {
    std::string s;
    for (Glyph g : classes) {
        if (!s.empty()) s.push_back(',');
        s.push_back(glyph_letter(g));
    }
    return s;
}

inline std::vector<BinaryImage> template_images(const std::vector<LabeledImage>& ds) {
    std::vector<BinaryImage> out;
    out.reserve(ds.size());
    for (const auto& li : ds) out.push_back(li.image);
    return out;
}

}  // namespace detail

// ---- trained-weights snapshot ----------------------------------------------

inline std::string serialize_snapshot(const Network& net, const std::vector<Glyph>& classes) {
    std::string s = "memspike-snapshot 1\n";
    s += "mode " + std::string(sharing_name(net.cfg.sharing)) + "\n";
    s += "width " + std::to_string(net.cfg.width) + "\n";
    s += "height " + std::to_string(net.cfg.height) + "\n";
    s += "classes " + detail::class_list_string(classes) + "\n";
    s += "v_threshold " + fmt_double(net.cfg.v_threshold, 17) + "\n";
    s += "assignment ";
    for (size_t i = 0; i < net.assignment.size(); ++i) {
        if (i) s.push_back(',');
        s += std::to_string(net.assignment[i]);
    }
    s.push_back('\n');
    if (net.cfg.sharing == SharingMode::Unshared) {
        s += "weights " + std::to_string(net.bank.n_pixels) + " " +
             std::to_string(net.bank.n_classes) + "\n";
        for (int p = 0; p < net.bank.n_pixels; ++p) {
            for (int c = 0; c < net.bank.n_classes; ++c) {
                if (c) s.push_back(' ');
                s += fmt_double(net.bank.w[static_cast<size_t>(p) * net.bank.n_classes + c], 17);
            }
            s.push_back('\n');
        }
    } else {
        s += "w_black";
        for (double w : net.bank.w_black) s += " " + fmt_double(w, 17);
        s += "\nw_white";
        for (double w : net.bank.w_white) s += " " + fmt_double(w, 17);
        s.push_back('\n');
    }
    s += "end\n";
    return s;
}

struct SnapshotError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Snapshot {
    SharingMode mode = SharingMode::Unshared;
    int width = 0, height = 0;
    std::vector<Glyph> classes;
    double v_threshold = 0.0;
    std::vector<int> assignment;
    std::vector<double> w, w_black, w_white;
};

inline Snapshot parse_snapshot(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next = [&](const char* what) {
        if (!std::getline(in, line)) throw SnapshotError(std::string("truncated snapshot: expected ") + what);
        return line;
    };
    if (next("header") != "memspike-snapshot 1") throw SnapshotError("not a memspike snapshot");

    Snapshot snap;
    auto field = [&](const std::string& l, const std::string& key) {
        if (l.rfind(key + " ", 0) != 0) throw SnapshotError("expected '" + key + "' line");
        return l.substr(key.size() + 1);
    };
    const std::string mode = field(next("mode"), "mode");
    if (mode == "shared") snap.mode = SharingMode::Shared;
    else if (mode == "unshared") snap.mode = SharingMode::Unshared;
    else throw SnapshotError("bad mode '" + mode + "'");
    snap.width = std::stoi(field(next("width"), "width"));
    snap.height = std::stoi(field(next("height"), "height"));
    for (const auto& item : detail::split_list(field(next("classes"), "classes"))) {
        if (item.size() != 1) throw SnapshotError("bad class '" + item + "'");
        snap.classes.push_back(glyph_from_letter(item[0]));
    }
    snap.v_threshold = std::stod(field(next("v_threshold"), "v_threshold"));
    for (const auto& item : detail::split_list(field(next("assignment"), "assignment")))
        snap.assignment.push_back(std::stoi(item));

    const std::string w_line = next("weights");
    if (snap.mode == SharingMode::Unshared) {
        std::istringstream h(field(w_line, "weights"));
        int n_pixels = 0, n_classes = 0;
        if (!(h >> n_pixels >> n_classes) || n_pixels <= 0 || n_classes <= 0)
            throw SnapshotError("bad weights header");
        snap.w.reserve(static_cast<size_t>(n_pixels) * n_classes);
        for (int p = 0; p < n_pixels; ++p) {
            std::istringstream row(next("weight row"));
            double v = 0.0;
            while (row >> v) snap.w.push_back(v);
        }
        if (snap.w.size() != static_cast<size_t>(n_pixels) * n_classes)
            throw SnapshotError("weight matrix size mismatch");
    } else {
        std::istringstream wb(field(w_line, "w_black"));
        double v = 0.0;
        while (wb >> v) snap.w_black.push_back(v);
        std::istringstream ww(field(next("w_white"), "w_white"));
        while (ww >> v) snap.w_white.push_back(v);
    }
    if (next("end") != "end") throw SnapshotError("missing end marker");
    return snap;
}

// ---- train ------------------------------------------------------------------

struct TrainOutcome {
    Network net;
    TrainReport report;
    ConfusionMatrix clean;
    ReportBundle bundle;
};

inline TrainOutcome run_train(const RunConfig& rc) {
    require_dataset_keys(rc);
    const auto dataset = glyph_dataset(*rc.side, rc.classes);
    const auto templates = detail::template_images(dataset);
    const auto nc = resolve_network_config(rc, templates);

    TrainOutcome out{init_network(nc, templates), {}, {}, {}};
    out.report = train(out.net, dataset);

    std::vector<std::pair<int, BinaryImage>> clean_set;
    for (size_t i = 0; i < dataset.size(); ++i)
        clean_set.emplace_back(static_cast<int>(i), dataset[i].image);
    out.clean = evaluate(out.net, clean_set);

    CsvWriter dw;
    dw.cell("cycle"); dw.cell("class"); dw.cell("dw_black"); dw.cell("dw_white"); dw.endrow();
    for (const auto& r : out.report.history) {
        dw.cell(r.cycle);
        dw.cell(std::string(1, glyph_letter(rc.classes[static_cast<size_t>(r.cls)])));
        dw.cell(r.dw_black);
        dw.cell(r.dw_white);
        dw.endrow();
    }
    out.bundle.add("dw_history.csv", dw.text);

    CsvWriter fh;
    fh.cell("cycle"); fh.cell("slot"); fh.cell("presented"); fh.cell("class"); fh.cell("fire_tick");
    fh.endrow();
    for (const auto& r : out.report.history) {
        fh.cell(r.cycle);
        fh.cell(r.slot);
        fh.cell(std::string(1, glyph_letter(rc.classes[static_cast<size_t>(r.presented)])));
        fh.cell(std::string(1, glyph_letter(rc.classes[static_cast<size_t>(r.cls)])));
        fh.cell(r.fire_tick);
        fh.endrow();
    }
    out.bundle.add("fire_history.csv", fh.text);

    out.bundle.add("weights.snapshot", serialize_snapshot(out.net, rc.classes));

    std::string summary;
    summary += "command train\n";
    summary += "side " + std::to_string(*rc.side) + "\n";
    summary += "classes " + detail::class_list_string(rc.classes) + "\n";
    summary += "sharing " + std::string(sharing_name(nc.sharing)) + "\n";
    summary += "seed " + std::to_string(rc.seed) + "\n";
    summary += "v_threshold " + fmt_double(nc.v_threshold) + "\n";
    summary += "theta_conv " + fmt_double(nc.theta_conv) + "\n";
    summary += "cycles_run " + std::to_string(out.report.cycles_run) + "\n";
    summary += std::string("converged ") + (out.report.converged ? "true" : "false") + "\n";
    summary += "clean_accuracy " + fmt_double(out.clean.accuracy) + "\n";
    summary += "assignment";
    for (size_t i = 0; i < out.report.assignment.size(); ++i)
        summary += std::string(" ") + glyph_letter(rc.classes[i]) + "->" +
                   std::to_string(out.report.assignment[i]);
    summary += "\n";
    out.bundle.add("summary.txt", summary);
    return out;
}

inline ReportBundle cmd_train(const RunConfig& rc) { return run_train(rc).bundle; }

// ---- test -------------------------------------------------------------------

inline std::vector<std::pair<int, BinaryImage>> noisy_testset(const RunConfig& rc,
                                                              const std::vector<LabeledImage>& ds) {
    if (rc.flips < 0) throw ConfigError("key 'flips': must be nonnegative");
    if (rc.n_sets < 1) throw ConfigError("key 'n_sets': must be positive");
    std::vector<std::pair<int, BinaryImage>> out;
    out.reserve(static_cast<size_t>(rc.n_sets) * ds.size());
    for (int set = 0; set < rc.n_sets; ++set) {
        for (size_t c = 0; c < ds.size(); ++c) {
            const uint64_t seed =
                derive_seed(rc.seed, "test-noise", static_cast<uint64_t>(set) * ds.size() + c);
            out.emplace_back(static_cast<int>(c), flip_noise(ds[c].image, rc.flips, seed));
        }
    }
    return out;
}

struct TestOutcome {
    ConfusionMatrix confusion;
    ReportBundle bundle;
};

inline TestOutcome run_test(const RunConfig& rc, const std::string& snapshot_text) {
    require_dataset_keys(rc);
    const auto snap = parse_snapshot(snapshot_text);
    const auto dataset = glyph_dataset(*rc.side, rc.classes);
    const auto templates = detail::template_images(dataset);

    if (snap.width != *rc.side || snap.height != *rc.side)
        throw SnapshotError("snapshot is " + std::to_string(snap.width) + "x" +
                            std::to_string(snap.height) + " but config side is " +
                            std::to_string(*rc.side));
    if (snap.classes != rc.classes)
        throw SnapshotError("snapshot classes do not match config classes");
    if (snap.mode != rc.sharing)
        throw SnapshotError("snapshot sharing mode does not match config");

    RunConfig rc_resolved = rc;
    rc_resolved.v_threshold = snap.v_threshold;
    const auto nc = resolve_network_config(rc_resolved, templates);
    Network net = init_network(nc, templates);
    if (nc.sharing == SharingMode::Unshared) {
        if (snap.w.size() != net.bank.w.size()) throw SnapshotError("weight matrix size mismatch");
        net.bank.w = snap.w;
    } else {
        if (snap.w_black.size() != net.bank.w_black.size() ||
            snap.w_white.size() != net.bank.w_white.size())
            throw SnapshotError("shared weight vector size mismatch");
        net.bank.w_black = snap.w_black;
        net.bank.w_white = snap.w_white;
    }
    if (snap.assignment.size() != net.assignment.size())
        throw SnapshotError("assignment size mismatch");
    net.assignment = snap.assignment;

    TestOutcome out;
    out.confusion = evaluate(net, noisy_testset(rc, dataset));

    CsvWriter cm;
    cm.cell("expected");
    for (Glyph g : rc.classes) cm.cell(std::string(1, glyph_letter(g)));
    cm.cell("none");
    cm.endrow();
    for (int e = 0; e < out.confusion.n_classes; ++e) {
        cm.cell(std::string(1, glyph_letter(rc.classes[static_cast<size_t>(e)])));
        for (int p = 0; p <= out.confusion.n_classes; ++p) cm.cell(out.confusion.at(e, p));
        cm.endrow();
    }
    out.bundle.add("confusion.csv", cm.text);

    std::string summary;
    summary += "command test\n";
    summary += "side " + std::to_string(*rc.side) + "\n";
    summary += "classes " + detail::class_list_string(rc.classes) + "\n";
    summary += "sharing " + std::string(sharing_name(rc.sharing)) + "\n";
    summary += "seed " + std::to_string(rc.seed) + "\n";
    summary += "flips " + std::to_string(rc.flips) + "\n";
    summary += "n_sets " + std::to_string(rc.n_sets) + "\n";
    summary += "images " + std::to_string(out.confusion.total) + "\n";
    summary += "accuracy " + fmt_double(out.confusion.accuracy) + "\n";
    summary += std::string("accuracy_defined ") + (out.confusion.accuracy_defined ? "true" : "false") + "\n";
    out.bundle.add("summary.txt", summary);
    return out;
}

inline ReportBundle cmd_test(const RunConfig& rc, const std::string& snapshot_text) {
    return run_test(rc, snapshot_text).bundle;
}

// ---- stdp curve ---------------------------------------------------------------

inline ReportBundle cmd_stdp_curve(const RunConfig& rc) {
    if (rc.stdp_points < 3 || rc.stdp_points % 2 == 0)
        throw ConfigError("key 'stdp_points': need an odd count >= 3 so the zero row exists");
    const auto device = make_memristor_params(rc.k1, rc.k2, rc.dt_max);
    CsvWriter csv;
    csv.cell("dt_us"); csv.cell("dw"); csv.endrow();
    const int n = rc.stdp_points;
    for (int i = 0; i < n; ++i) {
        // Symmetric grid over [-dt_max, +dt_max]; midpoint lands exactly on 0.
        const double dt = rc.dt_max * (2.0 * i - (n - 1)) / (n - 1);
        const double mag = rc.eta * normalized_conductance_excess(device, dt);
        csv.cell(dt);
        csv.cell(dt > 0 ? mag : dt < 0 ? -mag : 0.0);
        csv.endrow();
    }
    ReportBundle b;
    b.add("stdp.csv", csv.text);
    return b;
}

// ---- resource fit -------------------------------------------------------------

inline ReportBundle cmd_resource_fit() {
    const auto& pts = resource_points();
    std::vector<std::pair<double, double>> without, with;
    for (const auto& p : pts) {
        const double m = resource_metric(p.n_side, p.t_classes);
        without.emplace_back(m, static_cast<double>(p.alm_without));
        with.emplace_back(m, static_cast<double>(p.alm_with));
    }
    const auto lin_wo = fit_resources(without, FitModel::LinearInMetric);
    const auto pow_wo = fit_resources(without, FitModel::PowerLaw);
    const auto lin_wi = fit_resources(with, FitModel::LinearInMetric);
    const auto pow_wi = fit_resources(with, FitModel::PowerLaw);

    CsvWriter ptcsv;
    for (const char* h : {"n_side", "t_classes", "metric", "alm_without", "alm_with",
                          "linear_fit_without", "linear_resid_without", "power_fit_without",
                          "power_resid_without", "linear_fit_with", "linear_resid_with",
                          "power_fit_with", "power_resid_with"})
        ptcsv.cell(std::string(h));
    ptcsv.endrow();
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        ptcsv.cell(p.n_side);
        ptcsv.cell(p.t_classes);
        ptcsv.cell(resource_metric(p.n_side, p.t_classes));
        ptcsv.cell(p.alm_without);
        ptcsv.cell(p.alm_with);
        ptcsv.cell(predict(lin_wo, p.n_side, p.t_classes));
        ptcsv.cell(lin_wo.residuals[i]);
        ptcsv.cell(predict(pow_wo, p.n_side, p.t_classes));
        ptcsv.cell(pow_wo.residuals[i]);
        ptcsv.cell(predict(lin_wi, p.n_side, p.t_classes));
        ptcsv.cell(lin_wi.residuals[i]);
        ptcsv.cell(predict(pow_wi, p.n_side, p.t_classes));
        ptcsv.cell(pow_wi.residuals[i]);
        ptcsv.endrow();
    }

    CsvWriter fits;
    fits.cell("series"); fits.cell("model"); fits.cell("c0"); fits.cell("c1");
    fits.cell("log_log_slope"); fits.endrow();
    const auto fit_row = [&](const char* series, const char* model, const ResourceFit& f,
                             bool power) {
        fits.cell(std::string(series));
        fits.cell(std::string(model));
        fits.cell(f.c0);
        fits.cell(f.c1);
        if (power) fits.cell(f.log_log_slope); else fits.cell(std::string(""));
        fits.endrow();
    };
    fit_row("without_sharing", "linear", lin_wo, false);
    fit_row("without_sharing", "power", pow_wo, true);
    fit_row("with_sharing", "linear", lin_wi, false);
    fit_row("with_sharing", "power", pow_wi, true);

    ReportBundle b;
    b.add("resource_points.csv", ptcsv.text);
    b.add("resource_fits.csv", fits.text);
    return b;
}

// ---- sweep --------------------------------------------------------------------

inline ReportBundle cmd_sweep(const RunConfig& rc) {
    require_dataset_keys(rc);
    if (rc.sweep_axes.empty()) throw ConfigError("sweep requires at least one sweep.<key> axis");

    std::vector<size_t> shape, index(rc.sweep_axes.size(), 0);
    size_t total = 1;
    for (const auto& [key, values] : rc.sweep_axes) {
        shape.push_back(values.size());
        total *= values.size();
    }

    CsvWriter csv;
    for (const auto& [key, values] : rc.sweep_axes) csv.cell(key);
    csv.cell("cycles_run"); csv.cell("converged"); csv.cell("accuracy"); csv.endrow();

    for (size_t point = 0; point < total; ++point) {
        RunConfig pc = rc;
        pc.sweep_axes.clear();
        for (size_t ax = 0; ax < rc.sweep_axes.size(); ++ax)
            apply_config_entry(pc, rc.sweep_axes[ax].first, rc.sweep_axes[ax].second[index[ax]]);

        auto trained = run_train(pc);
        const auto dataset = glyph_dataset(*pc.side, pc.classes);
        const auto confusion = evaluate(trained.net, noisy_testset(pc, dataset));

        for (size_t ax = 0; ax < rc.sweep_axes.size(); ++ax)
            csv.cell(rc.sweep_axes[ax].second[index[ax]]);
        csv.cell(trained.report.cycles_run);
        csv.cell(std::string(trained.report.converged ? "true" : "false"));
        csv.cell(confusion.accuracy);
        csv.endrow();

        for (size_t ax = rc.sweep_axes.size(); ax-- > 0;) {  // last axis fastest
            if (++index[ax] < shape[ax]) break;
            index[ax] = 0;
        }
    }

    ReportBundle b;
    b.add("sweep.csv", csv.text);
    return b;
}

// ---- trace --------------------------------------------------------------------

inline ReportBundle cmd_trace(const RunConfig& rc) {
    auto trained = run_train(rc);

    CsvWriter tr;
    for (const char* h : {"cycle", "slot", "presented", "class", "fired", "fire_tick",
                          "dt1_us", "dt2_us", "dw_black", "dw_white", "winner"})
        tr.cell(std::string(h));
    tr.endrow();
    for (const auto& r : trained.report.history) {
        tr.cell(r.cycle);
        tr.cell(r.slot);
        tr.cell(std::string(1, glyph_letter(rc.classes[static_cast<size_t>(r.presented)])));
        tr.cell(std::string(1, glyph_letter(rc.classes[static_cast<size_t>(r.cls)])));
        tr.cell(std::string(r.fired ? "1" : "0"));
        tr.cell(r.fire_tick);
        tr.cell(r.dt1);
        tr.cell(r.dt2);
        tr.cell(r.dw_black);
        tr.cell(r.dw_white);
        tr.cell(std::string(r.winner ? "1" : "0"));
        tr.endrow();
    }

    CsvWriter wf;
    wf.cell("t"); wf.cell("v"); wf.endrow();
    for (const auto& [t, v] : srm_trace_waveform(SrmTraceShape{})) {
        wf.cell(t);
        wf.cell(v);
        wf.endrow();
    }

    ReportBundle b;
    b.add("trace.csv", tr.text);
    b.add("waveform.csv", wf.text);
    return b;
}

}  // namespace memspike
