#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "memspike/rng.hpp"

namespace memspike {

enum class Pixel : uint8_t { White = 0, Black = 1 };

struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<Pixel> pixels;  // row-major

    int size() const { return width * height; }
    Pixel at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    Pixel& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }

    int black_count() const {
        return static_cast<int>(std::count(pixels.begin(), pixels.end(), Pixel::Black));
    }

    bool operator==(const BinaryImage&) const = default;
};

inline BinaryImage make_image(int width, int height, Pixel fill = Pixel::White) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
    return BinaryImage{width, height, std::vector<Pixel>(static_cast<size_t>(width) * height, fill)};
}

// Discrete time axis. One presentation slot is slot_ticks ticks of tick_ns
// nanoseconds each; the black volley fires at t_black_tick, the white volley
// at t_white_tick, strictly later and inside the slot.
struct TimingConfig {
    double tick_ns = 4.0;
    long slot_ticks = 1000;
    long t_black_tick = 0;
    long t_white_tick = 500;

    double tick_us() const { return tick_ns * 1e-3; }
    double slot_us() const { return slot_ticks * tick_us(); }
};

inline void validate(const TimingConfig& t) {
    if (!(t.tick_ns > 0.0)) throw std::invalid_argument("tick_ns must be positive");
    if (t.slot_ticks <= 0) throw std::invalid_argument("slot_ticks must be positive");
    if (t.t_black_tick < 0 || t.t_black_tick >= t.slot_ticks)
        throw std::invalid_argument("t_black_tick outside slot");
    if (t.t_white_tick <= t.t_black_tick || t.t_white_tick >= t.slot_ticks)
        throw std::invalid_argument("t_white_tick must follow t_black_tick inside the slot");
}

enum class SpikeKind : uint8_t { BlackVolley, WhiteVolley, Output };

struct SpikeEvent {
    long tick = 0;
    SpikeKind kind = SpikeKind::BlackVolley;
    int output_class = -1;      // Output events only
    std::vector<int> sources;   // pixel indices for volleys, may be empty
};

struct SpikeSchedule {
    std::vector<SpikeEvent> events;
};

// Latency coding: every black pixel spikes in the black volley, every white
// pixel in the white volley. Both volleys are present even when empty so the
// slot structure is independent of image content.
inline SpikeSchedule encode(const BinaryImage& img, const TimingConfig& timing) {
    validate(timing);
    if (img.size() == 0) throw std::invalid_argument("cannot encode an empty image");
    SpikeEvent black{timing.t_black_tick, SpikeKind::BlackVolley, -1, {}};
    SpikeEvent white{timing.t_white_tick, SpikeKind::WhiteVolley, -1, {}};
    for (int i = 0; i < img.size(); ++i) {
        (img.pixels[i] == Pixel::Black ? black : white).sources.push_back(i);
    }
    return SpikeSchedule{{std::move(black), std::move(white)}};
}

struct ImageParseError : std::runtime_error {
    int line;
    ImageParseError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

// Text format: "<width> <height>\n" then height rows of width '0'/'1' chars,
// each row LF-terminated (trailing newline required). '1' is black.
inline BinaryImage parse_image(std::string_view text) {
    if (text.empty()) throw ImageParseError(1, "empty input");
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            throw ImageParseError(static_cast<int>(lines.size() + 1), "missing trailing newline");
        std::string line(text.substr(pos, nl - pos));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        pos = nl + 1;
    }
    if (lines.empty()) throw ImageParseError(1, "empty input");

    int width = 0, height = 0;
    {
        const std::string& header = lines[0];
        size_t idx = 0;
        try {
            width = std::stoi(header, &idx);
            size_t rest = header.find_first_not_of(" \t", idx);
            size_t idx2 = 0;
            if (rest == std::string::npos) throw std::invalid_argument("one field");
            height = std::stoi(header.substr(rest), &idx2);
            if (header.find_first_not_of(" \t", rest + idx2) != std::string::npos)
                throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw ImageParseError(1, "header must be '<width> <height>'");
        }
        if (width <= 0 || height <= 0) throw ImageParseError(1, "dimensions must be positive");
    }

    BinaryImage img = make_image(width, height);
    int row = 0;
    for (size_t li = 1; li < lines.size(); ++li) {
        const int line_no = static_cast<int>(li + 1);
        std::string cells;
        for (char c : lines[li]) {
            if (c == '0' || c == '1') cells.push_back(c);
            else if (c == ' ' || c == '\t') continue;  // whitespace is ignorable
            else throw ImageParseError(line_no, std::string("invalid character '") + c + "'");
        }
        if (cells.empty()) continue;  // blank line
        if (row >= height) throw ImageParseError(line_no, "more rows than header height");
        if (static_cast<int>(cells.size()) != width)
            throw ImageParseError(line_no, "row has " + std::to_string(cells.size()) +
                                               " cells, expected " + std::to_string(width));
        for (int x = 0; x < width; ++x)
            img.at(x, row) = cells[static_cast<size_t>(x)] == '1' ? Pixel::Black : Pixel::White;
        ++row;
    }
    if (row != height)
        throw ImageParseError(static_cast<int>(lines.size() + 1),
                              "found " + std::to_string(row) + " rows, expected " + std::to_string(height));
    return img;
}

inline std::string serialize_image(const BinaryImage& img) {
    std::string out = std::to_string(img.width) + " " + std::to_string(img.height) + "\n";
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x)
            out.push_back(img.at(x, y) == Pixel::Black ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

// Flip exactly `flips` distinct pixels, chosen by a seeded partial shuffle.
inline BinaryImage flip_noise(const BinaryImage& img, int flips, uint64_t seed) {
    if (flips < 0 || flips > img.size())
        throw std::invalid_argument("flip count must lie in [0, pixel count]");
    BinaryImage out = img;
    std::vector<int> idx(static_cast<size_t>(img.size()));
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix64 rng(seed);
    for (int i = 0; i < flips; ++i) {
        const auto j = i + static_cast<int>(rng.next_below(static_cast<uint64_t>(img.size() - i)));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
        auto& p = out.pixels[static_cast<size_t>(idx[static_cast<size_t>(i)])];
        p = (p == Pixel::Black) ? Pixel::White : Pixel::Black;
    }
    return out;
}

}  // namespace memspike
