#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "memspike/spike_codec.hpp"

namespace memspike {

enum class Glyph : int { Z = 0, V = 1, N = 2, X = 3, C = 4 };

inline constexpr std::array<Glyph, 5> kAllGlyphs{Glyph::Z, Glyph::V, Glyph::N, Glyph::X, Glyph::C};

inline char glyph_letter(Glyph g) {
    switch (g) {
        case Glyph::Z: return 'Z';
        case Glyph::V: return 'V';
        case Glyph::N: return 'N';
        case Glyph::X: return 'X';
        case Glyph::C: return 'C';
    }
    throw std::invalid_argument("unknown glyph");
}

inline Glyph glyph_from_letter(char c) {
    switch (c) {
        case 'Z': return Glyph::Z;
        case 'V': return Glyph::V;
        case 'N': return Glyph::N;
        case 'X': return Glyph::X;
        case 'C': return Glyph::C;
        default: throw std::invalid_argument(std::string("unknown glyph letter '") + c + "'");
    }
}

// Hand-drawn bitmaps, one block per (side, letter), stored in the same text
// format parse_image reads. Tweak them here and every consumer follows.
namespace glyph_art {

inline constexpr std::string_view z3 =
    "3 3\n"
    "111\n"
    "010\n"
    "111\n";
inline constexpr std::string_view v3 =
    "3 3\n"
    "101\n"
    "101\n"
    "010\n";
inline constexpr std::string_view n3 =
    "3 3\n"
    "101\n"
    "111\n"
    "101\n";
inline constexpr std::string_view x3 =
    "3 3\n"
    "101\n"
    "010\n"
    "101\n";
inline constexpr std::string_view c3 =
    "3 3\n"
    "111\n"
    "100\n"
    "111\n";

inline constexpr std::string_view z5 =
    "5 5\n"
    "11111\n"
    "00010\n"
    "00100\n"
    "01000\n"
    "11111\n";
inline constexpr std::string_view v5 =
    "5 5\n"
    "10001\n"
    "10001\n"
    "01010\n"
    "01010\n"
    "00100\n";
inline constexpr std::string_view n5 =
    "5 5\n"
    "10001\n"
    "11001\n"
    "10101\n"
    "10011\n"
    "10001\n";
inline constexpr std::string_view x5 =
    "5 5\n"
    "10001\n"
    "01010\n"
    "00100\n"
    "01010\n"
    "10001\n";
inline constexpr std::string_view c5 =
    "5 5\n"
    "01111\n"
    "10000\n"
    "10000\n"
    "10000\n"
    "01111\n";

inline constexpr std::string_view z7 =
    "7 7\n"
    "1111111\n"
    "0000010\n"
    "0000100\n"
    "0001000\n"
    "0010000\n"
    "0100000\n"
    "1111111\n";
inline constexpr std::string_view v7 =
    "7 7\n"
    "1000001\n"
    "1000001\n"
    "0100010\n"
    "0100010\n"
    "0010100\n"
    "0010100\n"
    "0001000\n";
inline constexpr std::string_view n7 =
    "7 7\n"
    "1000001\n"
    "1100001\n"
    "1010001\n"
    "1001001\n"
    "1000101\n"
    "1000011\n"
    "1000001\n";
inline constexpr std::string_view x7 =
    "7 7\n"
    "1000001\n"
    "0100010\n"
    "0010100\n"
    "0001000\n"
    "0010100\n"
    "0100010\n"
    "1000001\n";
inline constexpr std::string_view c7 =
    "7 7\n"
    "0111110\n"
    "1000001\n"
    "1000000\n"
    "1000000\n"
    "1000000\n"
    "1000001\n"
    "0111110\n";

inline constexpr std::string_view z9 =
    "9 9\n"
    "111111111\n"
    "000000010\n"
    "000000100\n"
    "000001000\n"
    "000010000\n"
    "000100000\n"
    "001000000\n"
    "010000000\n"
    "111111111\n";
inline constexpr std::string_view v9 =
    "9 9\n"
    "100000001\n"
    "100000001\n"
    "010000010\n"
    "010000010\n"
    "001000100\n"
    "001000100\n"
    "000101000\n"
    "000101000\n"
    "000010000\n";
inline constexpr std::string_view n9 =
    "9 9\n"
    "100000001\n"
    "110000001\n"
    "101000001\n"
    "100100001\n"
    "100010001\n"
    "100001001\n"
    "100000101\n"
    "100000011\n"
    "100000001\n";
inline constexpr std::string_view x9 =
    "9 9\n"
    "100000001\n"
    "010000010\n"
    "001000100\n"
    "000101000\n"
    "000010000\n"
    "000101000\n"
    "001000100\n"
    "010000010\n"
    "100000001\n";
inline constexpr std::string_view c9 =
    "9 9\n"
    "001111100\n"
    "010000010\n"
    "100000000\n"
    "100000000\n"
    "100000000\n"
    "100000000\n"
    "100000000\n"
    "010000010\n"
    "001111100\n";

}  // namespace glyph_art

inline std::string_view glyph_text(int side, Glyph g) {
    using namespace glyph_art;
    switch (side) {
        case 3:
            switch (g) {
                case Glyph::Z: return z3; case Glyph::V: return v3; case Glyph::N: return n3;
                case Glyph::X: return x3; case Glyph::C: return c3;
            }
            break;
        case 5:
            switch (g) {
                case Glyph::Z: return z5; case Glyph::V: return v5; case Glyph::N: return n5;
                case Glyph::X: return x5; case Glyph::C: return c5;
            }
            break;
        case 7:
            switch (g) {
                case Glyph::Z: return z7; case Glyph::V: return v7; case Glyph::N: return n7;
                case Glyph::X: return x7; case Glyph::C: return c7;
            }
            break;
        case 9:
            switch (g) {
                case Glyph::Z: return z9; case Glyph::V: return v9; case Glyph::N: return n9;
                case Glyph::X: return x9; case Glyph::C: return c9;
            }
            break;
        default:
            break;
    }
    throw std::invalid_argument("no glyph fixtures for side " + std::to_string(side) +
                                " (supported sides: 3, 5, 7, 9)");
}

struct LabeledImage {
    Glyph label;
    BinaryImage image;
};

inline std::vector<LabeledImage> glyph_dataset(int side, const std::vector<Glyph>& classes) {
    if (classes.empty()) throw std::invalid_argument("glyph class list is empty");
    std::vector<LabeledImage> out;
    out.reserve(classes.size());
    for (Glyph g : classes) {
        for (const auto& seen : out)
            if (seen.label == g)
                throw std::invalid_argument(std::string("duplicate glyph class '") + glyph_letter(g) + "'");
        out.push_back(LabeledImage{g, parse_image(glyph_text(side, g))});
    }
    return out;
}

}  // namespace memspike
