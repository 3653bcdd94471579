#pragma once

#include <cstdio>
#include <string>

namespace memspike {

// Deterministic float formatting for report files. %.12g is compact and
// stable; %.17g round-trips doubles exactly and is used by the snapshot.
inline std::string fmt_double(double v, int precision = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

struct CsvWriter {
    std::string text;

    void cell(const std::string& s) {
        if (!text.empty() && text.back() != '\n') text.push_back(',');
        text += s;
    }
    void cell(long v) { cell(std::to_string(v)); }
    void cell(int v) { cell(std::to_string(v)); }
    void cell(double v) { cell(fmt_double(v)); }
    void endrow() { text.push_back('\n'); }
};

}  // namespace memspike
