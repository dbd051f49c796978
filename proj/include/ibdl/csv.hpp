#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ibdl/errors.hpp"

namespace ibdl {

/// Floats printed with 17 significant digits so CSV fixtures round-trip.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvWriter {
    std::string text;

    void header(const std::string& line) { text += line + "\n"; }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) text += ',';
            text += cells[i];
        }
        text += '\n';
    }
    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("CsvWriter: cannot write " + path);
        out << text;
    }
};

}  // namespace ibdl
