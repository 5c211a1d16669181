#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "gapcount/errors.hpp"

namespace gapcount {

// Round-trip exact decimal form.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
   public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : f_(path) {
        if (!f_) throw ConfigError("output: cannot open " + path);
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) f_ << ',';
            f_ << cells[i];
        }
        f_ << '\n';
    }

   private:
    std::ofstream f_;
};

}  // namespace gapcount
