#include "fileprint/report.hpp"

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

namespace fileprint {

namespace {

void pad_to(std::string& out, std::size_t written, std::size_t width) {
    for (std::size_t i = written; i < width; ++i) out += ' ';
}

}  // namespace

std::string format_confusion_table(const ConfusionMatrix& cm) {
    static constexpr const char* kCorner = "predicted \\ actual";
    const std::size_t n = cm.labels.size();

    std::size_t label_width = std::char_traits<char>::length(kCorner);
    for (const std::string& label : cm.labels) label_width = std::max(label_width, label.size());

    std::vector<std::size_t> col_width(n);
    for (std::size_t c = 0; c < n; ++c) {
        col_width[c] = cm.labels[c].size();
        for (std::size_t r = 0; r < n; ++r)
            col_width[c] = std::max(col_width[c], std::to_string(cm.cells[r][c]).size());
    }

    std::string out;
    out += kCorner;
    pad_to(out, std::char_traits<char>::length(kCorner), label_width);
    for (std::size_t c = 0; c < n; ++c) {
        out += "  ";
        pad_to(out, cm.labels[c].size(), col_width[c]);
        out += cm.labels[c];
    }
    out += '\n';

    for (std::size_t r = 0; r < n; ++r) {
        out += cm.labels[r];
        pad_to(out, cm.labels[r].size(), label_width);
        for (std::size_t c = 0; c < n; ++c) {
            const std::string count = std::to_string(cm.cells[r][c]);
            out += "  ";
            pad_to(out, count.size(), col_width[c]);
            out += count;
        }
        out += '\n';
    }
    return out;
}

std::string format_confusion_csv(const ConfusionMatrix& cm) {
    std::string out = "predicted";
    for (const std::string& label : cm.labels) {
        out += ',';
        out += label;
    }
    out += '\n';
    for (std::size_t r = 0; r < cm.labels.size(); ++r) {
        out += cm.labels[r];
        for (std::size_t c = 0; c < cm.labels.size(); ++c) {
            out += ',';
            out += std::to_string(cm.cells[r][c]);
        }
        out += '\n';
    }
    return out;
}

std::string format_accuracy_line(double accuracy) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "accuracy=%.4f\n", accuracy);
    return buf;
}

}  // namespace fileprint
