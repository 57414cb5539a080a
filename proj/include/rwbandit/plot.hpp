#pragma once

#include <string>
#include <vector>

namespace rwb {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

CsvTable parse_csv(const std::string& text);

// Line chart of every column against the first. Columns named `<x>_mean` with
// a sibling `<x>_std` are drawn as a mean curve inside a one-std band.
std::string render_svg(const CsvTable& table, const std::string& title, int width = 800, int height = 500);

}  // namespace rwb
