#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace catspec::cli {

/// Shortest decimal text that reads back as the same double.
std::string num(double v);

/// Opens `path` for binary writing (so line endings stay LF) and throws on failure.
class OutputFile {
public:
    explicit OutputFile(const std::filesystem::path& path);
    ~OutputFile();
    OutputFile(const OutputFile&) = delete;
    OutputFile& operator=(const OutputFile&) = delete;

    std::ostream& stream();
    void close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> err; // empty: none
    bool line = false;       // polyline instead of markers
    std::string color = "#1f77b4";
};

struct Plot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<PlotSeries> series;
};

std::string render_svg(const Plot& plot);
void write_svg(const std::filesystem::path& path, const Plot& plot);

} // namespace catspec::cli
