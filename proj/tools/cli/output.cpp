#include "output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace catspec::cli {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

struct OutputFile::Impl {
    std::filesystem::path path;
    std::ofstream os;
};

OutputFile::OutputFile(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    impl_->os.open(path, std::ios::binary | std::ios::trunc);
    if (!impl_->os) throw std::runtime_error("cannot write " + path.string());
}

OutputFile::~OutputFile() = default;

std::ostream& OutputFile::stream() { return impl_->os; }

void OutputFile::close() {
    impl_->os.close();
    if (!impl_->os) throw std::runtime_error("error writing " + impl_->path.string());
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string tick(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

} // namespace

std::string render_svg(const Plot& plot) {
    constexpr double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 55;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double e = s.err.empty() ? 0.0 : s.err[i];
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i] - e);
            ymax = std::max(ymax, s.y[i] + e);
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
    auto py = [&](double y) { return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
       << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
       << height - bottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
       << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
           << tick(xv) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
           << tick(yv) << "</text>\n";
    }
    os << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(plot.xlabel) << "</text>\n";
    os << "<text transform=\"translate(16," << (top + height - bottom) / 2
       << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(plot.ylabel) << "</text>\n";

    double legend_y = top + 6;
    for (const auto& s : plot.series) {
        if (s.line) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
            os << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!s.err.empty())
                    os << "<line x1=\"" << px(s.x[i]) << "\" y1=\"" << py(s.y[i] - s.err[i]) << "\" x2=\"" << px(s.x[i])
                       << "\" y2=\"" << py(s.y[i] + s.err[i]) << "\" stroke=\"" << s.color << "\"/>\n";
                os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"2.5\" fill=\"" << s.color
                   << "\"/>\n";
            }
        }
        os << "<text x=\"" << width - right - 4 << "\" y=\"" << legend_y << "\" text-anchor=\"end\" font-size=\"11\" fill=\""
           << s.color << "\">" << escape(s.label) << "</text>\n";
        legend_y += 14;
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const std::filesystem::path& path, const Plot& plot) {
    OutputFile f(path);
    f.stream() << render_svg(plot);
    f.close();
}

} // namespace catspec::cli
