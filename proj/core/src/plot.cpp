#include "iscat/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "iscat/errors.hpp"

namespace iscat {

namespace {

constexpr int kSamples = 720;
constexpr double kCanvas = 640.0;
constexpr double kMarginFrac = 0.08;

struct StrokeStyle {
    const char* color;
    const char* dash;
};

constexpr StrokeStyle kStyles[] = {
    {"#1f77b4", ""},
    {"#d62728", "8,4"},
    {"#2ca02c", "2,3"},
    {"#9467bd", "12,3,3,3"},
    {"#ff7f0e", "5,5"},
    {"#8c564b", "1,2"},
};

} // namespace

void write_shape_svg(const std::vector<std::pair<TrigShape, std::string>>& shapes,
                     const std::string& path) {
    if (shapes.empty()) throw DomainError("write_shape_svg: need at least one shape");

    std::vector<std::vector<Vec2>> polylines;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& [shape, label] : shapes) {
        std::vector<Vec2> pts(kSamples);
        for (int i = 0; i < kSamples; ++i) {
            const double t = 2.0 * std::numbers::pi * i / kSamples;
            const double r = shape.radial().evaluate(t);
            pts[i] = shape.center() + Vec2{r * std::cos(t), r * std::sin(t)};
            x_min = std::min(x_min, pts[i].x);
            x_max = std::max(x_max, pts[i].x);
            y_min = std::min(y_min, pts[i].y);
            y_max = std::max(y_max, pts[i].y);
        }
        polylines.push_back(std::move(pts));
    }

    // equal aspect: one scale for both axes
    const double span = std::max(x_max - x_min, y_max - y_min);
    const double margin = kMarginFrac * span;
    const double x0 = 0.5 * (x_min + x_max) - 0.5 * span - margin;
    const double y0 = 0.5 * (y_min + y_max) - 0.5 * span - margin;
    const double world = span + 2.0 * margin;
    const double scale = kCanvas / world;

    const auto px = [&](double x) { return (x - x0) * scale; };
    const auto py = [&](double y) { return kCanvas - (y - y0) * scale; };

    std::ostringstream svg;
    svg.precision(6);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas
        << "\" height=\"" << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " "
        << kCanvas << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axis frame and ticks
    svg << "<rect x=\"0.5\" y=\"0.5\" width=\"" << kCanvas - 1 << "\" height=\""
        << kCanvas - 1 << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    const double tick = std::pow(10.0, std::floor(std::log10(world / 4.0)));
    for (double x = std::ceil(x0 / tick) * tick; x < x0 + world; x += tick) {
        svg << "<line x1=\"" << px(x) << "\" y1=\"" << kCanvas - 8 << "\" x2=\""
            << px(x) << "\" y2=\"" << kCanvas << "\" stroke=\"#999999\"/>\n";
        svg << "<text x=\"" << px(x) + 2 << "\" y=\"" << kCanvas - 10
            << "\" font-size=\"11\" fill=\"#666666\">" << x << "</text>\n";
    }
    for (double y = std::ceil(y0 / tick) * tick; y < y0 + world; y += tick) {
        svg << "<line x1=\"0\" y1=\"" << py(y) << "\" x2=\"8\" y2=\"" << py(y)
            << "\" stroke=\"#999999\"/>\n";
        svg << "<text x=\"10\" y=\"" << py(y) - 2
            << "\" font-size=\"11\" fill=\"#666666\">" << y << "</text>\n";
    }

    for (std::size_t s = 0; s < polylines.size(); ++s) {
        const StrokeStyle& style = kStyles[s % std::size(kStyles)];
        svg << "<polygon fill=\"none\" stroke=\"" << style.color
            << "\" stroke-width=\"1.8\"";
        if (style.dash[0] != '\0') svg << " stroke-dasharray=\"" << style.dash << "\"";
        svg << " points=\"";
        for (const Vec2& p : polylines[s]) {
            svg << px(p.x) << "," << py(p.y) << " ";
        }
        svg << "\"/>\n";
    }

    // legend
    for (std::size_t s = 0; s < shapes.size(); ++s) {
        const StrokeStyle& style = kStyles[s % std::size(kStyles)];
        const double ly = 22.0 + 18.0 * s;
        svg << "<line x1=\"18\" y1=\"" << ly << "\" x2=\"52\" y2=\"" << ly
            << "\" stroke=\"" << style.color << "\" stroke-width=\"1.8\"";
        if (style.dash[0] != '\0') svg << " stroke-dasharray=\"" << style.dash << "\"";
        svg << "/>\n";
        svg << "<text x=\"58\" y=\"" << ly + 4 << "\" font-size=\"13\">"
            << shapes[s].second << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out) throw IoError("write_shape_svg: cannot open " + path);
    out << svg.str();
}

} // namespace iscat
