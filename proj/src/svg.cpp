#include "seqmeas/svg.hpp"

#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

#include "seqmeas/errors.hpp"
#include "seqmeas/output.hpp"

namespace seqmeas {
namespace {

constexpr int kCanvas = 640;
constexpr double kRadius = 280.0; // unit length in pixels
constexpr double kCenter = kCanvas / 2.0;
constexpr double kFinalScale = 0.85; // final-state arrows drawn shorter

const char *const kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string &text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

/// Extracts plane coordinates from a canonicalized state, rejecting anything
/// that is not real and two-dimensional.
std::pair<double, double> plane_coords(const StateVector &state, const std::string &what) {
    if (state.dim() != 2) {
        throw ValidationError("SVG diagrams require two-dimensional states; " + what + " has dimension " +
                              std::to_string(state.dim()));
    }
    const StateVector canon = phase_canonical(state);
    const Complex a0 = canon.amplitude(0);
    const Complex a1 = canon.amplitude(1);
    if (std::abs(a0.imag()) > 1e-9 || std::abs(a1.imag()) > 1e-9) {
        throw ValidationError("SVG diagrams require real amplitudes; " + what +
                              " has a complex amplitude");
    }
    return {a0.real(), a1.real()};
}

/// Draws an arrow from the origin towards (x, y) in state coordinates, with a
/// triangular head and an optional annotation just past the tip.
void append_arrow(std::string &out, double x, double y, double scale, const char *stroke,
                  double width, bool dashed, const std::string &annotation) {
    const double tip_x = kCenter + kRadius * scale * x;
    const double tip_y = kCenter - kRadius * scale * y;
    const double len = std::hypot(tip_x - kCenter, tip_y - kCenter);
    const double ux = len > 0 ? (tip_x - kCenter) / len : 1.0;
    const double uy = len > 0 ? (tip_y - kCenter) / len : 0.0;
    const double head = 12.0;
    const double half = 4.5;
    const double base_x = tip_x - head * ux;
    const double base_y = tip_y - head * uy;

    out += "    <line x1=\"" + fmt(kCenter) + "\" y1=\"" + fmt(kCenter) + "\" x2=\"" +
           fmt(base_x) + "\" y2=\"" + fmt(base_y) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + fmt(width) + "\"";
    if (dashed) {
        out += " stroke-dasharray=\"6 4\"";
    }
    out += "/>\n";
    out += "    <polygon points=\"" + fmt(tip_x) + "," + fmt(tip_y) + " " +
           fmt(base_x - half * uy) + "," + fmt(base_y + half * ux) + " " +
           fmt(base_x + half * uy) + "," + fmt(base_y - half * ux) + "\" fill=\"" + stroke +
           "\"/>\n";
    if (!annotation.empty()) {
        const double text_x = kCenter + (kRadius * scale + 18.0) * x;
        const double text_y = kCenter - (kRadius * scale + 18.0) * y;
        out += "    <text x=\"" + fmt(text_x) + "\" y=\"" + fmt(text_y + 5.0) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" fill=\"" +
               stroke + "\">" + xml_escape(annotation) + "</text>\n";
    }
}

std::string percent(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * p);
    return buf;
}

} // namespace

std::string render_scenario_svg(const std::string &title, const StateVector &initial,
                                const MeasurementDevice &device,
                                const OutcomeDistribution &dist) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(kCanvas) + "\" height=\"" + std::to_string(kCanvas) + "\" viewBox=\"0 0 " +
           std::to_string(kCanvas) + " " + std::to_string(kCanvas) + "\">\n";
    out += "  <title>" + xml_escape(title) + "</title>\n";
    out += "  <rect class=\"background\" width=\"" + std::to_string(kCanvas) + "\" height=\"" +
           std::to_string(kCanvas) + "\" fill=\"#ffffff\"/>\n";

    // Unit circle and axes.
    out += "  <g class=\"frame\">\n";
    out += "    <circle cx=\"" + fmt(kCenter) + "\" cy=\"" + fmt(kCenter) + "\" r=\"" +
           fmt(kRadius) + "\" fill=\"none\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out += "    <line x1=\"" + fmt(kCenter - kRadius - 16) + "\" y1=\"" + fmt(kCenter) + "\" x2=\"" +
           fmt(kCenter + kRadius + 16) + "\" y2=\"" + fmt(kCenter) +
           "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    out += "    <line x1=\"" + fmt(kCenter) + "\" y1=\"" + fmt(kCenter - kRadius - 16) + "\" x2=\"" +
           fmt(kCenter) + "\" y2=\"" + fmt(kCenter + kRadius + 16) +
           "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    out += "  </g>\n";

    // Distinct final states, folded over phase classes in outcome order.
    struct FinalEntry {
        StateVector state;
        double probability;
    };
    std::vector<FinalEntry> finals;
    for (const Outcome &outcome : dist.outcomes()) {
        bool merged = false;
        for (FinalEntry &entry : finals) {
            if (phase_equal(entry.state, outcome.final_state)) {
                entry.probability += outcome.probability;
                merged = true;
                break;
            }
        }
        if (!merged) {
            finals.push_back({outcome.final_state, outcome.probability});
        }
    }

    // Final states first so device arrows stay visible on top of them.
    for (const FinalEntry &entry : finals) {
        const auto [x, y] = plane_coords(entry.state, "a final state");
        out += "  <g class=\"final-state\">\n";
        append_arrow(out, x, y, kFinalScale, "#888888", 1.6, true, percent(entry.probability));
        out += "  </g>\n";
    }

    for (int i = 0; i < device.size(); ++i) {
        const auto &entry = device.state(i);
        const auto [x, y] = plane_coords(entry.state, "measurement state '" + entry.label + "'");
        out += "  <g class=\"device-state\">\n";
        append_arrow(out, x, y, 1.0, kPalette[static_cast<std::size_t>(i) % kPaletteSize], 2.2,
                     false, entry.label);
        out += "  </g>\n";
    }

    {
        const auto [x, y] = plane_coords(initial, "the initial state");
        out += "  <g class=\"initial-state\">\n";
        append_arrow(out, x, y, 1.0, "#000000", 3.0, false, "psi");
        out += "  </g>\n";
    }

    out += "</svg>\n";
    return out;
}

} // namespace seqmeas
