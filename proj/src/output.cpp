#include "seqmeas/output.hpp"

#include <cstdio>
#include <fstream>

#include "seqmeas/errors.hpp"

namespace seqmeas {
namespace {

void append_state(std::string &out, const Eigen::VectorXcd &amps) {
    out += '[';
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += '[';
        out += format_number(amps(i).real());
        out += ", ";
        out += format_number(amps(i).imag());
        out += ']';
    }
    out += ']';
}

void append_label_array(std::string &out, const std::vector<std::string> &labels) {
    out += '[';
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += json_escape(labels[i]);
    }
    out += ']';
}

/// Quotes a CSV field when it contains a separator, quote, or newline.
std::string csv_field(const std::string &text) {
    if (text.find_first_of(",;\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (const char c : text) {
        if (c == '"') {
            quoted += "\"\"";
        } else {
            quoted += c;
        }
    }
    quoted += '"';
    return quoted;
}

std::string join_labels(const std::vector<std::string> &labels) {
    std::string joined;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0) {
            joined += ';';
        }
        joined += labels[i];
    }
    return joined;
}

void append_amp_header(std::string &out, int dim) {
    for (int i = 0; i < dim; ++i) {
        out += ",amp" + std::to_string(i) + "_re,amp" + std::to_string(i) + "_im";
    }
}

} // namespace

std::string format_number(double value) {
    if (value == 0.0) {
        value = 0.0; // drop the sign of negative zero
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string json_escape(const std::string &text) {
    std::string out = "\"";
    for (const unsigned char c : text) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\b':
            out += "\\b";
            break;
        case '\f':
            out += "\\f";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\r':
            out += "\\r";
            break;
        case '\t':
            out += "\\t";
            break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
    return out;
}

std::string distribution_to_json(const OutcomeDistribution &dist) {
    const DistributionMetadata &meta = dist.metadata();
    std::string out = "{\n  \"metadata\": {\n    \"device_labels\": ";
    append_label_array(out, meta.device_labels);
    out += ",\n    \"dimension\": " + std::to_string(meta.dim);
    out += ",\n    \"mode\": ";
    out += meta.mode == SampleMode::kExact ? "\"exact\"" : "\"sampled\"";
    out += ",\n    \"samples\": ";
    out += meta.mode == SampleMode::kExact ? "null" : std::to_string(meta.samples);
    out += ",\n    \"seed\": ";
    out += meta.seed ? std::to_string(*meta.seed) : "null";
    out += ",\n    \"size\": " + std::to_string(meta.device_size);
    out += "\n  },\n  \"outcomes\": [";
    const auto &outcomes = dist.outcomes();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        out += i > 0 ? ",\n    {" : "\n    {";
        out += "\n      \"final_state\": ";
        append_state(out, outcomes[i].final_state.amplitudes());
        out += ",\n      \"labels\": ";
        append_label_array(out, outcomes[i].affirmative_labels);
        out += ",\n      \"probability\": " + format_number(outcomes[i].probability);
        out += "\n    }";
    }
    out += outcomes.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string distribution_to_csv(const OutcomeDistribution &dist) {
    std::string out = "labels,probability";
    append_amp_header(out, dist.metadata().dim);
    out += '\n';
    for (const Outcome &outcome : dist.outcomes()) {
        out += csv_field(join_labels(outcome.affirmative_labels));
        out += ',' + format_number(outcome.probability);
        const Eigen::VectorXcd &amps = outcome.final_state.amplitudes();
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            out += ',' + format_number(amps(i).real());
            out += ',' + format_number(amps(i).imag());
        }
        out += '\n';
    }
    return out;
}

std::string imprecise_report_to_json(const ImpreciseReport &report) {
    std::string out = "{\n  \"metadata\": {\n    \"metric\": " + format_number(report.metric);
    out += ",\n    \"true_values\": [";
    for (std::size_t i = 0; i < report.true_values.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += format_number(report.true_values[i]);
    }
    out += "]\n  },\n  \"post_state\": ";
    append_state(out, report.post_state.amplitudes());
    out += ",\n  \"reported\": " + format_number(report.reported);
    out += ",\n  \"table\": [";
    for (std::size_t i = 0; i < report.table.size(); ++i) {
        out += i > 0 ? ",\n    {" : "\n    {";
        out += "\"probability\": " + format_number(report.table[i].second);
        out += ", \"reported\": " + format_number(report.table[i].first) + "}";
    }
    out += report.table.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string imprecise_report_to_csv(const ImpreciseReport &report) {
    std::string out = "reported,probability,selected";
    append_amp_header(out, report.post_state.dim());
    out += '\n';
    for (const auto &[value, probability] : report.table) {
        const bool selected = value == report.reported;
        out += format_number(value);
        out += ',' + format_number(probability);
        out += selected ? ",1" : ",0";
        if (selected) {
            const Eigen::VectorXcd &amps = report.post_state.amplitudes();
            for (Eigen::Index i = 0; i < amps.size(); ++i) {
                out += ',' + format_number(amps(i).real());
                out += ',' + format_number(amps(i).imag());
            }
        } else {
            for (int i = 0; i < 2 * report.post_state.dim(); ++i) {
                out += ',';
            }
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ValidationError("cannot write file '" + path + "'");
    }
    out << content;
    out.flush();
    if (!out) {
        throw ValidationError("failed while writing file '" + path + "'");
    }
}

} // namespace seqmeas
