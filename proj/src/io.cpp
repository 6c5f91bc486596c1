#include "mixtest/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixtest/errors.hpp"

namespace mixtest {

namespace {

// Splits one RFC-4180 line. Quoted fields may contain commas and doubled
// quotes; no embedded newlines (rows are records here).
std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            if (!field.empty()) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": quote inside unquoted field");
            }
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // tolerate CRLF
        } else {
            field += c;
        }
    }
    if (quoted) {
        throw ParseError("line " + std::to_string(line_no) + ": unterminated quote");
    }
    fields.push_back(std::move(field));
    return fields;
}

double parse_real(const std::string& text, int line_no, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                         " '" + text + "'");
    }
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

PairedSample parse_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw SchemaError(path + ": empty file");
    const auto header = split_csv_line(line, 1);
    if (header.size() < 3 || header[0] != "group" || header[1] != "value") {
        throw SchemaError(path + ": header must be group,value,w1,...,wM");
    }
    const int m = static_cast<int>(header.size()) - 2;
    for (int l = 0; l < m; ++l) {
        if (header[2 + l] != "w" + std::to_string(l + 1)) {
            throw SchemaError(path + ": weight columns must be w1,...,wM in order");
        }
    }

    std::vector<double> y, z;
    std::vector<std::vector<double>> y_weights, z_weights;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line, line_no);
        if (static_cast<int>(fields.size()) != m + 2) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(m + 2) + " fields, got " +
                             std::to_string(fields.size()));
        }
        std::vector<double> w(m);
        double w_sum = 0.0;
        for (int l = 0; l < m; ++l) {
            w[l] = parse_real(fields[2 + l], line_no, "weight");
            if (w[l] < 0.0) {
                throw WeightError("line " + std::to_string(line_no) +
                                  ": negative weight");
            }
            w_sum += w[l];
        }
        if (std::abs(w_sum - 1.0) > 1e-9) {
            throw WeightError("line " + std::to_string(line_no) +
                              ": weights sum to " + format_real(w_sum));
        }
        // Rescale only when the drift exceeds the strict matrix tolerance, so
        // already-valid rows round-trip bit-identically.
        if (std::abs(w_sum - 1.0) > 1e-12) {
            for (double& v : w) v /= w_sum;
        }
        const double value = parse_real(fields[1], line_no, "value");
        if (fields[0] == "Y" || fields[0] == "y") {
            y.push_back(value);
            y_weights.push_back(std::move(w));
        } else if (fields[0] == "Z" || fields[0] == "z") {
            z.push_back(value);
            z_weights.push_back(std::move(w));
        } else {
            throw ParseError("line " + std::to_string(line_no) +
                             ": group must be Y or Z, got '" + fields[0] + "'");
        }
    }

    if (y.size() != z.size()) {
        throw SchemaError(path + ": group sizes differ (Y=" +
                          std::to_string(y.size()) + ", Z=" +
                          std::to_string(z.size()) + ")");
    }
    if (y.empty()) throw SchemaError(path + ": no data rows");

    const int n = static_cast<int>(y.size());
    Eigen::MatrixXd omega(m, n), sigma(m, n);
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < m; ++l) {
            omega(l, i) = y_weights[i][l];
            sigma(l, i) = z_weights[i][l];
        }
    }
    return PairedSample(std::move(y), std::move(z), WeightMatrix(std::move(omega)),
                        WeightMatrix(std::move(sigma)));
}

void write_sample_csv(const std::string& path, const PairedSample& sample) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);

    const int m = sample.components();
    out << "group,value";
    for (int l = 0; l < m; ++l) out << ",w" << (l + 1);
    out << "\n";
    for (int i = 0; i < sample.size(); ++i) {
        out << "Y," << format_real(sample.y[i]);
        for (int l = 0; l < m; ++l) out << ',' << format_real(sample.omega.weight(l, i));
        out << "\n";
    }
    for (int i = 0; i < sample.size(); ++i) {
        out << "Z," << format_real(sample.z[i]);
        for (int l = 0; l < m; ++l) out << ',' << format_real(sample.sigma.weight(l, i));
        out << "\n";
    }
}

void write_histogram_csv(const std::string& path, const PairedSample& sample,
                         int bins) {
    if (bins < 1) throw InvalidParam("write_histogram_csv: bins must be positive");
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);

    double lo = sample.y[0], hi = sample.y[0];
    for (double v : sample.y) { lo = std::min(lo, v); hi = std::max(hi, v); }
    for (double v : sample.z) { lo = std::min(lo, v); hi = std::max(hi, v); }
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / bins;

    auto bin_of = [&](double v) {
        return std::min(bins - 1, static_cast<int>((v - lo) / width));
    };
    std::vector<long> y_counts(bins, 0), z_counts(bins, 0);
    for (double v : sample.y) ++y_counts[bin_of(v)];
    for (double v : sample.z) ++z_counts[bin_of(v)];

    out << "group,bin_lo,bin_hi,count\n";
    for (int b = 0; b < bins; ++b) {
        out << "Y," << format_real(lo + b * width) << ','
            << format_real(lo + (b + 1) * width) << ',' << y_counts[b] << "\n";
    }
    for (int b = 0; b < bins; ++b) {
        out << "Z," << format_real(lo + b * width) << ','
            << format_real(lo + (b + 1) * width) << ',' << z_counts[b] << "\n";
    }
}

void write_reports_csv(const std::string& path,
                       const std::vector<ExperimentReport>& reports) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);

    out << "n,K,t_n,power,gamma_opt,t_opt,type1_rate,method,reps,seed,wall_time\n";
    for (const auto& r : reports) {
        out << r.n << ',' << format_real(r.k) << ',' << format_real(r.t_n) << ','
            << format_real(r.power) << ',' << format_real(r.gamma_opt) << ','
            << format_real(r.t_opt) << ',' << format_real(r.type1_rate) << ','
            << r.method << ',' << r.reps << ',' << r.seed << ','
            << format_real(r.wall_time) << "\n";
    }
}

nlohmann::json outcome_to_json(const TestOutcome& outcome) {
    return nlohmann::json{
        {"t_j", outcome.t_j},
        {"level", outcome.level},
        {"threshold", outcome.threshold},
        {"reject", outcome.reject},
        {"k", outcome.k},
        {"diagnostics", outcome.diagnostics},
    };
}

}  // namespace mixtest
