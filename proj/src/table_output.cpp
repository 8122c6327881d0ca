#include "interimsim/table_output.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "interimsim/scenario_file.hpp"

namespace interimsim {

namespace {

constexpr double kBiasScale = 1e3;

std::string fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    std::string s(buf);
    if (s == "-0.0" || s == "-0.00" || s == "-0.000") s.erase(0, 1);
    return s;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

/* Numeric cells in column order; `full` keeps every digit. */
std::vector<std::string> cells(const TableRow& row, bool full) {
    const MetricsReport& m = row.metrics;
    auto p = [&](double x) { return full ? format_number(x) : fixed(x, 3); };
    auto b = [&](double x) { return full ? format_number(x * kBiasScale) : fixed(x * kBiasScale, 1); };
    return {row.prior_label,
            row.interims ? "yes" : "no",
            m.pfdr ? p(*m.pfdr) : "NA",
            p(m.type1_a),
            p(m.type1_b),
            p(m.power),
            b(m.bias),
            p(m.mse),
            p(m.coverage_one_sided),
            p(m.coverage_symmetric),
            full ? format_number(m.mean_sample_size) : fixed(m.mean_sample_size, 1),
            p(m.fdr),
            m.pfdr ? p(m.pfdr_se) : "NA",
            p(m.type1_a_se),
            p(m.type1_b_se),
            p(m.power_se),
            b(m.bias_se),
            p(m.mse_se),
            p(m.coverage_one_sided_se),
            p(m.coverage_symmetric_se),
            full ? format_number(m.mean_sample_size_se) : fixed(m.mean_sample_size_se, 2),
            std::to_string(m.n_replicates)};
}

std::string csv(const std::vector<TableRow>& rows, bool full) {
    std::ostringstream out;
    const auto& cols = table_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& row : rows) {
        const auto c = cells(row, full);
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << csv_quote(c[i]);
        out << "\n";
    }
    return out.str();
}

}  // namespace

const std::vector<std::string>& table_columns() {
    static const std::vector<std::string> cols{
        "prior",       "interims",   "pfdr",        "type1_a",   "type1_b",    "power",
        "bias_x1e3",   "mse",        "coverage_one_sided",       "coverage_symmetric",
        "sample_size", "fdr",        "pfdr_se",     "type1_a_se", "type1_b_se", "power_se",
        "bias_x1e3_se", "mse_se",    "coverage_one_sided_se",    "coverage_symmetric_se",
        "sample_size_se", "replicates"};
    return cols;
}

std::string to_csv(const std::vector<TableRow>& rows) { return csv(rows, false); }

std::string to_csv_full_precision(const std::vector<TableRow>& rows) { return csv(rows, true); }

std::string to_text(const std::vector<TableRow>& rows) {
    static const std::vector<std::string> head{"prior", "interims", "pFDR", "TypeI A", "TypeI B", "power",
                                               "bias x1e3", "MSE", "cov 1s", "cov sym", "mean n"};
    std::vector<std::vector<std::string>> grid{head};
    for (const auto& r : rows) {
        auto c = cells(r, false);
        c.resize(head.size());
        grid.push_back(std::move(c));
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& line : grid)
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    std::ostringstream out;
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            const std::string pad(width[i] - line[i].size(), ' ');
            if (i == 0) out << line[i] << pad;
            else out << "  " << pad << line[i];
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace interimsim
