#include "kloptim/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "kloptim/errors.hpp"

namespace kloptim {

const char* const kCrCsvHeader = "k,f,r,grad_norm,min_eig,step_norm,mu_gap,dist";
const char* const kGdaCsvHeader = "t,H,phi_plus_g,x_step_norm,y_step_norm,y_gap,dist_x";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {
std::string opt17(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}
}  // namespace

void write_cr_csv(const std::string& path, const CRTrace& trace) {
    auto out = open_out(path);
    out << kCrCsvHeader << "\n";
    for (const auto& rec : trace.records) {
        out << rec.k << ',' << fmt17(rec.f) << ',' << fmt17(rec.r) << ','
            << fmt17(rec.grad_norm) << ',' << fmt17(rec.min_eig) << ','
            << opt17(rec.step_norm) << ',' << fmt17(rec.mu_gap) << ',' << fmt17(rec.dist)
            << "\n";
    }
}

void write_gda_csv(const std::string& path, const GDATrace& trace) {
    auto out = open_out(path);
    out << kGdaCsvHeader << "\n";
    for (const auto& rec : trace.records) {
        out << rec.t << ',' << fmt17(rec.lyapunov) << ',' << fmt17(rec.phi_plus_g) << ','
            << opt17(rec.x_step_norm) << ',' << opt17(rec.y_step_norm) << ','
            << fmt17(rec.y_gap) << ',' << fmt17(rec.dist_x) << "\n";
    }
}

bool CsvTable::has_column(const std::string& name) const {
    for (const auto& c : columns)
        if (c == name) return true;
    return false;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return data[i];
    throw InputError("csv: no column named '" + name + "' (available: " + column_list() + ")");
}

std::string CsvTable::column_list() const {
    std::string s;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) s += ", ";
        s += columns[i];
    }
    return s;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);

    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw InputError("csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.columns.push_back(cell);
    t.data.assign(t.columns.size(), {});

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::stringstream ls(line);
        std::size_t col = 0;
        while (std::getline(ls, cell, ',')) {
            if (col >= t.columns.size())
                throw InputError("csv: row " + std::to_string(row) + " has too many fields");
            t.data[col].push_back(cell.empty()
                                      ? std::numeric_limits<double>::quiet_NaN()
                                      : std::stod(cell));
            ++col;
        }
        while (col < t.columns.size()) {
            t.data[col].push_back(std::numeric_limits<double>::quiet_NaN());
            ++col;
        }
    }
    return t;
}

std::string write_fit_plot_script(const std::string& csv_path, const std::string& column) {
    const CsvTable t = read_csv(csv_path);
    if (!t.has_column(column))
        throw InputError("csv: no column named '" + column + "' (available: " +
                         t.column_list() + ")");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == column) idx = i + 1;  // gnuplot columns are 1-based

    const std::string script = csv_path + "." + column + ".fitplot.gp";
    auto out = open_out(script);
    out << "# gnuplot script: error decay of column '" << column << "' from " << csv_path
        << "\n"
        << "set datafile separator ','\n"
        << "set key left bottom\n"
        << "set logscale y\n"
        << "set xlabel 'k'\n"
        << "set ylabel '" << column << "'\n"
        << "plot '" << csv_path << "' every ::1 using 1:" << idx << " with linespoints title '"
        << column << " vs k'\n"
        << "pause -1 'log-linear view; press enter for log-log'\n"
        << "set logscale x\n"
        << "set xlabel 'k (log)'\n"
        << "plot '" << csv_path << "' every ::1 using ($1+1):" << idx
        << " with linespoints title '" << column << " vs log k'\n"
        << "pause -1\n";
    return script;
}

}  // namespace kloptim
