#pragma once

#include <map>
#include <string>
#include <vector>

#include "kloptim/cr.hpp"
#include "kloptim/gda.hpp"

namespace kloptim {

// %.17g, enough digits to round-trip a double
std::string fmt17(double v);

// CR schema:  k,f,r,grad_norm,min_eig,step_norm,mu_gap,dist
// GDA schema: t,H,phi_plus_g,x_step_norm,y_step_norm,y_gap,dist_x
// Absent values (step norms on the final record) are written as empty fields.
extern const char* const kCrCsvHeader;
extern const char* const kGdaCsvHeader;

void write_cr_csv(const std::string& path, const CRTrace& trace);
void write_gda_csv(const std::string& path, const GDATrace& trace);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // data[col][row], empty cells are NaN

    bool has_column(const std::string& name) const;
    const std::vector<double>& column(const std::string& name) const;
    std::string column_list() const;
};

CsvTable read_csv(const std::string& path);

// Gnuplot script plotting the error column against k (log y) and against
// log k; written next to the CSV, returns the script path.
std::string write_fit_plot_script(const std::string& csv_path, const std::string& column);

}  // namespace kloptim
