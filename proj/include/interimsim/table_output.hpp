#pragma once

#include <string>
#include <vector>

#include "interimsim/metrics.hpp"

namespace interimsim {

struct TableRow {
    std::string prior_label;
    bool interims = false;
    MetricsReport metrics;
};

/* Standard column order, then FDR and Monte Carlo standard errors. Bias is scaled by 1e3. */
const std::vector<std::string>& table_columns();

/* Three decimals (bias one decimal after scaling); pFDR "NA" when absent. */
std::string to_csv(const std::vector<TableRow>& rows);
/* Same columns at full precision. */
std::string to_csv_full_precision(const std::vector<TableRow>& rows);
std::string to_text(const std::vector<TableRow>& rows);

}  // namespace interimsim
