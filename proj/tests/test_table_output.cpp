#include <doctest.h>

#include <sstream>

#include "interimsim/table_output.hpp"

using namespace interimsim;

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

TableRow sample_row() {
    TableRow r;
    r.prior_label = "Beta(3, 3)";
    r.interims = true;
    r.metrics.pfdr = 0.09512;
    r.metrics.type1_a = 0.0413;
    r.metrics.type1_b = 0.0649;
    r.metrics.power = 0.8472;
    r.metrics.bias = -0.00031;
    r.metrics.mse = 0.0031;
    r.metrics.coverage_one_sided = 0.9514;
    r.metrics.coverage_symmetric = 0.9486;
    r.metrics.mean_sample_size = 84.66;
    r.metrics.n_replicates = 50000;
    return r;
}

}  // namespace

TEST_CASE("columns follow the results-table order") {
    const auto& c = table_columns();
    const std::vector<std::string> head{"prior", "interims", "pfdr", "type1_a", "type1_b", "power", "bias_x1e3",
                                        "mse", "coverage_one_sided", "coverage_symmetric", "sample_size"};
    REQUIRE(c.size() > head.size());
    CHECK(std::equal(head.begin(), head.end(), c.begin()));
    CHECK(c.back() == "replicates");
}

TEST_CASE("csv formatting") {
    const std::string csv = to_csv({sample_row()});
    std::stringstream ss(csv);
    std::string header, line;
    std::getline(ss, header);
    std::getline(ss, line);
    CHECK(split(header).size() == table_columns().size());
    CHECK(line.rfind("\"Beta(3, 3)\",yes,0.095,0.041,0.065,0.847,-0.3,0.003,0.951,0.949,84.7,", 0) == 0);
    CHECK(line.substr(line.rfind(',') + 1) == "50000");
}

TEST_CASE("absent pFDR prints NA and full precision keeps digits") {
    TableRow r = sample_row();
    r.metrics.pfdr.reset();
    CHECK(to_csv({r}).find(",yes,NA,") != std::string::npos);
    CHECK(to_csv_full_precision({sample_row()}).find("0.09512") != std::string::npos);
    const std::string text = to_text({sample_row(), r});
    CHECK(text.find("Beta(3, 3)") != std::string::npos);
    CHECK(text.find("NA") != std::string::npos);
}
