#include "doctest.h"
#include "hypflow/report.hpp"

using namespace hypflow;

TEST_CASE("numbers carry 17 significant digits") {
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(2.0) == "2");
}

TEST_CASE("empty flow gives a header-only CSV") {
    CHECK(flow_csv(FlowReport{}).str() == "parameter,value,delta_to_prev\n");
}

TEST_CASE("flow CSV leaves the first delta empty") {
    const auto r = make_flow_report("s", {{0.0, 1.0}, {0.5, 1.5}});
    CHECK(flow_csv(r).str() == "parameter,value,delta_to_prev\n0,1,\n0.5,1.5,0.5\n");
}

TEST_CASE("convergence and region headers") {
    const std::string c = convergence_csv(ConvergenceTable{}).str();
    CHECK(c == "n,k,discrete,continuous,abs_error\n");
    const std::string g = region_csv({}).str();
    CHECK(g ==
          "z_re,z_im,global_holds,infinitesimal_holds,infinitesimal_margin_min,sup_ratio,witness_b_re,witness_b_im\n");
}

TEST_CASE("unwritable paths raise IoError") {
    CHECK_THROWS_AS(write_file("/nonexistent-dir/xyz/file.csv", "x"), IoError);
}
