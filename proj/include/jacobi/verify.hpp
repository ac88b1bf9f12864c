#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jacobi {

enum class Suite { Small, Full };

struct CriterionResult {
    int id = 0;
    bool pass = false;
    std::string title;
    std::string detail;  // counts, and what failed
    double seconds = 0;
};

// Rows "m v1 ... v8" of the published dimension table, "-" for blank cells.
const std::vector<std::string>& printed_table_rows();

// Runs the seven acceptance criteria. Small shrinks the grids of 2, 3, 5 and 6.
// progress, when given, receives one line per finished criterion.
std::vector<CriterionResult> run_acceptance(Suite suite, std::ostream* progress = nullptr);
CriterionResult run_criterion(int id, Suite suite);
std::string result_line(const CriterionResult& r);

}  // namespace jacobi
