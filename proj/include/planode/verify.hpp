#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "planode/bounds.hpp"

namespace planode {

struct VerifyOptions {
    std::uint64_t seed = 0;
    bool parallel = true;
};

/// Names of the individual verification suites ("all" is accepted by
/// run_verify_suite but not listed).
const std::vector<std::string>& verify_suite_names();

/// Runs one named suite (or "all") and returns its reports sorted by name.
/// Deterministic for a fixed seed regardless of execution order.
/// ParameterOutOfRange for an unknown suite name.
std::vector<BoundReport> run_verify_suite(const std::string& suite,
                                          const VerifyOptions& opt = {});

bool all_hold(const std::vector<BoundReport>& reports);

/// JSON report: array of {name, holds, worst_margin, worst_t,
/// samples_checked}, in input order.
void write_reports_json(std::ostream& out,
                        const std::vector<BoundReport>& reports);

}  // namespace planode
