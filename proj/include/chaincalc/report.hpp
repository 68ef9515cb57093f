#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace chaincalc {

/// One verification case of a suite run.
struct CaseResult {
    std::string id;
    std::string params;
    double expected = 0;
    double computed = 0;
    double abs_err = 0;
    double tol = 0;
    bool pass = false;
};

/// Structured verification record emitted by the CLI.  Serialization sorts
/// cases by id and omits nothing but the timestamp from determinism checks.
struct Report {
    int schema = 1;
    std::string suite;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> config;
    std::vector<CaseResult> cases;
    double wall_ms = 0;
    std::string timestamp;

    bool all_pass() const;
    std::size_t failures() const;
    void add(const std::string& id, const std::string& params, double expected, double computed,
             double tol);
    /// Record a residual-style case (expected 0).
    void add_residual(const std::string& id, const std::string& params, double residual,
                      double tol);
    /// One-sided case: passes iff computed <= limit.
    void add_upper(const std::string& id, const std::string& params, double computed,
                   double limit);

    std::string to_json(int indent = 2) const;
    std::string to_csv() const;
};

/// Convergence table row for the `converge` command.
struct ConvergeRow {
    int level = 0;
    double lhs = 0, rhs = 0, err = 0, ratio = 0;
};

struct ConvergeTable {
    std::string theorem;
    std::vector<ConvergeRow> rows;

    std::string to_csv() const;
    std::string to_json(int indent = 2) const;
};

std::string iso_timestamp();

} // namespace chaincalc
