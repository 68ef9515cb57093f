#include "chaincalc/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <json.hpp>
#include <sstream>

namespace chaincalc {

using nlohmann::json;

bool Report::all_pass() const { return failures() == 0; }

std::size_t Report::failures() const {
    std::size_t n = 0;
    for (auto& c : cases)
        if (!c.pass) ++n;
    return n;
}

void Report::add(const std::string& id, const std::string& params, double expected,
                 double computed, double tol) {
    double err = std::abs(expected - computed);
    cases.push_back({id, params, expected, computed, err, tol, err <= tol});
}

void Report::add_residual(const std::string& id, const std::string& params, double residual,
                          double tol) {
    add(id, params, 0.0, residual, tol);
}

void Report::add_upper(const std::string& id, const std::string& params, double computed,
                       double limit) {
    double excess = std::max(0.0, computed - limit);
    cases.push_back({id, params, limit, computed, excess, 0.0, excess <= 0.0});
}

std::string Report::to_json(int indent) const {
    json j;
    j["schema"] = schema;
    j["suite"] = suite;
    j["seed"] = seed;
    j["config"] = config;
    j["wall_ms"] = wall_ms;
    j["timestamp"] = timestamp;
    j["pass"] = all_pass();
    j["failures"] = failures();
    auto sorted = cases;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
    j["cases"] = json::array();
    for (auto& c : sorted) {
        j["cases"].push_back({{"id", c.id},
                              {"params", c.params},
                              {"expected", c.expected},
                              {"computed", c.computed},
                              {"abs_err", c.abs_err},
                              {"tol", c.tol},
                              {"pass", c.pass}});
    }
    return j.dump(indent);
}

std::string Report::to_csv() const {
    std::ostringstream os;
    os << "id,params,expected,computed,abs_err,tol,pass\n";
    auto sorted = cases;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
    os.precision(17);
    for (auto& c : sorted)
        os << c.id << ",\"" << c.params << "\"," << c.expected << "," << c.computed << ","
           << c.abs_err << "," << c.tol << "," << (c.pass ? 1 : 0) << "\n";
    return os.str();
}

std::string ConvergeTable::to_csv() const {
    std::ostringstream os;
    os << "j,lhs,rhs,err,ratio\n";
    os.precision(17);
    for (auto& r : rows)
        os << r.level << "," << r.lhs << "," << r.rhs << "," << r.err << "," << r.ratio << "\n";
    return os.str();
}

std::string ConvergeTable::to_json(int indent) const {
    json j;
    j["schema"] = 1;
    j["theorem"] = theorem;
    j["rows"] = json::array();
    for (auto& r : rows)
        j["rows"].push_back(
            {{"j", r.level}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"err", r.err}, {"ratio", r.ratio}});
    return j.dump(indent);
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

} // namespace chaincalc
