#include "occbound/verification.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace occbound::verify {

namespace {

const char* kind_name(CheckKind k) {
    switch (k) {
        case CheckKind::residual: return "residual";
        case CheckKind::margin: return "margin";
        case CheckKind::exact: return "exact";
    }
    return "?";
}

}  // namespace

CheckReport make_check(std::string name, std::string point, CheckKind kind, double value, double tolerance,
                       std::string details) {
    CheckReport r;
    r.name = std::move(name);
    r.point = std::move(point);
    r.kind = kind;
    r.value = value;
    r.tolerance = tolerance;
    r.details = std::move(details);
    switch (kind) {
        case CheckKind::residual: r.passed = value <= tolerance; break;
        case CheckKind::margin: r.passed = value >= 0.0; break;
        case CheckKind::exact: r.passed = value == 0.0; break;
    }
    return r;
}

bool all_passed(const std::vector<CheckReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
}

std::string to_json_line(const CheckReport& r) {
    nlohmann::ordered_json j;
    j["check"] = r.name;
    j["point"] = r.point;
    j["kind"] = kind_name(r.kind);
    j["value"] = r.value;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    j["runtime_s"] = r.runtime_s;
    if (!r.details.empty()) j["details"] = r.details;
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j.dump();
}

std::string to_json_lines(const std::vector<CheckReport>& reports) {
    std::string out;
    for (const auto& r : reports) out += to_json_line(r) + "\n";
    return out;
}

std::string summary_table(const std::vector<CheckReport>& reports) {
    struct Tally {
        std::size_t passed = 0, failed = 0;
        double worst = 0.0;
        double runtime = 0.0;
    };
    std::vector<std::string> order;
    std::map<std::string, Tally> tally;
    for (const auto& r : reports) {
        if (!tally.count(r.name)) order.push_back(r.name);
        auto& t = tally[r.name];
        (r.passed ? t.passed : t.failed)++;
        t.runtime += r.runtime_s;
        const double badness = r.kind == CheckKind::margin ? -r.value : r.value;
        if (t.passed + t.failed == 1 || badness > t.worst) t.worst = badness;
    }
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-26s %6s %6s %14s %10s\n", "check", "pass", "fail", "worst", "time[s]");
    os << line;
    std::size_t total_fail = 0;
    for (const auto& name : order) {
        const auto& t = tally[name];
        total_fail += t.failed;
        std::snprintf(line, sizeof line, "%-26s %6zu %6zu %14.6g %10.3f\n", name.c_str(), t.passed, t.failed, t.worst,
                      t.runtime);
        os << line;
    }
    os << (total_fail == 0 ? "ALL PASSED" : "FAILURES: " + std::to_string(total_fail)) << " (" << reports.size()
       << " checks)\n";
    return os.str();
}

}  // namespace occbound::verify
