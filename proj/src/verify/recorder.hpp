#pragma once

#include "occbound/verification.hpp"

#include <chrono>
#include <exception>
#include <limits>
#include <string>
#include <vector>

namespace occbound::verify::detail {

struct Outcome {
    Outcome(double v, std::string d, std::vector<std::string> w = {})
        : value(v), details(std::move(d)), warnings(std::move(w)) {}

    double value = 0.0;
    std::string details;
    std::vector<std::string> warnings;
};

/// Times each body; an exception becomes a failed check carrying what().
class Recorder {
public:
    explicit Recorder(std::vector<CheckReport>& out) : out_(out) {}

    template <class Body>
    CheckReport& run(const std::string& name, const std::string& point, CheckKind kind, double tolerance,
                     Body&& body) {
        const auto start = std::chrono::steady_clock::now();
        CheckReport rep;
        try {
            Outcome o = body();
            rep = make_check(name, point, kind, o.value, tolerance, std::move(o.details));
            rep.warnings = std::move(o.warnings);
        } catch (const std::exception& e) {
            rep = make_check(name, point, kind, std::numeric_limits<double>::quiet_NaN(), tolerance,
                             std::string("exception: ") + e.what());
            rep.passed = false;
        }
        rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out_.push_back(std::move(rep));
        return out_.back();
    }

private:
    std::vector<CheckReport>& out_;
};

}  // namespace occbound::verify::detail
