#pragma once

// Itemized pass/fail report shared by the design and endogenous verifiers.

#include <sstream>
#include <string>
#include <vector>

namespace netcontest {

struct CheckItem {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckItem> checks;

    bool ok() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    void add(std::string name, bool passed, std::string detail = "") {
        checks.push_back({std::move(name), passed, std::move(detail)});
    }

    std::string to_string() const {
        std::ostringstream out;
        for (const auto& c : checks) {
            out << (c.passed ? "pass" : "FAIL") << "  " << c.name;
            if (!c.detail.empty()) out << "  (" << c.detail << ")";
            out << "\n";
        }
        return out.str();
    }
};

}  // namespace netcontest
