#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace froblift {

// Deterministic pass/fail report used by all validators.
struct Report {
    struct Check {
        std::string name;
        bool pass = true;
        std::string detail;
    };

    std::vector<Check> checks;

    void add(std::string name, bool pass, std::string detail = "") {
        checks.push_back({std::move(name), pass, std::move(detail)});
    }

    bool ok() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    const Check* first_failure() const {
        for (const auto& c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }

    void merge(const Report& o) {
        checks.insert(checks.end(), o.checks.begin(), o.checks.end());
    }

    void print(std::ostream& out) const {
        for (const auto& c : checks) {
            out << (c.pass ? "PASS " : "FAIL ") << c.name;
            if (!c.detail.empty()) out << ": " << c.detail;
            out << "\n";
        }
    }
};

} // namespace froblift
