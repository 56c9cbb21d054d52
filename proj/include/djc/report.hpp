#pragma once

#include <string>
#include <vector>

namespace djc {

// One verified condition: label, outcome, and an exact witness expression
// when it failed.
struct CheckItem {
    std::string label;
    bool pass = true;
    std::string witness;
};

struct Report {
    std::string title;
    std::vector<CheckItem> items;

    bool pass() const {
        for (const auto& i : items)
            if (!i.pass) return false;
        return true;
    }

    void require(const std::string& label, bool ok, const std::string& witness = "") {
        items.push_back({label, ok, ok ? "" : witness});
    }

    void merge(const Report& other) {
        for (const auto& i : other.items)
            items.push_back({other.title.empty() ? i.label : other.title + ": " + i.label, i.pass, i.witness});
    }

    std::vector<std::string> witnesses() const {
        std::vector<std::string> out;
        for (const auto& i : items)
            if (!i.pass) out.push_back(i.label + (i.witness.empty() ? "" : " = " + i.witness));
        return out;
    }
};

} // namespace djc
