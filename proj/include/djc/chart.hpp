#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "djc/error.hpp"
#include "djc/rational.hpp"

namespace djc {

// An ordered list of distinct coordinate names. Charts are values; copies are
// cheap (shared storage) and equality compares the name lists.
class Chart {
public:
    Chart() : names_(std::make_shared<const std::vector<std::string>>()) {}

    explicit Chart(std::vector<std::string> names)
        : names_(std::make_shared<const std::vector<std::string>>(std::move(names))) {
        if (names_->empty()) throw Error("BadChart", "chart needs at least one coordinate");
        std::set<std::string> seen;
        for (const auto& n : *names_)
            if (!seen.insert(n).second) throw SyntaxError("duplicate coordinate '" + n + "'");
    }

    int dim() const { return static_cast<int>(names_->size()); }
    const std::vector<std::string>& names() const { return *names_; }
    const std::string& name(int i) const { return (*names_)[static_cast<size_t>(i)]; }

    bool has(const std::string& coord) const {
        return std::find(names_->begin(), names_->end(), coord) != names_->end();
    }

    int index_of(const std::string& coord) const {
        auto it = std::find(names_->begin(), names_->end(), coord);
        if (it == names_->end()) throw UnknownCoordinate("'" + coord + "' is not a chart coordinate");
        return static_cast<int>(it - names_->begin());
    }

    // Chart with one extra trailing coordinate (used by homogenization).
    Chart extended(const std::string& coord) const {
        if (has(coord)) throw CoordinateClash("coordinate '" + coord + "' already present");
        auto v = *names_;
        v.push_back(coord);
        return Chart(v);
    }

    // Chart with the given coordinates removed (used by restriction).
    Chart without(const std::vector<std::string>& coords) const {
        std::vector<std::string> v;
        for (const auto& n : *names_)
            if (std::find(coords.begin(), coords.end(), n) == coords.end()) v.push_back(n);
        return Chart(v);
    }

    // Concatenated product chart; name sets must be disjoint.
    static Chart product(const Chart& a, const Chart& b) {
        auto v = a.names();
        for (const auto& n : b.names()) {
            if (a.has(n)) throw CoordinateClash("product chart duplicates coordinate '" + n + "'");
            v.push_back(n);
        }
        return Chart(v);
    }

    friend bool operator==(const Chart& a, const Chart& b) {
        return a.names_ == b.names_ || *a.names_ == *b.names_;
    }
    friend bool operator!=(const Chart& a, const Chart& b) { return !(a == b); }

private:
    std::shared_ptr<const std::vector<std::string>> names_;
};

inline void require_same_chart(const Chart& a, const Chart& b) {
    if (a != b)
        throw ChartMismatch("operands live on different charts");
}

// Exact rational value for every coordinate of a chart.
struct SamplePoint {
    Chart chart;
    std::vector<Rat> values; // one per coordinate, chart order

    SamplePoint() = default;
    SamplePoint(Chart c, std::vector<Rat> v) : chart(std::move(c)), values(std::move(v)) {
        if (static_cast<int>(values.size()) != chart.dim())
            throw Error("BadSamplePoint", "value count does not match chart dimension");
    }

    static SamplePoint origin(const Chart& c) {
        return SamplePoint(c, std::vector<Rat>(static_cast<size_t>(c.dim()), Rat(0)));
    }

    const Rat& value(int i) const { return values[static_cast<size_t>(i)]; }

    std::string to_string() const {
        std::string s = "(";
        for (int i = 0; i < chart.dim(); ++i) {
            if (i) s += ", ";
            s += chart.name(i) + "=" + values[static_cast<size_t>(i)].get_str();
        }
        return s + ")";
    }
};

} // namespace djc
