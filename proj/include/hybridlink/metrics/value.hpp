#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace hybridlink {

// A metric value plus the warnings raised while computing it.
struct MetricValue {
    double value = 0.0;
    std::vector<std::string> flags;

    MetricValue() = default;
    MetricValue(double v) : value(v) {}

    MetricValue& flag(const std::string& f) {
        auto it = std::lower_bound(flags.begin(), flags.end(), f);
        if (it == flags.end() || *it != f) flags.insert(it, f);
        return *this;
    }
    MetricValue& merge(const MetricValue& o) {
        for (const auto& f : o.flags) flag(f);
        return *this;
    }
    bool has(const std::string& f) const { return std::binary_search(flags.begin(), flags.end(), f); }

    std::string joined_flags() const {
        std::string s;
        for (const auto& f : flags) {
            if (!s.empty()) s += ';';
            s += f;
        }
        return s;
    }
};

}  // namespace hybridlink
