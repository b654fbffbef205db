#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hybridlink/error.hpp"

namespace hybridlink {

enum class Scheme { ook, bpsk, mpsk, mqam };

// Conditional bit error A·Σ erfc(√(B_p γ)) parameters.
struct Modulation {
    Scheme scheme = Scheme::bpsk;
    int order = 2;
    int n0 = 1;
    double a = 0.5;
    std::vector<double> b{1.0};

    int tau() const { return scheme == Scheme::ook ? 2 : 1; }
    std::string name() const;

    static Modulation ook() { return {Scheme::ook, 2, 1, 0.5, {0.5}}; }
    static Modulation bpsk() { return {Scheme::bpsk, 2, 1, 0.5, {1.0}}; }
    static Modulation psk(int m);
    static Modulation qam(int m);
    static Modulation parse(const std::string& s);
};

inline Modulation Modulation::psk(int m) {
    if (m < 4 || !std::has_single_bit(static_cast<unsigned>(m)))
        throw domain_error("M-PSK order must be a power of two >= 4");
    Modulation r;
    r.scheme = Scheme::mpsk;
    r.order = m;
    r.n0 = std::max(m / 4, 1);
    r.a = 1.0 / std::max(2.0, std::log2(double(m)));
    r.b.clear();
    for (int p = 1; p <= r.n0; ++p) {
        const double s = std::sin((2.0 * p - 1.0) * std::numbers::pi / m);
        r.b.push_back(s * s);
    }
    return r;
}

inline Modulation Modulation::qam(int m) {
    if (m < 4 || !std::has_single_bit(static_cast<unsigned>(m)) || std::countr_zero(static_cast<unsigned>(m)) % 2)
        throw domain_error("M-QAM order must be a square power of two >= 4");
    Modulation r;
    r.scheme = Scheme::mqam;
    r.order = m;
    const double sq = std::sqrt(double(m));
    r.n0 = static_cast<int>(sq / 2.0);
    r.a = 2.0 / std::log2(double(m)) * (1.0 - 1.0 / sq);
    r.b.clear();
    for (int p = 1; p <= r.n0; ++p) r.b.push_back(3.0 * (2.0 * p - 1.0) * (2.0 * p - 1.0) / (2.0 * (m - 1.0)));
    return r;
}

inline std::string Modulation::name() const {
    switch (scheme) {
        case Scheme::ook: return "OOK";
        case Scheme::bpsk: return "BPSK";
        case Scheme::mpsk: return order == 4 ? "QPSK" : std::to_string(order) + "-PSK";
        case Scheme::mqam: return std::to_string(order) + "-QAM";
    }
    return "?";
}

// "OOK", "BPSK", "QPSK", "8-PSK", "16-QAM", ...
inline Modulation Modulation::parse(const std::string& raw) {
    std::string s;
    for (char c : raw) s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (s == "OOK") return ook();
    if (s == "BPSK") return bpsk();
    if (s == "QPSK") return psk(4);
    auto dash = s.find('-');
    if (dash != std::string::npos) {
        const std::string kind = s.substr(dash + 1);
        int m = 0;
        try {
            m = std::stoi(s.substr(0, dash));
        } catch (...) {
            throw domain_error("unknown modulation '" + raw + "'");
        }
        if (kind == "PSK") return psk(m);
        if (kind == "QAM") return qam(m);
    }
    throw domain_error("unknown modulation '" + raw + "'");
}

}  // namespace hybridlink
