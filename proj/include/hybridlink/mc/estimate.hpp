#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "hybridlink/error.hpp"
#include "hybridlink/mc/rng.hpp"
#include "hybridlink/mc/samplers.hpp"
#include "hybridlink/metrics/modulation.hpp"
#include "hybridlink/metrics/system.hpp"
#include "hybridlink/switching.hpp"

namespace hybridlink::mc {

inline constexpr double z95 = 1.959963984540054;

struct EstimateResult {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double n_effective = 0.0;  // n_samples unless the draws are serially correlated
};

struct Interval {
    double lo;
    double hi;
};

inline Interval wilson_interval(double p, double nn, double z) {
    const double z2n = z * z / nn;
    const double centre = (p + 0.5 * z2n) / (1.0 + z2n);
    const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / nn + 0.25 * z2n / nn);
    return {p == 0.0 ? 0.0 : std::max(0.0, centre - half), p == 1.0 ? 1.0 : std::min(1.0, centre + half)};
}

inline EstimateResult proportion(std::uint64_t k, std::uint64_t n, double n_eff = 0.0) {
    EstimateResult r;
    r.n_samples = n;
    r.n_effective = n_eff > 0.0 ? n_eff : static_cast<double>(n);
    r.value = static_cast<double>(k) / static_cast<double>(n);
    auto ci = wilson_interval(r.value, r.n_effective, z95);
    r.ci_lo = std::min(ci.lo, r.value);
    r.ci_hi = std::max(ci.hi, r.value);
    r.std_error = (ci.hi - ci.lo) / (2.0 * z95);
    return r;
}

inline EstimateResult from_mean(double value, double se, std::uint64_t n, double n_eff = 0.0) {
    return {value, se, n, value - z95 * se, value + z95 * se, n_eff > 0.0 ? n_eff : static_cast<double>(n)};
}

// Running Σx and Σx² in long double.
struct Moments {
    long double s1 = 0.0L;
    long double s2 = 0.0L;

    void add(double x) {
        s1 += x;
        s2 += static_cast<long double>(x) * x;
    }
    void merge(const Moments& o) {
        s1 += o.s1;
        s2 += o.s2;
    }
    double mean(std::uint64_t n) const { return static_cast<double>(s1 / static_cast<long double>(n)); }
    double variance(std::uint64_t n) const {
        const long double nn = n;
        const long double m = s1 / nn;
        return static_cast<double>(std::max(0.0L, (s2 / nn - m * m) * nn / (nn - 1.0L)));
    }
    EstimateResult estimate(std::uint64_t n, double n_eff = 0.0) const {
        const double ne = n_eff > 0.0 ? n_eff : static_cast<double>(n);
        return from_mean(mean(n), std::sqrt(variance(n) / ne), n, ne);
    }
};

// Fewest blocks for which the batch-means variance is trusted.
inline constexpr std::size_t min_batches = 20;

// Effective sample size from batch means: n·σ²_iid / σ²_batch, never above n.
// blocks holds (size, mean) per independent block.
inline double effective_samples(const std::vector<std::pair<double, double>>& blocks, double iid_var) {
    double n = 0.0, s = 0.0;
    for (auto [nb, mb] : blocks) {
        n += nb;
        s += nb * mb;
    }
    if (blocks.size() < min_batches || !(iid_var > 0.0)) return n;
    const double m = s / n;
    double ss = 0.0;
    for (auto [nb, mb] : blocks) ss += nb * (mb - m) * (mb - m);
    const double batch_var = ss / static_cast<double>(blocks.size() - 1);
    return batch_var > iid_var ? n * iid_var / batch_var : n;
}

struct McOptions {
    std::uint64_t seed = 1;
    std::uint64_t samples = 1'000'000;
    unsigned threads = 1;
    std::uint64_t block_size = 1u << 16;
    std::uint64_t burn_in = 1000;  // slots discarded per block under soft switching
};

inline constexpr std::uint64_t min_samples = 10'000;

inline unsigned resolve_threads(unsigned t) {
    if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
    return t;
}

// Runs fn(block_index, count) for every block and returns the per-block
// results in block order, whatever the thread count.
template <class R, class Fn>
inline std::vector<R> run_blocks(std::uint64_t total, std::uint64_t block, unsigned threads, Fn&& fn) {
    const std::uint64_t nb = (total + block - 1) / block;
    std::vector<R> out(nb);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t b = next++; b < nb; b = next++) out[b] = fn(b, std::min(block, total - b * block));
    };
    threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::uint64_t>(nb, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return out;
}

namespace detail {

inline void check_samples(std::uint64_t n, const char* op) {
    if (n < min_samples)
        throw domain_error(std::string(op) + ": need at least " + std::to_string(min_samples) + " samples, got " +
                           std::to_string(n));
}

// One block of slots: every slot draws all three hops and advances the
// switch state; soft policies get a burn-in first.
template <class Acc>
inline Acc simulate_block(const SystemSpec& s, const McOptions& o, std::uint64_t b, std::uint64_t count, Acc acc) {
    auto eng = RngStream{o.seed, b}.engine();
    const SoftPolicy p = as_soft(s.policy);
    const std::uint64_t burn = s.is_soft() ? o.burn_in : 0;
    SwitchState st;
    for (std::uint64_t i = 0; i < burn + count; ++i) {
        const double gf = sample_fso_snr(s.fso, eng);
        const double gt = sample_thz_snr(s.thz, eng);
        const double gr = sample_access_snr(s.access, eng);
        st = soft_switch_step(st, gf, gt, p);
        if (i >= burn) acc.add(gf, gt, gr, st.active);
    }
    return acc;
}

template <class Acc>
struct Simulated {
    Acc total;
    std::vector<Acc> blocks;
    bool correlated = false;  // soft switching carries state from slot to slot

    // Effective sample size of the statistic x(acc) / acc.n.
    template <class Fn>
    double n_eff(Fn&& x, double iid_var) const {
        if (!correlated) return static_cast<double>(total.n);
        std::vector<std::pair<double, double>> bm;
        for (const auto& b : blocks) bm.emplace_back(static_cast<double>(b.n), x(b) / static_cast<double>(b.n));
        return effective_samples(bm, iid_var);
    }
    double n_eff_count(std::uint64_t Acc::*k) const {
        const double p = static_cast<double>(total.*k) / static_cast<double>(total.n);
        return n_eff([k](const Acc& a) { return static_cast<double>(a.*k); }, p * (1.0 - p));
    }
    EstimateResult count(std::uint64_t Acc::*k) const { return proportion(total.*k, total.n, n_eff_count(k)); }
    EstimateResult mean(Moments Acc::*k) const {
        const Moments& t = total.*k;
        const double ne = n_eff([k](const Acc& a) { return static_cast<double>((a.*k).s1); }, t.variance(total.n));
        return t.estimate(total.n, ne);
    }
};

template <class Acc>
inline Simulated<Acc> simulate(const SystemSpec& s, const McOptions& o, const Acc& proto, const char* op) {
    check_samples(o.samples, op);
    Simulated<Acc> r{proto,
                     run_blocks<Acc>(o.samples, o.block_size, o.threads,
                                     [&](std::uint64_t b, std::uint64_t c) { return simulate_block(s, o, b, c, proto); }),
                     s.is_soft()};
    for (const auto& a : r.blocks) r.total.merge(a);
    return r;
}

struct OutageAcc {
    SoftPolicy p;
    double r_th = 0.0;
    std::uint64_t n = 0, fso = 0, thz = 0, hyb = 0, acc = 0, e2e = 0;

    void add(double, double gt, double gr, ActiveLink a) {
        ++n;
        fso += a != ActiveLink::fso;
        thz += gt < p.gamma_t_th;
        const bool h = a == ActiveLink::outage;
        const bool r = gr < r_th;
        hyb += h;
        acc += r;
        e2e += h || r;
    }
    void merge(const OutageAcc& o) {
        n += o.n;
        fso += o.fso;
        thz += o.thz;
        hyb += o.hyb;
        acc += o.acc;
        e2e += o.e2e;
    }
};

struct CapacityAcc {
    SoftPolicy p;
    double r_th = 0.0;
    double xi = 1.0;
    std::uint64_t n = 0;
    Moments fso, thz, hyb, acc;

    void add(double gf, double gt, double gr, ActiveLink a) {
        ++n;
        const double cf = std::log2(1.0 + xi * gf);
        const double ct = std::log2(1.0 + gt);
        fso.add(gf >= p.gamma_f_th_u ? cf : 0.0);
        thz.add(gt >= p.gamma_t_th ? ct : 0.0);
        hyb.add(a == ActiveLink::fso ? cf : a == ActiveLink::thz ? ct : 0.0);
        acc.add(gr >= r_th ? std::log2(1.0 + gr) : 0.0);
    }
    void merge(const CapacityAcc& o) {
        n += o.n;
        fso.merge(o.fso);
        thz.merge(o.thz);
        hyb.merge(o.hyb);
        acc.merge(o.acc);
    }
};

inline double conditional_ber(const Modulation& m, double gamma) {
    double e = 0.0;
    for (double b : m.b) e += m.a * std::erfc(std::sqrt(b * gamma));
    return e;
}

struct AberAcc {
    SoftPolicy p;
    double r_th = 0.0;
    ModulationSet mods;
    std::uint64_t n = 0, outages = 0;
    Moments fso, thz, hyb, acc;

    void add(double gf, double gt, double gr, ActiveLink a) {
        ++n;
        outages += a == ActiveLink::outage;
        const double bf = conditional_ber(mods.fso, gf);
        const double bt = conditional_ber(mods.thz, gt);
        fso.add(gf >= p.gamma_f_th_u ? bf : 0.0);
        thz.add(gt >= p.gamma_t_th ? bt : 0.0);
        hyb.add(a == ActiveLink::fso ? bf : a == ActiveLink::thz ? bt : 0.0);
        acc.add(gr >= r_th ? conditional_ber(mods.access, gr) : 0.0);
    }
    void merge(const AberAcc& o) {
        n += o.n;
        outages += o.outages;
        fso.merge(o.fso);
        thz.merge(o.thz);
        hyb.merge(o.hyb);
        acc.merge(o.acc);
    }
};

}  // namespace detail

struct OutageEstimates {
    EstimateResult fso, thz, hybrid, access, e2e;
};

struct CapacityEstimates {
    EstimateResult fso, thz, hybrid, access, e2e;
};

struct AberEstimates {
    EstimateResult fso, thz, access, hybrid, hybrid_unconditional, e2e, e2e_unconditional;
};

inline OutageEstimates estimate_outage(const SystemSpec& s, const McOptions& o) {
    detail::OutageAcc proto{as_soft(s.policy), s.gamma_r_th};
    const auto r = detail::simulate(s, o, proto, "estimate_outage");
    using A = detail::OutageAcc;
    return {r.count(&A::fso), r.count(&A::thz), r.count(&A::hyb), r.count(&A::acc), r.count(&A::e2e)};
}

inline CapacityEstimates estimate_capacity(const SystemSpec& s, const McOptions& o) {
    detail::CapacityAcc proto;
    proto.p = as_soft(s.policy);
    proto.r_th = s.gamma_r_th;
    proto.xi = fso_xi_factor(s.fso);
    const auto r = detail::simulate(s, o, proto, "estimate_capacity");
    using A = detail::CapacityAcc;
    CapacityEstimates c{r.mean(&A::fso), r.mean(&A::thz), r.mean(&A::hyb), r.mean(&A::acc), {}};
    c.e2e = c.hybrid.value <= c.access.value ? c.hybrid : c.access;
    return c;
}

inline EstimateResult combine_e2e_aber(const EstimateResult& b1, const EstimateResult& b2) {
    const double v = e2e_aber(b1.value, b2.value);
    const double se = std::hypot((1.0 - 2.0 * b2.value) * b1.std_error, (1.0 - 2.0 * b1.value) * b2.std_error);
    return from_mean(v, se, std::min(b1.n_samples, b2.n_samples), std::min(b1.n_effective, b2.n_effective));
}

inline AberEstimates estimate_aber(const SystemSpec& s, const ModulationSet& mods, const McOptions& o) {
    if (mods.fso.tau() != s.fso.tau)
        throw domain_error("modulation " + mods.fso.name() + " needs FSO detection tau = " + std::to_string(mods.fso.tau()));
    detail::AberAcc proto;
    proto.p = as_soft(s.policy);
    proto.r_th = s.gamma_r_th;
    proto.mods = mods;
    const auto sim = detail::simulate(s, o, proto, "estimate_aber");
    const auto& a = sim.total;
    using A = detail::AberAcc;
    AberEstimates r;
    r.fso = sim.mean(&A::fso);
    r.thz = sim.mean(&A::thz);
    r.access = sim.mean(&A::acc);
    r.hybrid_unconditional = sim.mean(&A::hyb);
    const double up = 1.0 - static_cast<double>(a.outages) / static_cast<double>(a.n);
    if (up > 0.0) {
        const auto& u = r.hybrid_unconditional;
        r.hybrid = from_mean(u.value / up, u.std_error / up, a.n, u.n_effective);
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.hybrid = {nan, nan, a.n, nan, nan, static_cast<double>(a.n)};
    }
    r.e2e = combine_e2e_aber(r.hybrid, r.access);
    r.e2e_unconditional = combine_e2e_aber(r.hybrid_unconditional, r.access);
    return r;
}

}  // namespace hybridlink::mc
