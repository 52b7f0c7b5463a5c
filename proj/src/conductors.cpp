#include "projmerge/conductors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace projmerge {

Conductor::Conductor(std::uint64_t n, std::uint64_t d, std::uint32_t m,
                     std::vector<std::uint8_t> entries)
    : n_vals(n), d_vals(d), m_vals(m), table(std::move(entries)) {
    if (n == 0 || d == 0 || m == 0) throw std::invalid_argument("conductor shape must be positive");
    if (table.size() != n * d) throw std::invalid_argument("table size must be N*D");
    for (auto v : table)
        if (v >= m_vals) throw std::invalid_argument("entry exceeds right vertex count");
}

MissProfile miss_profile(const Conductor& c, const std::vector<bool>& s_subset) {
    if (s_subset.size() != c.m_vals)
        throw std::invalid_argument("subset indicator must cover [M]");
    std::uint64_t s_size = 0;
    for (bool b : s_subset) s_size += b;

    MissProfile out;
    out.hit_counts.resize(c.n_vals);
    out.totally_misses.resize(c.n_vals);
    out.mostly_misses.resize(c.n_vals);
    for (std::uint64_t x = 0; x < c.n_vals; ++x) {
        std::uint64_t hits = 0;
        for (std::uint64_t j = 0; j < c.d_vals; ++j)
            if (s_subset[c.at(x, j)]) ++hits;
        out.hit_counts[x] = hits;
        out.totally_misses[x] = hits == 0;
        // hits < (1/2)(|S|/M) D, strict, exact: 2*M*hits < |S|*D
        out.mostly_misses[x] = 2 * c.m_vals * hits < s_size * c.d_vals;
    }
    return out;
}

namespace {

bool some_vertex_mostly_misses(const Conductor& c, const std::vector<bool>& s_subset,
                               std::uint64_t s_size) {
    for (std::uint64_t x = 0; x < c.n_vals; ++x) {
        std::uint64_t hits = 0;
        for (std::uint64_t j = 0; j < c.d_vals; ++j)
            if (s_subset[c.at(x, j)]) ++hits;
        if (2 * c.m_vals * hits < s_size * c.d_vals) return true;
    }
    return false;
}

std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k, bool& overflow) {
    overflow = false;
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        if (r > std::numeric_limits<std::uint64_t>::max() / (n - i)) {
            overflow = true;
            return std::numeric_limits<std::uint64_t>::max();
        }
        r = r * (n - i) / (i + 1);
    }
    return r;
}

}  // namespace

AbnormalityResult abnormality_probability(const Conductor& c, const Rat& lambda,
                                          std::uint64_t mc_samples,
                                          std::uint64_t mc_seed) {
    // lambda*M must be an integer subset size
    const Rat lm = lambda * Rat(static_cast<long long>(c.m_vals));
    if (lm.denominator() != 1 || lm <= Rat(0) || lm > Rat(static_cast<long long>(c.m_vals)))
        throw std::invalid_argument("lambda*M must be an integer in (0, M]");
    const std::uint64_t k = static_cast<std::uint64_t>(lm.numerator());

    bool ovf = false;
    const std::uint64_t total = binomial_u64(c.m_vals, k, ovf);
    const std::uint64_t cap = enumeration_budget(std::uint64_t{1} << 24);

    AbnormalityResult out{};
    std::vector<bool> subset(c.m_vals, false);

    if (!ovf && total <= cap) {
        std::vector<std::uint32_t> cur(k);
        for (std::uint64_t i = 0; i < k; ++i) cur[i] = static_cast<std::uint32_t>(i);
        std::uint64_t hits = 0;
        while (true) {
            std::fill(subset.begin(), subset.end(), false);
            for (auto z : cur) subset[z] = true;
            if (some_vertex_mostly_misses(c, subset, k)) ++hits;
            std::int64_t i = static_cast<std::int64_t>(k) - 1;
            while (i >= 0 && cur[i] == c.m_vals - k + i) --i;
            if (i < 0) break;
            ++cur[i];
            for (std::uint64_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
        }
        out.exact = true;
        out.probability = Rat(static_cast<long long>(hits), static_cast<long long>(total));
        out.subsets_with_mostly_miss = hits;
        out.subsets_total = total;
        return out;
    }

    // Monte Carlo fallback: sample uniform k-subsets
    std::mt19937_64 gen(mc_seed);
    std::vector<std::uint32_t> pool(c.m_vals);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < mc_samples; ++s) {
        for (std::uint32_t i = 0; i < c.m_vals; ++i) pool[i] = i;
        std::fill(subset.begin(), subset.end(), false);
        for (std::uint64_t i = 0; i < k; ++i) {
            std::uint64_t pick = i + gen() % (c.m_vals - i);
            std::swap(pool[i], pool[pick]);
            subset[pool[i]] = true;
        }
        if (some_vertex_mostly_misses(c, subset, k)) ++hits;
    }
    out.exact = false;
    out.samples = mc_samples;
    out.probability = Rat(static_cast<long long>(hits), static_cast<long long>(mc_samples));
    const double p = static_cast<double>(hits) / static_cast<double>(mc_samples);
    const double half_width = 2.576 * std::sqrt(std::max(p * (1 - p), 1e-12) /
                                                static_cast<double>(mc_samples));
    out.ci_low = std::max(0.0, p - half_width);
    out.ci_high = std::min(1.0, p + half_width);
    return out;
}

bool is_abnormal(const Conductor& c, const Rat& gamma, const Rat& lambda) {
    auto r = abnormality_probability(c, lambda);
    return r.probability < Rat(1) - gamma;
}

Conductor slice_conductor(const MergerTable& e, std::uint64_t y) {
    if (e.t != 2) throw std::invalid_argument("slice conductor requires t=2");
    if (y >= e.n_vals) throw std::out_of_range("slice index out of range");
    const GridDims dims = e.input_dims();
    std::vector<std::uint8_t> table(e.n_vals * e.d_vals);
    for (std::uint64_t x = 0; x < e.n_vals; ++x) {
        const std::uint64_t cell = dims.index_of({x, y});
        for (std::uint64_t j = 0; j < e.d_vals; ++j)
            table[x * e.d_vals + j] = e.at(cell, j);
    }
    return Conductor(e.n_vals, e.d_vals, e.m_vals, std::move(table));
}

std::optional<std::uint64_t> find_abnormal_slice(const MergerTable& e, const Rat& gamma,
                                                 const Rat& lambda, const Rat& eps) {
    if (gamma <= Rat(0) || gamma >= lambda / 2 - eps)
        throw std::invalid_argument("require 0 < gamma < lambda/2 - eps");
    for (std::uint64_t y = 0; y < e.n_vals; ++y)
        if (is_abnormal(slice_conductor(e, y), gamma, lambda)) return y;
    return std::nullopt;
}

NonexistenceResult exhaustive_merger_nonexistence(std::uint64_t n, std::uint64_t d,
                                                  std::uint32_t m, const Rat& eps) {
    NonexistenceResult out{true, 0, 0};
    if (eps >= Rat(1)) {
        // every table is vacuously an eps-merger
        out.none_exists = false;
        return out;
    }
    const GridDims dims(2, n);
    const std::uint64_t entries = dims.cell_count() * d;
    bool ovf = false;
    std::uint64_t space = 1;
    for (std::uint64_t i = 0; i < entries; ++i) {
        if (space > (std::uint64_t{1} << 20) / m + 1) ovf = true;
        space *= m;
        if (ovf) break;
    }
    const std::uint64_t cap = enumeration_budget(std::uint64_t{1} << 20);
    if (ovf || space > cap)
        throw BudgetError("table space exceeds enumeration budget",
                          std::pow(static_cast<double>(m), static_cast<double>(entries)));

    std::vector<std::uint8_t> table(entries, 0);
    for (std::uint64_t id = 0; id < space; ++id) {
        std::uint64_t v = id;
        for (std::uint64_t e = 0; e < entries; ++e) {
            table[e] = static_cast<std::uint8_t>(v % m);
            v /= m;
        }
        MergerTable mt(n, 2, d, m, table);
        ++out.tables_checked;
        if (is_eps_merger_exhaustive(mt, eps, 1).is_merger) {
            ++out.tables_passing;
            out.none_exists = false;
        }
    }
    return out;
}

}  // namespace projmerge
