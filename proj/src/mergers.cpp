#include "projmerge/mergers.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>

namespace projmerge {

std::uint64_t enumeration_budget(std::uint64_t default_cap) {
    if (const char* env = std::getenv("PROJMERGE_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return default_cap;
}

MergerTable::MergerTable(std::uint64_t n, std::uint32_t t_, std::uint64_t d,
                         std::uint32_t m, std::vector<std::uint8_t> entries)
    : n_vals(n), t(t_), d_vals(d), m_vals(m), table(std::move(entries)) {
    if (d_vals == 0) throw std::invalid_argument("seed count must be >= 1");
    if (m_vals == 0 || m_vals > 255) throw std::invalid_argument("output count out of range");
    const std::uint64_t cells = GridDims(t, n_vals).cell_count();
    if (cells > std::numeric_limits<std::uint64_t>::max() / d_vals)
        throw std::overflow_error("table size overflows");
    if (table.size() != cells * d_vals)
        throw std::invalid_argument("table size must be N^t * D");
    for (auto v : table)
        if (v >= m_vals) throw std::invalid_argument("table entry exceeds output range");
}

Distribution::Distribution(std::vector<Rat> w) : weights(std::move(w)) {
    Rat sum(0);
    for (const auto& p : weights) {
        if (p < Rat(0)) throw std::invalid_argument("negative probability");
        sum += p;
    }
    if (sum != Rat(1)) throw std::invalid_argument("probabilities must sum to 1");
}

Distribution Distribution::uniform(std::uint64_t outcomes) {
    return Distribution(std::vector<Rat>(outcomes, Rat(1, static_cast<long long>(outcomes))));
}

Distribution Distribution::point_mass(std::uint64_t outcomes, std::uint64_t at) {
    std::vector<Rat> w(outcomes, Rat(0));
    w.at(at) = Rat(1);
    return Distribution(std::move(w));
}

Rat statistical_distance(const Distribution& p, const Distribution& q) {
    if (p.outcomes() != q.outcomes())
        throw std::invalid_argument("distributions have different supports");
    Rat sum(0);
    for (std::size_t i = 0; i < p.outcomes(); ++i)
        sum += boost::abs(p.weights[i] - q.weights[i]);
    return sum / 2;
}

namespace {

std::vector<std::uint32_t> complement_axes(const AxisSubset& axes, std::uint32_t t) {
    std::vector<std::uint32_t> rest;
    std::size_t k = 0;
    for (std::uint32_t a = 0; a < t; ++a) {
        if (k < axes.indices.size() && axes.indices[k] == a)
            ++k;
        else
            rest.push_back(a);
    }
    return rest;
}

std::uint64_t assemble_cell(const GridDims& dims, const AxisSubset& uniform,
                            std::uint64_t urank, const std::vector<std::uint32_t>& rest,
                            std::uint64_t rrank) {
    std::vector<std::uint64_t> coords(dims.t, 0);
    for (std::size_t i = uniform.indices.size(); i-- > 0;) {
        coords[uniform.indices[i]] = urank % dims.side;
        urank /= dims.side;
    }
    for (std::size_t i = rest.size(); i-- > 0;) {
        coords[rest[i]] = rrank % dims.side;
        rrank /= dims.side;
    }
    return dims.index_of(coords);
}

std::uint64_t pow_u64_checked(std::uint64_t base, std::uint64_t exp, bool& overflow) {
    // saturating power used for budget estimates
    std::uint64_t r = 1;
    overflow = false;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
            overflow = true;
            return std::numeric_limits<std::uint64_t>::max();
        }
        r *= base;
    }
    return r;
}

}  // namespace

std::uint64_t AdversaryStrategy::cell_for(const GridDims& dims,
                                          std::uint64_t uniform_rank) const {
    auto rest = complement_axes(uniform_axes, dims.t);
    return assemble_cell(dims, uniform_axes, uniform_rank, rest,
                         rest.empty() ? 0 : completion.at(uniform_rank));
}

Distribution adversary_output_distribution(const MergerTable& e,
                                           const AdversaryStrategy& adv,
                                           std::uint64_t seed) {
    const GridDims dims = e.input_dims();
    bool ovf = false;
    const std::uint64_t k = pow_u64_checked(e.n_vals, adv.uniform_axes.size(), ovf);
    std::vector<long long> counts(e.m_vals, 0);
    for (std::uint64_t u = 0; u < k; ++u)
        counts[e.at(adv.cell_for(dims, u), seed)]++;
    std::vector<Rat> w(e.m_vals);
    for (std::uint32_t z = 0; z < e.m_vals; ++z)
        w[z] = Rat(counts[z], static_cast<long long>(k));
    return Distribution(std::move(w));
}

SdExactResult multimerger_sd_exact(const MergerTable& e, std::uint32_t s) {
    if (e.d_vals != 1 || e.m_vals != 2)
        throw std::invalid_argument("multimerger_sd_exact requires D=1, M=2");
    const GridDims dims = e.input_dims();
    if (s == 0 || s > dims.t) throw std::invalid_argument("need 1 <= s <= t");

    CellMask preimage[2] = {CellMask(dims), CellMask(dims)};
    for (std::uint64_t cell = 0; cell < dims.cell_count(); ++cell)
        preimage[e.at(cell, 0)].set(cell);

    const auto subsets = axis_subsets(dims.t, s);
    bool ovf = false;
    const std::uint64_t points = pow_u64_checked(e.n_vals, s, ovf);

    Rat best_sd(-1);
    std::uint32_t best_part = 0;
    AxisSubset best_axes;
    for (std::uint32_t b = 0; b < 2; ++b) {
        for (const auto& axes : subsets) {
            Rat frac(static_cast<long long>(project(preimage[b], axes).size()),
                     static_cast<long long>(points));
            Rat sd = frac - Rat(1, 2);
            if (sd < Rat(0)) sd = Rat(0);
            if (sd > best_sd) {
                best_sd = sd;
                best_part = b;
                best_axes = axes;
            }
        }
    }

    // adversary: for each uniform assignment, complete into the target
    // preimage when possible, otherwise use the all-zero completion
    auto rest = complement_axes(best_axes, dims.t);
    std::uint64_t rcount = 1;
    for (std::size_t i = 0; i < rest.size(); ++i) rcount *= e.n_vals;
    std::uint64_t ucount = 1;
    for (std::size_t i = 0; i < best_axes.size(); ++i) ucount *= e.n_vals;
    AdversaryStrategy adv{best_axes, std::vector<std::uint64_t>(ucount, 0)};
    for (std::uint64_t u = 0; u < ucount; ++u)
        for (std::uint64_t r = 0; r < rcount; ++r)
            if (preimage[best_part].test(assemble_cell(dims, best_axes, u, rest, r))) {
                adv.completion[u] = r;
                break;
            }
    return {best_sd, best_part, best_axes, std::move(adv)};
}

MergerTable multimerger_from_partition(const PartLabeling& p) {
    if (p.parts() != 2)
        throw std::invalid_argument("partition bridge requires exactly 2 parts");
    return MergerTable(p.dims().side, p.dims().t, 1, 2, p.labels());
}

PartLabeling partition_from_multimerger(const MergerTable& e) {
    if (e.d_vals != 1 || e.m_vals != 2)
        throw std::invalid_argument("partition bridge requires D=1, M=2");
    return PartLabeling(e.input_dims(), 2, e.table);
}

AdversaryStrategy seedless_counterexample(const MergerTable& m) {
    if (m.t != 2 || m.d_vals != 1 || m.m_vals != 2)
        throw std::invalid_argument("seedless counterexample requires t=2, D=1, M=2");
    const std::uint64_t n = m.n_vals;
    const GridDims dims = m.input_dims();
    // branch (a): every column y contains a zero -> g(y) makes the output 0
    std::vector<std::uint64_t> g(n, 0);
    std::optional<std::uint64_t> all_ones_column;
    for (std::uint64_t y = 0; y < n && !all_ones_column; ++y) {
        bool found = false;
        for (std::uint64_t x = 0; x < n; ++x)
            if (m.at(dims.index_of({x, y}), 0) == 0) {
                g[y] = x;
                found = true;
                break;
            }
        if (!found) all_ones_column = y;
    }
    if (!all_ones_column)
        return AdversaryStrategy{AxisSubset({1}), std::move(g)};
    // branch (b): some column is constant 1 -> fix the second coordinate there
    return AdversaryStrategy{AxisSubset({0}),
                             std::vector<std::uint64_t>(n, *all_ones_column)};
}

namespace {

/// Enumerates all deterministic adversaries for one uniform-axes choice,
/// maintaining per-seed deviation sums dev[j] = sum_z |M*count_z - K|
/// incrementally via an odometer over completion digits.
/// Visit is called once per adversary with the dev array.
template <class Visit>
void enumerate_adversaries(const MergerTable& e, const AxisSubset& uniform,
                           Visit&& visit) {
    const GridDims dims = e.input_dims();
    const std::uint32_t t = dims.t;
    auto rest = complement_axes(uniform, t);
    bool ovf = false;
    const std::uint64_t k = pow_u64_checked(e.n_vals, uniform.size(), ovf);
    const std::uint64_t r = pow_u64_checked(e.n_vals, rest.size(), ovf);
    const std::uint64_t d = e.d_vals;
    const std::uint32_t m = e.m_vals;

    // cell index per (uniform rank, completion rank)
    std::vector<std::uint64_t> cell(k * r);
    for (std::uint64_t u = 0; u < k; ++u)
        for (std::uint64_t rr = 0; rr < r; ++rr)
            cell[u * r + rr] = assemble_cell(dims, uniform, u, rest, rr);

    std::vector<long long> counts(d * m, 0);
    std::vector<long long> dev(d, 0);
    std::vector<std::uint64_t> digits(k, 0);

    auto add = [&](std::uint64_t u, std::uint64_t rr, long long delta) {
        const std::uint64_t c = cell[u * r + rr];
        for (std::uint64_t j = 0; j < d; ++j) {
            const std::uint32_t z = e.at(c, j);
            long long& cnt = counts[j * m + z];
            dev[j] -= std::abs(static_cast<long long>(m) * cnt -
                               static_cast<long long>(k));
            cnt += delta;
            dev[j] += std::abs(static_cast<long long>(m) * cnt -
                               static_cast<long long>(k));
        }
    };

    // empty counts mean dev[j] = sum_z |0 - K| = M*K; the adds below then
    // bring the counters to the all-zero adversary
    for (std::uint64_t j = 0; j < d; ++j)
        dev[j] = static_cast<long long>(m) * static_cast<long long>(k);
    for (std::uint64_t u = 0; u < k; ++u) add(u, 0, +1);

    while (true) {
        visit(dev, digits);
        // odometer step
        std::uint64_t pos = 0;
        while (pos < k && digits[pos] + 1 == r) {
            add(pos, digits[pos], -1);
            digits[pos] = 0;
            add(pos, 0, +1);
            ++pos;
        }
        if (pos == k) break;
        add(pos, digits[pos], -1);
        ++digits[pos];
        add(pos, digits[pos], +1);
    }
}

}  // namespace

MergerVerdict is_eps_merger_exhaustive(const MergerTable& e, const Rat& eps,
                                       std::uint32_t s) {
    const GridDims dims = e.input_dims();
    if (s == 0 || s > dims.t) throw std::invalid_argument("need 1 <= s <= t");
    bool ovf = false;
    const std::uint64_t k = pow_u64_checked(e.n_vals, s, ovf);
    const std::uint64_t r = pow_u64_checked(e.n_vals, dims.t - s, ovf);
    bool ovf2 = false;
    const std::uint64_t adversary_count = pow_u64_checked(r, k, ovf2);
    const std::uint64_t cap = enumeration_budget(std::uint64_t{1} << 30);
    if (ovf || ovf2 || adversary_count > cap)
        throw BudgetError("adversary space exceeds enumeration budget",
                          ovf2 ? 1e300 : static_cast<double>(adversary_count));

    const long long pn = eps.numerator();
    const long long pd = eps.denominator();
    const long long bad_threshold_lhs = 2 * pn * static_cast<long long>(e.m_vals) *
                                        static_cast<long long>(k);
    const std::uint64_t d = e.d_vals;

    MergerVerdict out;
    out.is_merger = true;
    out.adversaries_checked = 0;
    long long worst_bad = -1;

    for (const auto& uniform : axis_subsets(dims.t, s)) {
        enumerate_adversaries(e, uniform, [&](const std::vector<long long>& dev,
                                              const std::vector<std::uint64_t>& digits) {
            ++out.adversaries_checked;
            long long bad = 0;
            for (std::uint64_t j = 0; j < d; ++j)
                if (pd * dev[j] > bad_threshold_lhs) ++bad;
            if (bad > worst_bad) {
                worst_bad = bad;
                out.worst_adversary = AdversaryStrategy{uniform, digits};
                out.worst_bad_seed_fraction = Rat(bad, static_cast<long long>(d));
                if (Rat(bad, static_cast<long long>(d)) > eps) out.is_merger = false;
            }
        });
    }
    return out;
}

Rat weak_merger_sd(const MergerTable& e, std::uint32_t s) {
    const GridDims dims = e.input_dims();
    if (s == 0 || s > dims.t) throw std::invalid_argument("need 1 <= s <= t");
    bool ovf = false;
    const std::uint64_t k = pow_u64_checked(e.n_vals, s, ovf);
    const std::uint64_t r = pow_u64_checked(e.n_vals, dims.t - s, ovf);
    bool ovf2 = false;
    const std::uint64_t adversary_count = pow_u64_checked(r, k, ovf2);
    const std::uint64_t cap = enumeration_budget(std::uint64_t{1} << 30);
    if (ovf || ovf2 || adversary_count > cap)
        throw BudgetError("adversary space exceeds enumeration budget",
                          ovf2 ? 1e300 : static_cast<double>(adversary_count));

    long long worst = 0;
    for (const auto& uniform : axis_subsets(dims.t, s)) {
        enumerate_adversaries(e, uniform, [&](const std::vector<long long>& dev,
                                              const std::vector<std::uint64_t>&) {
            long long total = 0;
            for (auto v : dev) total += v;
            worst = std::max(worst, total);
        });
    }
    // SD of the joint = sum_j dev[j] / (2*K*M*D)
    return Rat(worst, 2LL * static_cast<long long>(k) * e.m_vals *
                          static_cast<long long>(e.d_vals));
}

MergerTable truncate_and_extract(const MergerTable& ext, std::uint32_t n_bits) {
    // ext operates on m-bit coordinates; its N must be a power of two
    std::uint32_t m_bits = 0;
    while ((std::uint64_t{1} << m_bits) < ext.n_vals) ++m_bits;
    if ((std::uint64_t{1} << m_bits) != ext.n_vals)
        throw std::invalid_argument("extractor domain side must be a power of two");
    if (n_bits < m_bits)
        throw std::invalid_argument("cannot truncate to more bits than the input has");

    const std::uint64_t big_n = std::uint64_t{1} << n_bits;
    const GridDims big_dims(ext.t, big_n);
    const std::uint32_t shift = n_bits - m_bits;
    const GridDims small_dims = ext.input_dims();

    std::vector<std::uint8_t> table(big_dims.cell_count() * ext.d_vals);
    std::vector<std::uint64_t> coords(ext.t, 0);
    std::vector<std::uint64_t> small_coords(ext.t, 0);
    for (std::uint64_t cell = 0; cell < big_dims.cell_count(); ++cell) {
        for (std::uint32_t a = 0; a < ext.t; ++a) small_coords[a] = coords[a] >> shift;
        const std::uint64_t small_cell = small_dims.index_of(small_coords);
        for (std::uint64_t j = 0; j < ext.d_vals; ++j)
            table[cell * ext.d_vals + j] = ext.at(small_cell, j);
        for (std::uint32_t a = ext.t; a-- > 0;) {
            if (++coords[a] < big_n) break;
            coords[a] = 0;
        }
    }
    return MergerTable(big_n, ext.t, ext.d_vals, ext.m_vals, std::move(table));
}

namespace {

bool strong_extractor_ok(const std::vector<std::uint8_t>& table, std::uint64_t w,
                         std::uint64_t d, std::uint32_t m_out, std::uint64_t flat_size,
                         const std::vector<std::vector<std::uint64_t>>& flats,
                         long long pn, long long pd) {
    // acceptance: for every flat source, sum over seeds of per-seed SD <= eps
    // integer form: pd * sum_j sum_z |M*cnt - K| <= pn * 2*M*K*D
    const long long rhs = 2 * pn * static_cast<long long>(m_out) *
                          static_cast<long long>(flat_size) * static_cast<long long>(d);
    std::vector<long long> counts(m_out);
    for (const auto& flat : flats) {
        long long total = 0;
        for (std::uint64_t j = 0; j < d; ++j) {
            std::fill(counts.begin(), counts.end(), 0);
            for (auto x : flat) counts[table[x * d + j]]++;
            for (std::uint32_t z = 0; z < m_out; ++z)
                total += std::abs(static_cast<long long>(m_out) * counts[z] -
                                  static_cast<long long>(flat_size));
        }
        if (pd * total > rhs) return false;
    }
    (void)w;
    return true;
}

}  // namespace

ExtractorSearchResult find_extractor(std::uint32_t m, std::uint32_t t, std::uint32_t d,
                                     const Rat& eps, std::uint64_t trials,
                                     std::uint64_t rng_seed) {
    if (m == 0 || t == 0) throw std::invalid_argument("m and t must be positive");
    if (m * t > 20 || d > 20) throw std::invalid_argument("extractor search is micro-scale only");
    const std::uint64_t w = std::uint64_t{1} << (m * t);   // input domain size
    const std::uint64_t dd = std::uint64_t{1} << d;        // seeds
    const std::uint32_t m_out = static_cast<std::uint32_t>(std::uint64_t{1} << m);
    const std::uint64_t k = std::uint64_t{1} << m;         // flat support size
    const std::uint64_t entries = w * dd;

    // all flat min-entropy-m sources: uniform over a K-subset of [W]
    std::vector<std::vector<std::uint64_t>> flats;
    {
        std::vector<std::uint64_t> cur(k);
        for (std::uint64_t i = 0; i < k; ++i) cur[i] = i;
        while (true) {
            flats.push_back(cur);
            std::int64_t i = static_cast<std::int64_t>(k) - 1;
            while (i >= 0 && cur[i] == w - k + i) --i;
            if (i < 0) break;
            ++cur[i];
            for (std::uint64_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
        }
    }

    const long long pn = eps.numerator();
    const long long pd = eps.denominator();

    // candidate space size M^entries, saturating
    bool space_ovf = false;
    const std::uint64_t space = pow_u64_checked(m_out, entries, space_ovf);

    ExtractorSearchResult out{std::nullopt, 0, false};
    std::vector<std::uint8_t> table(entries, 0);

    if (!space_ovf && space <= trials) {
        // full enumeration in canonical order: candidate id's base-M digit at
        // position (x*D + j) is the table entry
        for (std::uint64_t id = 0; id < space; ++id) {
            std::uint64_t v = id;
            for (std::uint64_t e = 0; e < entries; ++e) {
                table[e] = static_cast<std::uint8_t>(v % m_out);
                v /= m_out;
            }
            ++out.candidates_tried;
            if (strong_extractor_ok(table, w, dd, m_out, k, flats, pn, pd)) {
                // shape the flat domain [2^(m*t)] as the grid [2^m]^t; the
                // row-major layouts coincide bit for bit
                out.extractor = MergerTable(k, t, dd, m_out, table);
                return out;
            }
        }
        out.exhausted = true;
        return out;
    }

    std::mt19937_64 gen(rng_seed);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        for (std::uint64_t e = 0; e < entries; ++e)
            table[e] = static_cast<std::uint8_t>(gen() % m_out);
        ++out.candidates_tried;
        if (strong_extractor_ok(table, w, dd, m_out, k, flats, pn, pd)) {
            out.extractor = MergerTable(k, t, dd, m_out, table);
            return out;
        }
    }
    return out;
}

Rat majority_multimerger_error(std::uint32_t t) {
    if (t % 2 == 0 || t < 3) throw std::invalid_argument("t must be odd and >= 3");
    if (t > 61) throw std::invalid_argument("t too large for exact 64-bit arithmetic");
    // adversary fixes its bit against the target: error =
    // Pr[Binomial(t-1, 1/2) <= (t-1)/2] - 1/2, exactly
    const std::uint32_t n = t - 1;
    unsigned long long binom = 1, partial = 0;
    for (std::uint32_t j = 0; j <= n / 2; ++j) {
        partial += binom;
        binom = binom * (n - j) / (j + 1);
    }
    return Rat(static_cast<long long>(partial), 1LL << n) - Rat(1, 2);
}

MergerTable majority_table(std::uint32_t t) {
    if (t % 2 == 0 || t < 3) throw std::invalid_argument("t must be odd and >= 3");
    GridDims dims(t, 2);
    std::vector<std::uint8_t> table(dims.cell_count());
    for (std::uint64_t cell = 0; cell < table.size(); ++cell) {
        std::uint32_t ones = std::popcount(cell);  // N=2: row-major index is the bit string
        table[cell] = ones >= (t + 1) / 2 ? 1 : 0;
    }
    return MergerTable(2, t, 1, 2, std::move(table));
}

}  // namespace projmerge
