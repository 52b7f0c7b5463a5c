#include "projmerge/search.hpp"

#include "projmerge/mergers.hpp"  // BudgetError, enumeration_budget

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <thread>

namespace projmerge {

namespace {

/// Incremental projection bookkeeping: per (axis subset, part) the number of
/// occupied projected points, updated as single cells gain or lose a label.
class ProjectionCounter {
  public:
    ProjectionCounter(const GridDims& dims, std::uint32_t parts, std::uint32_t s)
        : dims_(dims), parts_(parts) {
        const auto subsets = axis_subsets(dims.t, s);
        n_subsets_ = subsets.size();
        points_ = GridDims(s, dims.side).cell_count();
        point_of_.assign(n_subsets_ * dims.cell_count(), 0);
        for (std::size_t si = 0; si < n_subsets_; ++si) {
            std::vector<std::uint64_t> coords(dims.t, 0);
            for (std::uint64_t cell = 0; cell < dims.cell_count(); ++cell) {
                std::uint64_t pt = 0;
                for (auto a : subsets[si].indices) pt = pt * dims.side + coords[a];
                point_of_[si * dims.cell_count() + cell] = pt;
                for (std::uint32_t a = dims.t; a-- > 0;) {
                    if (++coords[a] < dims.side) break;
                    coords[a] = 0;
                }
            }
        }
        counts_.assign(n_subsets_ * parts_ * points_, 0);
        sizes_.assign(n_subsets_ * parts_, 0);
    }

    void add(std::uint64_t cell, std::uint32_t part) {
        for (std::size_t si = 0; si < n_subsets_; ++si) {
            const std::uint64_t pt = point_of_[si * dims_.cell_count() + cell];
            if (counts_[(si * parts_ + part) * points_ + pt]++ == 0)
                sizes_[si * parts_ + part]++;
        }
    }
    void remove(std::uint64_t cell, std::uint32_t part) {
        for (std::size_t si = 0; si < n_subsets_; ++si) {
            const std::uint64_t pt = point_of_[si * dims_.cell_count() + cell];
            if (--counts_[(si * parts_ + part) * points_ + pt] == 0)
                sizes_[si * parts_ + part]--;
        }
    }
    std::uint64_t max_size() const {
        std::uint64_t m = 0;
        for (auto v : sizes_) m = std::max(m, static_cast<std::uint64_t>(v));
        return m;
    }
    std::uint64_t sum_squares() const {
        std::uint64_t s = 0;
        for (auto v : sizes_) s += static_cast<std::uint64_t>(v) * v;
        return s;
    }

  private:
    GridDims dims_;
    std::uint32_t parts_;
    std::size_t n_subsets_;
    std::uint64_t points_;
    std::vector<std::uint64_t> point_of_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint32_t> sizes_;
};

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        r *= base;
    }
    return r;
}

struct ShardResult {
    std::uint64_t value = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint8_t> witness;  // lex-first optimum within the shard
    std::uint64_t states = 0;
};

/// Depth-first enumeration below a fixed prefix.  Visits complete labelings
/// in lexicographic order; prunes a branch only when its partial max already
/// exceeds the shared best, so every global optimum is still reached.
class ShardRunner {
  public:
    ShardRunner(const SearchConfig& cfg, const std::vector<std::uint8_t>& prefix,
                std::atomic<std::uint64_t>& shared_best)
        : cfg_(cfg),
          counter_(cfg.dims, cfg.parts, cfg.s),
          labels_(cfg.dims.cell_count(), 0),
          shared_best_(shared_best) {
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            labels_[i] = prefix[i];
            counter_.add(i, prefix[i]);
            max_used_ = std::max<std::uint32_t>(max_used_, prefix[i]);
        }
        start_ = prefix.size();
    }

    ShardResult run() {
        dfs(start_, max_used_);
        return std::move(result_);
    }

  private:
    void dfs(std::uint64_t cell, std::uint32_t max_used) {
        result_.states++;
        if (cell == cfg_.dims.cell_count()) {
            const std::uint64_t value = counter_.max_size();
            if (value < result_.value) {
                result_.value = value;
                result_.witness = labels_;
                // publish for cross-shard pruning
                std::uint64_t cur = shared_best_.load(std::memory_order_relaxed);
                while (value < cur &&
                       !shared_best_.compare_exchange_weak(cur, value,
                                                           std::memory_order_relaxed)) {
                }
            }
            return;
        }
        std::uint32_t limit = cfg_.parts;
        if (cfg_.symmetry.part_relabel)
            limit = std::min(cfg_.parts, max_used + 2);
        for (std::uint32_t part = 0; part < limit; ++part) {
            labels_[cell] = part;
            counter_.add(cell, part);
            const std::uint64_t bound =
                std::min(result_.value, shared_best_.load(std::memory_order_relaxed));
            if (counter_.max_size() <= bound)
                dfs(cell + 1, std::max(max_used, part));
            counter_.remove(cell, part);
        }
        labels_[cell] = 0;
    }

    const SearchConfig& cfg_;
    ProjectionCounter counter_;
    std::vector<std::uint8_t> labels_;
    std::atomic<std::uint64_t>& shared_best_;
    std::uint64_t start_ = 0;
    std::uint32_t max_used_ = 0;
    ShardResult result_;
};

/// Prefix assignments of the first `depth` cells, respecting the enabled
/// symmetry restrictions, in lexicographic order.
void enumerate_prefixes(const SearchConfig& cfg, std::uint64_t depth,
                        std::vector<std::uint8_t>& cur,
                        std::vector<std::vector<std::uint8_t>>& out) {
    if (cur.size() == depth) {
        out.push_back(cur);
        return;
    }
    std::uint32_t max_used = 0;
    for (auto l : cur) max_used = std::max<std::uint32_t>(max_used, l);
    std::uint32_t limit = cfg.parts;
    if (cur.empty() && (cfg.symmetry.fix_first_cell || cfg.symmetry.part_relabel))
        limit = 1;
    else if (cfg.symmetry.part_relabel)
        limit = std::min(cfg.parts, max_used + 2);
    for (std::uint32_t part = 0; part < limit; ++part) {
        cur.push_back(static_cast<std::uint8_t>(part));
        enumerate_prefixes(cfg, depth, cur, out);
        cur.pop_back();
    }
}

std::vector<std::uint8_t> relabel_first_appearance(const std::vector<std::uint8_t>& labels,
                                                   std::uint32_t parts) {
    std::vector<std::int32_t> remap(parts, -1);
    std::vector<std::uint8_t> out(labels.size());
    std::uint8_t next = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (remap[labels[i]] < 0) remap[labels[i]] = next++;
        out[i] = static_cast<std::uint8_t>(remap[labels[i]]);
    }
    return out;
}

}  // namespace

PartLabeling canonicalize(const PartLabeling& p) {
    const GridDims& dims = p.dims();
    const std::uint32_t t = dims.t;
    const std::uint64_t n = dims.side;
    if (t > 8) throw std::invalid_argument("canonicalize supports up to 8 axes");

    std::vector<std::uint32_t> perm(t);
    for (std::uint32_t i = 0; i < t; ++i) perm[i] = i;

    std::vector<std::uint8_t> best;
    std::vector<std::uint8_t> candidate(dims.cell_count());
    std::vector<std::uint64_t> ycoords(t), xcoords(t);
    do {
        for (std::uint32_t rev = 0; rev < (1u << t); ++rev) {
            for (std::uint64_t cell = 0; cell < dims.cell_count(); ++cell) {
                std::uint64_t idx = cell;
                for (std::uint32_t a = t; a-- > 0;) {
                    ycoords[a] = idx % n;
                    idx /= n;
                }
                for (std::uint32_t i = 0; i < t; ++i) {
                    std::uint64_t v = ycoords[i];
                    if (rev & (1u << i)) v = n - 1 - v;
                    xcoords[perm[i]] = v;
                }
                std::uint64_t orig = 0;
                for (std::uint32_t a = 0; a < t; ++a) orig = orig * n + xcoords[a];
                candidate[cell] = p.label(orig);
            }
            auto relabeled = relabel_first_appearance(candidate, p.parts());
            if (best.empty() || relabeled < best) best = std::move(relabeled);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    return PartLabeling(dims, p.parts(), std::move(best));
}

std::pair<std::uint64_t, std::uint64_t> search_objective(const PartLabeling& p,
                                                         std::uint32_t s) {
    auto table = projection_fraction_table(p, s);
    std::uint64_t mx = 0, sq = 0;
    for (const auto& e : table) {
        mx = std::max(mx, e.size);
        sq += e.size * e.size;
    }
    return {mx, sq};
}

SearchResult exhaustive_minmax(const SearchConfig& cfg) {
    if (cfg.s == 0 || cfg.s > cfg.dims.t) throw std::invalid_argument("need 1 <= s <= t");
    const std::uint64_t cells = cfg.dims.cell_count();
    const std::uint64_t fixed =
        (cfg.symmetry.fix_first_cell || cfg.symmetry.part_relabel) ? 1 : 0;
    const std::uint64_t states = saturating_pow(cfg.parts, cells - fixed);
    const std::uint64_t cap = enumeration_budget(std::uint64_t{1} << 34);
    if (states > cap)
        throw BudgetError("labeling space exceeds enumeration budget",
                          std::pow(static_cast<double>(cfg.parts),
                                   static_cast<double>(cells - fixed)));

    // shard by a label prefix long enough to give each worker several chunks
    const std::uint32_t shards = std::max<std::uint32_t>(1, cfg.shards);
    std::uint64_t depth = 0;
    {
        std::uint64_t count = 1;
        while (depth < cells && count < std::uint64_t{4} * shards) {
            count *= cfg.parts;
            ++depth;
        }
    }
    std::vector<std::vector<std::uint8_t>> prefixes;
    {
        std::vector<std::uint8_t> cur;
        enumerate_prefixes(cfg, depth, cur, prefixes);
    }

    std::atomic<std::uint64_t> shared_best{std::numeric_limits<std::uint64_t>::max()};
    std::vector<ShardResult> results(prefixes.size());

    const std::uint32_t workers = std::min<std::uint32_t>(
        cfg.threads ? cfg.threads
                    : std::min<std::uint32_t>(shards,
                                              std::max(1u, std::thread::hardware_concurrency())),
        static_cast<std::uint32_t>(prefixes.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= prefixes.size()) break;
            results[i] = ShardRunner(cfg, prefixes[i], shared_best).run();
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::uint32_t i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // deterministic fold: min value, then the lex-first witness in prefix order
    ShardResult best;
    std::uint64_t total_states = 0;
    for (auto& r : results) {
        total_states += r.states;
        if (r.value < best.value) {
            best.value = r.value;
            best.witness = std::move(r.witness);
        }
    }

    PartLabeling witness =
        canonicalize(PartLabeling(cfg.dims, cfg.parts, std::move(best.witness)));
    // re-verify the witness against the claimed value
    auto [mx, sq] = search_objective(witness, cfg.s);
    (void)sq;
    if (mx != best.value)
        throw std::logic_error("witness max projection disagrees with search value");
    return SearchResult{best.value, std::move(witness), total_states, true};
}

SearchResult local_search_minmax(const SearchConfig& cfg) {
    if (cfg.mode != SearchMode::anneal)
        throw std::invalid_argument("local search requires anneal mode");
    if (cfg.s == 0 || cfg.s > cfg.dims.t) throw std::invalid_argument("need 1 <= s <= t");
    const std::uint64_t cells = cfg.dims.cell_count();
    std::mt19937_64 gen(cfg.rng_seed);

    std::vector<std::uint8_t> labels(cells);
    for (auto& l : labels) l = static_cast<std::uint8_t>(gen() % cfg.parts);

    ProjectionCounter counter(cfg.dims, cfg.parts, cfg.s);
    for (std::uint64_t i = 0; i < cells; ++i) counter.add(i, labels[i]);

    auto energy = [&]() {
        return static_cast<double>(counter.max_size()) * 1e6 +
               static_cast<double>(counter.sum_squares());
    };

    std::uint64_t best_max = counter.max_size();
    std::uint64_t best_sq = counter.sum_squares();
    std::vector<std::uint8_t> best_labels = labels;

    double temperature = cfg.schedule.initial_temperature * 1e6;
    double cur_energy = energy();
    std::uint64_t states = 1;

    for (std::uint64_t step = 0; step < cfg.schedule.steps; ++step) {
        const std::uint64_t cell = gen() % cells;
        const std::uint8_t old_part = labels[cell];
        std::uint8_t new_part = static_cast<std::uint8_t>(gen() % cfg.parts);
        if (cfg.parts > 1 && new_part == old_part)
            new_part = static_cast<std::uint8_t>((new_part + 1) % cfg.parts);
        if (new_part == old_part) continue;

        counter.remove(cell, old_part);
        counter.add(cell, new_part);
        labels[cell] = new_part;
        ++states;

        const double new_energy = energy();
        const double delta = new_energy - cur_energy;
        bool accept = delta <= 0.0;
        if (!accept) {
            const double r =
                static_cast<double>(gen()) / static_cast<double>(std::mt19937_64::max());
            accept = r < std::exp(-delta / std::max(temperature, 1e-12));
        }
        if (accept) {
            cur_energy = new_energy;
            const std::uint64_t mx = counter.max_size();
            const std::uint64_t sq = counter.sum_squares();
            if (mx < best_max || (mx == best_max && sq < best_sq)) {
                best_max = mx;
                best_sq = sq;
                best_labels = labels;
            }
        } else {
            counter.remove(cell, new_part);
            counter.add(cell, old_part);
            labels[cell] = old_part;
        }
        temperature *= cfg.schedule.cooling;
    }

    PartLabeling witness(cfg.dims, cfg.parts, std::move(best_labels));
    auto [mx, sq] = search_objective(witness, cfg.s);
    (void)sq;
    if (mx != best_max) throw std::logic_error("local search bookkeeping mismatch");
    return SearchResult{best_max, std::move(witness), states, false};
}

}  // namespace projmerge
