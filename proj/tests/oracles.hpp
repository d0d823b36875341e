#pragma once

// Brute-force reference implementations. Nothing here calls into the library
// beyond plain data types, so agreement is evidence of correctness.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Adj = std::vector<std::vector<bool>>;
using Tuple = std::vector<std::uint64_t>;

inline std::vector<Tuple> subsets(unsigned m, std::uint64_t lo, std::uint64_t hi) {
    std::vector<Tuple> out;
    Tuple cur;
    auto rec = [&](auto&& self, std::uint64_t next) -> void {
        if (cur.size() == m) {
            out.push_back(cur);
            return;
        }
        for (std::uint64_t e = next; e <= hi; ++e) {
            cur.push_back(e);
            self(self, e + 1);
            cur.pop_back();
        }
    };
    rec(rec, lo);
    return out;
}

inline bool conflict_adjacent(const Tuple& v, const Tuple& w) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (i != j && v[i] == w[j]) {
                return true;
            }
        }
    }
    return false;
}

inline bool shift_adjacent(const Tuple& v, const Tuple& w) {
    auto follows = [](const Tuple& a, const Tuple& b) {
        return std::equal(a.begin() + 1, a.end(), b.begin());
    };
    return follows(v, w) || follows(w, v);
}

inline Adj random_graph(std::mt19937_64& rng, std::size_t n, double p) {
    Adj adj(n, std::vector<bool>(n, false));
    std::bernoulli_distribution coin(p);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (coin(rng)) {
                adj[a][b] = adj[b][a] = true;
            }
        }
    }
    return adj;
}

inline bool independent_mask(const Adj& adj, std::uint64_t mask) {
    for (std::size_t a = 0; a < adj.size(); ++a) {
        if (((mask >> a) & 1U) == 0) {
            continue;
        }
        for (std::size_t b = a + 1; b < adj.size(); ++b) {
            if (((mask >> b) & 1U) != 0 && adj[a][b]) {
                return false;
            }
        }
    }
    return true;
}

/// Every independent set as a bitmask, n <= 24.
inline std::vector<std::uint64_t> independent_sets(const Adj& adj) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << adj.size()); ++mask) {
        if (independent_mask(adj, mask)) {
            out.push_back(mask);
        }
    }
    return out;
}

inline std::vector<std::uint64_t> maximal_independent_sets(const Adj& adj) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t mask : independent_sets(adj)) {
        bool maximal = true;
        for (std::size_t v = 0; v < adj.size() && maximal; ++v) {
            if (((mask >> v) & 1U) == 0 && independent_mask(adj, mask | (std::uint64_t{1} << v))) {
                maximal = false;
            }
        }
        if (maximal) {
            out.push_back(mask);
        }
    }
    return out;
}

inline unsigned independence_number(const Adj& adj) {
    unsigned best = 0;
    for (std::uint64_t mask : independent_sets(adj)) {
        best = std::max<unsigned>(best, static_cast<unsigned>(__builtin_popcountll(mask)));
    }
    return best;
}

inline unsigned clique_number(const Adj& adj) {
    Adj comp(adj.size(), std::vector<bool>(adj.size(), false));
    for (std::size_t a = 0; a < adj.size(); ++a) {
        for (std::size_t b = 0; b < adj.size(); ++b) {
            comp[a][b] = a != b && !adj[a][b];
        }
    }
    return independence_number(comp);
}

/// Tries every k-colouring for k = 1, 2, ... (n <= 9).
inline unsigned chromatic_number(const Adj& adj) {
    const std::size_t n = adj.size();
    if (n == 0) {
        return 0;
    }
    for (unsigned k = 1;; ++k) {
        std::vector<unsigned> c(n, 0);
        while (true) {
            bool proper = true;
            for (std::size_t a = 0; a < n && proper; ++a) {
                for (std::size_t b = a + 1; b < n && proper; ++b) {
                    proper = !(adj[a][b] && c[a] == c[b]);
                }
            }
            if (proper) {
                return k;
            }
            std::size_t i = 0;
            while (i < n && ++c[i] == k) {
                c[i++] = 0;
            }
            if (i == n) {
                break;
            }
        }
    }
}

/// Weak-duality check: x covers every vertex with independent sets, y packs
/// every independent set, and both values coincide.
inline bool certificates_prove(const Adj& adj, const std::vector<std::pair<std::vector<std::uint32_t>, mpq_class>>& x,
                               const std::vector<mpq_class>& y, const mpq_class& value) {
    const std::size_t n = adj.size();
    std::vector<mpq_class> cover(n, 0);
    mpq_class primal = 0;
    for (const auto& [set, w] : x) {
        if (w < 0) {
            return false;
        }
        std::uint64_t mask = 0;
        for (auto v : set) {
            mask |= std::uint64_t{1} << v;
            cover[v] += w;
        }
        if (!independent_mask(adj, mask)) {
            return false;
        }
        primal += w;
    }
    for (const auto& c : cover) {
        if (c < 1) {
            return false;
        }
    }
    if (y.size() != n) {
        return false;
    }
    mpq_class dual = 0;
    for (const auto& w : y) {
        if (w < 0) {
            return false;
        }
        dual += w;
    }
    for (std::uint64_t mask : independent_sets(adj)) {
        mpq_class load = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (((mask >> v) & 1U) != 0) {
                load += y[v];
            }
        }
        if (load > 1) {
            return false;
        }
    }
    return primal == value && dual == value;
}

inline std::uint64_t rank_below(const std::vector<std::uint64_t>& set, std::uint64_t q) {
    return static_cast<std::uint64_t>(std::count_if(set.begin(), set.end(), [q](std::uint64_t e) { return e < q; }));
}

/// Law of (X_1..X_m) by nested loops over every (Y_i, Z_i), tiny parameters only.
inline std::map<Tuple, mpq_class> hard_distribution(unsigned m, std::uint64_t k, std::uint64_t s0) {
    std::map<Tuple, mpq_class> law;
    Tuple xs;
    auto rec = [&](auto&& self, unsigned i, std::uint64_t x, std::uint64_t s, mpq_class mass) -> void {
        if (i > m) {
            law[xs] += mass;
            return;
        }
        std::uint64_t step = 1;
        for (unsigned t = 0; t < m - i + 1; ++t) {
            step *= k;
        }
        const std::uint64_t window = std::uint64_t{1} << s;
        for (std::uint64_t y = 1; y <= window; ++y) {
            for (std::uint64_t z = 1; z <= k - 1; ++z) {
                mpq_class p = mass / mpq_class(window * (k - 1));
                p.canonicalize();
                xs.push_back(x + y);
                self(self, i + 1, x + y, s - step * z, p);
                xs.pop_back();
            }
        }
    };
    rec(rec, 1, 0, s0, mpq_class(1));
    return law;
}

}  // namespace oracle
