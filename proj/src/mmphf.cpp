#include "mmphflab/mmphf.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "mmphflab/coloring.hpp"
#include "mmphflab/rng.hpp"

namespace mmphflab::mmphf {

void KeySet::validate() const {
    if (elements.empty()) {
        throw InvalidInput("key set must be non-empty");
    }
    if (elements.size() > universe) {
        throw InvalidInput("key set larger than its universe");
    }
    for (std::size_t j = 0; j < elements.size(); ++j) {
        if (elements[j] < 1 || elements[j] > universe) {
            throw InvalidInput("key " + std::to_string(elements[j]) + " outside [1, " + std::to_string(universe) + "]");
        }
        if (j > 0 && elements[j] <= elements[j - 1]) {
            throw InvalidInput("keys must be strictly increasing");
        }
    }
}

std::string_view scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::explicit_set: return "explicit-set";
        case Scheme::rank_map: return "rank-map";
        case Scheme::broken_constant: return "broken-constant";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    for (Scheme s : {Scheme::explicit_set, Scheme::rank_map, Scheme::broken_constant}) {
        if (scheme_name(s) == name) {
            return s;
        }
    }
    throw InvalidInput("unknown scheme: " + std::string(name));
}

void BitString::append(std::uint64_t value, unsigned width) {
    if (width > 64 || (width < 64 && (value >> width) != 0)) {
        throw InvalidInput("value does not fit in the field width");
    }
    for (unsigned b = width; b-- > 0;) {
        bits_.push_back(((value >> b) & 1U) != 0);
    }
}

void BitString::append(const BigInt& value, std::uint64_t width) {
    if (value < 0 || (value != 0 && mpz_sizeinbase(value.get_mpz_t(), 2) > width)) {
        throw InvalidInput("value does not fit in the field width");
    }
    for (std::uint64_t b = width; b-- > 0;) {
        bits_.push_back(mpz_tstbit(value.get_mpz_t(), b) != 0);
    }
}

void BitString::append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

std::uint64_t BitString::read(std::uint64_t pos, unsigned width) const {
    if (width > 64 || pos + width > bits_.size()) {
        throw CorruptIndex("read past the end of the index");
    }
    std::uint64_t out = 0;
    for (unsigned b = 0; b < width; ++b) {
        out = (out << 1) | (bits_[pos + b] ? 1U : 0U);
    }
    return out;
}

BigInt BitString::read_big(std::uint64_t pos, std::uint64_t width) const {
    if (pos + width > bits_.size()) {
        throw CorruptIndex("read past the end of the index");
    }
    BigInt out = 0;
    for (std::uint64_t b = 0; b < width; ++b) {
        if (bits_[pos + b]) {
            mpz_setbit(out.get_mpz_t(), width - 1 - b);
        }
    }
    return out;
}

BitString BitString::slice(std::uint64_t pos, std::uint64_t length) const {
    if (pos + length > bits_.size()) {
        throw InvalidInput("slice past the end");
    }
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                     bits_.begin() + static_cast<std::ptrdiff_t>(pos + length));
    return out;
}

std::string BitString::str() const {
    std::string out;
    out.reserve(bits_.size());
    for (bool b : bits_) {
        out.push_back(b ? '1' : '0');
    }
    return out;
}

BitString BitString::parse(std::string_view text) {
    BitString out;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw InvalidInput("bit strings contain only 0 and 1");
        }
        out.bits_.push_back(c == '1');
    }
    return out;
}

BigInt combinatorial_rank(const KeySet& keys) {
    keys.validate();
    BigInt out = 0;
    for (std::size_t j = 0; j < keys.size(); ++j) {
        out += binomial(keys.elements[j] - 1, j + 1);
    }
    return out;
}

namespace {

/// Visits elements from the largest down; stops when `visit` returns false.
template <typename Visit>
void colex_walk(const BigInt& rank, std::uint64_t n, std::uint64_t universe, Visit&& visit) {
    if (n < 1 || n > universe) {
        throw InvalidInput("unrank needs 1 <= n <= u");
    }
    if (rank < 0 || rank >= binomial(universe, n)) {
        throw CorruptIndex("combinatorial rank out of range");
    }
    BigInt r = rank;
    std::uint64_t hi = universe - 1;
    for (std::uint64_t j = n; j >= 1; --j) {
        // Largest c in [j - 1, hi] with C(c, j) <= r.
        std::uint64_t lo = j - 1;
        std::uint64_t top = hi;
        while (lo < top) {
            const std::uint64_t mid = lo + (top - lo + 1) / 2;
            if (binomial(mid, j) <= r) {
                lo = mid;
            } else {
                top = mid - 1;
            }
        }
        r -= binomial(lo, j);
        if (!visit(j, lo + 1)) {
            return;
        }
        hi = lo - (j > 1 ? 1 : 0);
    }
}

}  // namespace

KeySet combinatorial_unrank(const BigInt& rank, std::uint64_t n, std::uint64_t universe) {
    KeySet out;
    out.universe = universe;
    out.elements.assign(n, 0);
    colex_walk(rank, n, universe, [&](std::uint64_t j, std::uint64_t element) {
        out.elements[j - 1] = element;
        return true;
    });
    return out;
}

namespace {

constexpr unsigned rank_map_attempts = 256;
constexpr std::uint64_t rank_map_displacements = std::uint64_t{1} << 16;
constexpr unsigned displacement_width_bits = 5;

unsigned bit_width_of(std::uint64_t v) {
    unsigned w = 0;
    while (v != 0) {
        ++w;
        v >>= 1;
    }
    return w;
}

std::uint64_t bucket_count(std::uint64_t n) { return std::max<std::uint64_t>(1, (n + 3) / 4); }

std::uint64_t bucket_of(std::uint64_t q, std::uint64_t salt, std::uint64_t buckets) {
    return mix64(q ^ salt) % buckets;
}

std::uint64_t slot_of(std::uint64_t q, std::uint64_t salt, std::uint64_t d, std::uint64_t n) {
    return mix64(mix64(q + salt) + d * 0x9e3779b97f4a7c15ULL) % n;
}

BitString header(Scheme scheme, const KeySet& keys) {
    BitString out;
    out.append(static_cast<std::uint64_t>(scheme), 8);
    out.append(static_cast<std::uint64_t>(keys.size()), 64);
    out.append(keys.universe, 64);
    return out;
}

std::uint64_t explicit_width(std::uint64_t n, std::uint64_t u) { return ceil_log2(binomial(u, n)); }

std::optional<BitString> try_rank_map(const KeySet& keys, std::uint64_t seed, unsigned attempt) {
    const std::uint64_t n = keys.size();
    const std::uint64_t buckets = bucket_count(n);
    const std::uint64_t salt = derive_seed(seed, attempt);
    std::vector<std::vector<std::uint64_t>> members(buckets);  // key positions
    for (std::uint64_t j = 0; j < n; ++j) {
        members[bucket_of(keys.elements[j], salt, buckets)].push_back(j);
    }
    std::vector<std::uint64_t> order(buckets);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint64_t a, std::uint64_t b) { return members[a].size() > members[b].size(); });
    std::vector<std::uint64_t> displacement(buckets, 0);
    std::vector<std::int64_t> table(n, -1);
    for (std::uint64_t b : order) {
        if (members[b].empty()) {
            continue;
        }
        bool placed = false;
        for (std::uint64_t d = 0; d < rank_map_displacements && !placed; ++d) {
            std::vector<std::uint64_t> slots;
            bool ok = true;
            for (std::uint64_t j : members[b]) {
                const std::uint64_t s = slot_of(keys.elements[j], salt, d, n);
                if (table[s] != -1 || std::find(slots.begin(), slots.end(), s) != slots.end()) {
                    ok = false;
                    break;
                }
                slots.push_back(s);
            }
            if (!ok) {
                continue;
            }
            for (std::size_t t = 0; t < slots.size(); ++t) {
                table[slots[t]] = static_cast<std::int64_t>(members[b][t]);
            }
            displacement[b] = d;
            placed = true;
        }
        if (!placed) {
            return std::nullopt;
        }
    }
    const unsigned dwidth = bit_width_of(*std::max_element(displacement.begin(), displacement.end()));
    const auto rwidth = static_cast<unsigned>(ceil_log2(BigInt(std::to_string(n))));
    BitString out;
    out.append(attempt, 8);
    out.append(dwidth, displacement_width_bits);
    for (std::uint64_t d : displacement) {
        out.append(d, dwidth);
    }
    for (std::int64_t r : table) {
        out.append(static_cast<std::uint64_t>(r), rwidth);
    }
    return out;
}

}  // namespace

MmphfIndex build(Scheme scheme, const KeySet& keys, std::uint64_t seed) {
    keys.validate();
    MmphfIndex index;
    index.scheme = scheme;
    index.seed = seed;
    index.bits = header(scheme, keys);
    switch (scheme) {
        case Scheme::explicit_set:
            index.bits.append(combinatorial_rank(keys), explicit_width(keys.size(), keys.universe));
            break;
        case Scheme::rank_map: {
            std::optional<BitString> payload;
            for (unsigned attempt = 0; attempt < rank_map_attempts && !payload; ++attempt) {
                payload = try_rank_map(keys, seed, attempt);
            }
            if (!payload) {
                throw InternalError("rank-map construction failed for every attempt");
            }
            index.bits.append(*payload);
            break;
        }
        case Scheme::broken_constant:
            break;
    }
    return index;
}

std::uint64_t query(const MmphfIndex& index, std::uint64_t q) {
    if (index.bits.size() < header_bits) {
        throw CorruptIndex("index shorter than its header");
    }
    if (index.bits.read(0, 8) != static_cast<std::uint64_t>(index.scheme)) {
        throw CorruptIndex("scheme id mismatch");
    }
    const std::uint64_t n = index.n();
    const std::uint64_t u = index.universe();
    if (q < 1 || q > u) {
        throw InvalidInput("query " + std::to_string(q) + " outside [1, " + std::to_string(u) + "]");
    }
    switch (index.scheme) {
        case Scheme::explicit_set: {
            const std::uint64_t width = explicit_width(n, u);
            if (index.payload_bits() != width) {
                throw CorruptIndex("explicit-set payload has the wrong length");
            }
            std::uint64_t below = n;
            colex_walk(index.bits.read_big(header_bits, width), n, u, [&](std::uint64_t j, std::uint64_t element) {
                if (element < q) {
                    below = j;
                    return false;
                }
                below = j - 1;
                return true;
            });
            return std::min(below, n - 1);
        }
        case Scheme::rank_map: {
            std::uint64_t pos = header_bits;
            const std::uint64_t attempt = index.bits.read(pos, 8);
            pos += 8;
            const auto dwidth = static_cast<unsigned>(index.bits.read(pos, displacement_width_bits));
            pos += displacement_width_bits;
            const std::uint64_t buckets = bucket_count(n);
            const std::uint64_t salt = derive_seed(index.seed, attempt);
            const std::uint64_t d = index.bits.read(pos + bucket_of(q, salt, buckets) * dwidth, dwidth);
            pos += buckets * dwidth;
            const auto rwidth = static_cast<unsigned>(ceil_log2(BigInt(std::to_string(n))));
            const std::uint64_t r = index.bits.read(pos + slot_of(q, salt, d, n) * rwidth, rwidth);
            return std::min(r, n - 1);
        }
        case Scheme::broken_constant:
            return 0;
    }
    throw CorruptIndex("unknown scheme");
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> member_mismatches(const MmphfIndex& index, const KeySet& keys) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t j = 0; j < keys.size(); ++j) {
        const std::uint64_t answer = query(index, keys.elements[j]);
        if (answer != j) {
            out.emplace_back(keys.elements[j], answer);
        }
    }
    return out;
}

KeySet encode_bitstring(const std::vector<bool>& x) {
    if (x.empty()) {
        throw InvalidInput("bit string must have length >= 1");
    }
    KeySet out;
    out.universe = 3 * x.size() + 1;
    for (std::uint64_t i = 1; i <= x.size(); ++i) {
        if (x[i - 1]) {
            out.elements.push_back(3 * i - 1);
            out.elements.push_back(3 * i);
        } else {
            out.elements.push_back(3 * i);
            out.elements.push_back(3 * i + 1);
        }
    }
    return out;
}

std::vector<bool> decode_bitstring(const RankOracle& rank, std::size_t d) {
    std::vector<bool> out;
    out.reserve(d);
    for (std::uint64_t i = 1; i <= d; ++i) {
        const std::uint64_t r = rank(3 * i);
        const std::uint64_t base = 2 * (i - 1);
        if (r != base && r != base + 1) {
            throw CorruptIndex("rank(" + std::to_string(3 * i) + ") = " + std::to_string(r) + " is not " +
                               std::to_string(base) + " or " + std::to_string(base + 1));
        }
        out.push_back(r == base + 1);
    }
    return out;
}

std::vector<bool> decode_bitstring(const MmphfIndex& index, std::size_t d) {
    if (index.universe() != 3 * d + 1 || index.n() != 2 * d) {
        throw CorruptIndex("index was not built over an encoded bit string of length " + std::to_string(d));
    }
    return decode_bitstring([&](std::uint64_t q) { return query(index, q); }, d);
}

ColoringExtraction extract_coloring(Scheme scheme, const graphs::GraphSpec& spec, std::uint64_t seed,
                                    const EnumerationCaps& caps) {
    const auto* conflict = std::get_if<graphs::ConflictSpec>(&spec.variant);
    if (conflict == nullptr) {
        throw InvalidInput("coloring extraction needs a conflict graph");
    }
    ColoringExtraction out;
    out.vertices = graphs::enumerate_vertices(spec, caps);
    const std::uint64_t universe = to_u64(conflict->offset + BigInt(std::to_string(conflict->width)));
    out.colors.reserve(out.vertices.size());
    for (const auto& v : out.vertices) {
        KeySet keys;
        keys.universe = universe;
        for (const auto& e : v.elements) {
            keys.elements.push_back(to_u64(e));
        }
        out.colors.push_back(build(scheme, keys, seed).payload());
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> monochromatic_edges(const graphs::ExplicitGraph& graph,
                                                                     const ColoringExtraction& coloring) {
    if (graph.size() != coloring.colors.size()) {
        throw InvalidInput("coloring does not match the graph");
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < graph.size(); ++a) {
        if (!(graph.vertex(a) == coloring.vertices[a])) {
            throw InvalidInput("coloring vertex order does not match the graph");
        }
        for (std::size_t b = a + 1; b < graph.size(); ++b) {
            if (graph.adjacent(a, b) && coloring.colors[a] == coloring.colors[b]) {
                out.emplace_back(a, b);
            }
        }
    }
    return out;
}

std::size_t distinct_colors(const ColoringExtraction& coloring) {
    std::set<BitString> seen(coloring.colors.begin(), coloring.colors.end());
    return seen.size();
}

double lower_bound_bits(const Rational& chi_f) {
    if (chi_f <= 0) {
        throw InvalidInput("chi_f must be positive");
    }
    const double log2_chi =
        std::log2(chi_f.get_num().get_d()) - std::log2(chi_f.get_den().get_d());
    return (log2_chi - 2.0) / 2.0;
}

std::optional<Rational> lower_bound_bits_exact(const Rational& chi_f) {
    if (chi_f <= 0) {
        throw InvalidInput("chi_f must be positive");
    }
    const BigInt& num = chi_f.get_num();
    const BigInt& den = chi_f.get_den();
    if (den == 1 && mpz_popcount(num.get_mpz_t()) == 1) {
        const auto e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) - 1;
        return ratio(BigInt(std::to_string(e - 2)), 2);
    }
    if (num == 1 && mpz_popcount(den.get_mpz_t()) == 1) {
        const auto e = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;
        return ratio(BigInt(std::to_string(-e - 2)), 2);
    }
    return std::nullopt;
}

BoundReport bound_report(const std::vector<Scheme>& schemes, const graphs::GraphSpec& spec, std::uint64_t seed,
                         const EnumerationCaps& caps) {
    const auto graph = graphs::build_graph(spec, caps);
    const auto sets = graphs::maximal_independent_sets(spec, graph, caps);
    const auto chi = coloring::analyze(graph, sets, caps);
    BoundReport report;
    report.chi = chi.chi;
    report.chi_f = chi.chi_f;
    report.lower_bound_bits = lower_bound_bits(chi.chi_f);
    report.lower_bound_exact = lower_bound_bits_exact(chi.chi_f);
    for (Scheme scheme : schemes) {
        const auto extraction = extract_coloring(scheme, spec, seed, caps);
        SchemeStats stats;
        stats.scheme = scheme;
        BigInt total = 0;
        for (const auto& color : extraction.colors) {
            stats.max_payload_bits = std::max<std::uint64_t>(stats.max_payload_bits, color.size());
            stats.max_bits = std::max<std::uint64_t>(stats.max_bits, color.size() + header_bits);
            total += BigInt(std::to_string(color.size() + header_bits));
        }
        if (!extraction.colors.empty()) {
            stats.mean_bits = ratio(total, BigInt(std::to_string(extraction.colors.size())));
        }
        stats.distinct = distinct_colors(extraction);
        stats.monochromatic_edges = monochromatic_edges(graph, extraction).size();
        stats.proper = stats.monochromatic_edges == 0;
        stats.counting_bound = stats.distinct >= report.chi && Rational(report.chi) >= report.chi_f;
        report.schemes.push_back(std::move(stats));
    }
    return report;
}

Tower Tower::parse(std::string_view text) {
    Tower out;
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == '^') {
            parts.push_back(current);
            current.clear();
        } else if (c != ' ') {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (parts[i] != "2") {
            throw InvalidInput("tower descriptors use base 2 only: " + std::string(text));
        }
    }
    const std::string& last = parts.back();
    if (last.empty() || !std::all_of(last.begin(), last.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw InvalidInput("malformed tower descriptor: " + std::string(text));
    }
    out.height = static_cast<unsigned>(parts.size() - 1);
    out.top = BigInt(last);
    return out;
}

std::string Tower::str() const {
    std::string out;
    for (unsigned i = 0; i < height; ++i) {
        out += "2^";
    }
    return out + top.get_str();
}

bool Tower::ge(const BigInt& x) const {
    if (height == 0) {
        return top >= x;
    }
    if (x <= 1) {
        return true;
    }
    return Tower{height - 1, top}.ge(BigInt(std::to_string(ceil_log2(x))));
}

bool Tower::ge_double_pow2(std::uint64_t z) const {
    if (height == 0) {
        if (top < 1 || z >= 64) {
            return false;
        }
        const std::uint64_t floor_log = mpz_sizeinbase(top.get_mpz_t(), 2) - 1;
        return floor_log >= (std::uint64_t{1} << z);
    }
    if (height == 1) {
        return top >= 1 && mpz_sizeinbase(top.get_mpz_t(), 2) - 1 >= z;
    }
    return Tower{height - 2, top}.ge(BigInt(std::to_string(z)));
}

bool Tower::le_pow2(const BigInt& e) const {
    if (height == 0) {
        if (top <= 1) {
            return true;
        }
        const BigInt below = top - 1;
        return BigInt(std::to_string(mpz_sizeinbase(below.get_mpz_t(), 2))) <= e;
    }
    return !Tower{height - 1, top}.ge(e + 1);
}

bool Tower::ge_scaled_pow2(const BigInt& k, const BigInt& e) const {
    if (k < 1) {
        throw InvalidInput("scale must be positive");
    }
    if (height == 0) {
        if (top < 1) {
            return false;
        }
        if (BigInt(std::to_string(mpz_sizeinbase(top.get_mpz_t(), 2))) <= e) {
            return false;
        }
        return top >= k * pow2(e);
    }
    return Tower{height - 1, top}.ge(e + BigInt(std::to_string(ceil_log2(k))));
}

BigInt UniverseParams::u_prime() const {
    if (!exponent.fits_ulong_p() || exponent > BigInt(1) << 32) {
        throw InvalidInput("u' = k * 2^" + exponent.get_str() + " is too large to materialize");
    }
    return BigInt(std::to_string(k)) * pow2(exponent);
}

UniverseParams parameterize(std::uint64_t n, const Tower& u) {
    constexpr std::uint64_t max_m = 1024;
    constexpr std::uint64_t max_n = 4096;
    if (n < 2) {
        throw InvalidInput("parameterize needs n >= 2");
    }
    if (n > max_n) {
        throw InvalidInput("parameterize supports n <= " + std::to_string(max_n));
    }
    if (!u.ge(4)) {
        throw InvalidInput("u must be >= 4 so that log2 log2 u >= 1 and m >= 1");
    }
    UniverseParams out;
    out.n = n;
    out.u = u;
    std::uint64_t m = 1;
    while (true) {
        const std::uint64_t next = m + 1;
        if (next > max_m) {
            throw InvalidInput("u too large: m exceeds " + std::to_string(max_m));
        }
        if (!u.ge_double_pow2(next * next * next * next * next * next)) {
            break;
        }
        m = next;
    }
    out.m = m;
    out.k = n / m;
    out.exponent = pow_big(BigInt(std::to_string(m)), m * m + m);
    out.u_prime_le_u = out.k == 0 || u.ge_scaled_pow2(BigInt(std::to_string(out.k)), out.exponent);
    out.m_le_sqrt_n = m * m <= n;
    out.below_upper_range = u.le_pow2(pow_big(BigInt(std::to_string(n)), n * n + n));
    const long double log_n = std::log2(static_cast<long double>(n));
    const long double lower = log_n + std::exp2(std::sqrt(std::log2(log_n)));
    out.above_lower_range = u.ge_scaled_pow2(1, BigInt(std::to_string(static_cast<std::uint64_t>(std::ceil(lower)))));
    return out;
}

nlohmann::json to_json(const KeySet& keys) { return {{"universe", keys.universe}, {"elements", keys.elements}}; }

nlohmann::json to_json(const MmphfIndex& index) {
    return {{"scheme", scheme_name(index.scheme)},
            {"seed", index.seed},
            {"size_bits", index.size_bits()},
            {"header_bits", header_bits},
            {"payload_bits", index.payload_bits()},
            {"payload", index.payload().str()}};
}

nlohmann::json to_json(const ColoringExtraction& coloring) {
    auto out = nlohmann::json::array();
    for (std::size_t i = 0; i < coloring.vertices.size(); ++i) {
        out.push_back({{"vertex", coloring.vertices[i].str()}, {"color", coloring.colors[i].str()}});
    }
    return out;
}

nlohmann::json to_json(const BoundReport& report) {
    auto schemes = nlohmann::json::array();
    for (const auto& s : report.schemes) {
        schemes.push_back({{"scheme", scheme_name(s.scheme)},
                           {"max_bits", s.max_bits},
                           {"max_payload_bits", s.max_payload_bits},
                           {"mean_bits", fraction_string(s.mean_bits)},
                           {"distinct", s.distinct},
                           {"monochromatic_edges", s.monochromatic_edges},
                           {"proper", s.proper},
                           {"counting_bound", s.counting_bound}});
    }
    nlohmann::json out = {{"chi", report.chi},
                          {"chi_f", fraction_string(report.chi_f)},
                          {"lower_bound_bits", report.lower_bound_bits},
                          {"schemes", schemes}};
    out["lower_bound_bits_exact"] =
        report.lower_bound_exact ? nlohmann::json(fraction_string(*report.lower_bound_exact)) : nlohmann::json();
    return out;
}

nlohmann::json to_json(const UniverseParams& params) {
    nlohmann::json out = {{"n", params.n},
                          {"u", params.u.str()},
                          {"m", params.m},
                          {"k", params.k},
                          {"u_prime", std::to_string(params.k) + "*2^" + params.exponent.get_str()},
                          {"u_prime_le_u", params.u_prime_le_u},
                          {"m_le_sqrt_n", params.m_le_sqrt_n},
                          {"below_upper_range", params.below_upper_range},
                          {"above_lower_range", params.above_lower_range}};
    if (mpz_popcount(BigInt(std::to_string(params.k)).get_mpz_t()) == 1) {
        const auto log_k = mpz_sizeinbase(BigInt(std::to_string(params.k)).get_mpz_t(), 2) - 1;
        out["u_prime_pow2"] = BigInt(params.exponent + log_k).get_str();
    }
    return out;
}

KeySet read_keyset(std::istream& in) {
    KeySet out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        try {
            if (!header_seen) {
                if (line.rfind("u=", 0) != 0) {
                    throw InvalidInput("key set file must start with a u= line");
                }
                out.universe = std::stoull(line.substr(2));
                header_seen = true;
            } else {
                out.elements.push_back(std::stoull(line));
            }
        } catch (const std::logic_error&) {
            throw InvalidInput("malformed key set line: " + line);
        }
    }
    if (!header_seen) {
        throw InvalidInput("key set file must start with a u= line");
    }
    out.validate();
    return out;
}

void write_keyset(std::ostream& out, const KeySet& keys) {
    out << "u=" << keys.universe << '\n';
    for (std::uint64_t e : keys.elements) {
        out << e << '\n';
    }
}

}  // namespace mmphflab::mmphf
