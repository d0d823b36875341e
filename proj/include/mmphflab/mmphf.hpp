#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mmphflab/common.hpp"
#include "mmphflab/graphs.hpp"

namespace mmphflab::mmphf {

/// Strictly increasing keys in [1, universe].
struct KeySet {
    std::vector<std::uint64_t> elements;
    std::uint64_t universe = 1;

    std::size_t size() const noexcept { return elements.size(); }
    /// Throws InvalidInput unless 1 <= n <= u and keys increase strictly.
    void validate() const;
};

enum class Scheme : std::uint8_t { explicit_set = 1, rank_map = 2, broken_constant = 3 };

std::string_view scheme_name(Scheme scheme);
Scheme parse_scheme(std::string_view name);

/// Append-only bit string, most significant bit of each field first.
class BitString {
public:
    void append(std::uint64_t value, unsigned width);
    void append(const BigInt& value, std::uint64_t width);
    void append(const BitString& other);

    std::uint64_t read(std::uint64_t pos, unsigned width) const;
    BigInt read_big(std::uint64_t pos, std::uint64_t width) const;

    std::uint64_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    bool operator[](std::uint64_t pos) const { return bits_.at(pos); }
    /// Sub-string [pos, pos + length).
    BitString slice(std::uint64_t pos, std::uint64_t length) const;

    std::string str() const;
    static BitString parse(std::string_view text);

    friend bool operator==(const BitString& a, const BitString& b) { return a.bits_ == b.bits_; }
    friend bool operator<(const BitString& a, const BitString& b) { return a.bits_ < b.bits_; }

private:
    std::vector<bool> bits_;
};

class CorruptIndex : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Header: 8-bit scheme id, 64-bit n, 64-bit u.
inline constexpr std::uint64_t header_bits = 8 + 64 + 64;

struct MmphfIndex {
    Scheme scheme = Scheme::explicit_set;
    BitString bits;  // header followed by payload
    std::uint64_t seed = 0;

    std::uint64_t size_bits() const noexcept { return bits.size(); }
    std::uint64_t payload_bits() const noexcept { return bits.size() - header_bits; }
    BitString payload() const { return bits.slice(header_bits, payload_bits()); }
    std::uint64_t n() const { return bits.read(8, 64); }
    std::uint64_t universe() const { return bits.read(72, 64); }
};

/// Colex rank sum_j C(s_j - 1, j) of the key set among all n-subsets of [u].
BigInt combinatorial_rank(const KeySet& keys);
KeySet combinatorial_unrank(const BigInt& rank, std::uint64_t n, std::uint64_t universe);

MmphfIndex build(Scheme scheme, const KeySet& keys, std::uint64_t seed = 0);

/// 0-indexed count of members strictly below q for members; some value in
/// [0, n-1] otherwise. Throws InvalidInput when q is outside [1, u].
std::uint64_t query(const MmphfIndex& index, std::uint64_t q);

/// Keys whose answer differs from their rank, as (key, answer) pairs.
std::vector<std::pair<std::uint64_t, std::uint64_t>> member_mismatches(const MmphfIndex& index, const KeySet& keys);

/// S(x) over [3d + 1]: 3i always, 3i - 1 when x_i = 1, 3i + 1 when x_i = 0.
KeySet encode_bitstring(const std::vector<bool>& x);

using RankOracle = std::function<std::uint64_t(std::uint64_t)>;
/// x_i = rank(3i) - 2(i - 1); throws CorruptIndex when out of {0, 1}.
std::vector<bool> decode_bitstring(const RankOracle& rank, std::size_t d);
std::vector<bool> decode_bitstring(const MmphfIndex& index, std::size_t d);

struct ColoringExtraction {
    std::vector<graphs::Vertex> vertices;  // canonical order
    std::vector<BitString> colors;         // index payload per vertex
};

/// Builds an index for every vertex of a conflict graph (vertex = key set).
ColoringExtraction extract_coloring(Scheme scheme, const graphs::GraphSpec& spec, std::uint64_t seed,
                                    const EnumerationCaps& caps = {});

/// Edges of `graph` whose endpoints share a colour. Vertex order must match.
std::vector<std::pair<std::size_t, std::size_t>> monochromatic_edges(const graphs::ExplicitGraph& graph,
                                                                     const ColoringExtraction& coloring);

std::size_t distinct_colors(const ColoringExtraction& coloring);

struct SchemeStats {
    Scheme scheme = Scheme::explicit_set;
    std::uint64_t max_bits = 0;
    Rational mean_bits;
    std::uint64_t max_payload_bits = 0;
    std::size_t distinct = 0;
    std::size_t monochromatic_edges = 0;
    bool proper = false;
    /// distinct >= chi >= chi_f.
    bool counting_bound = false;
};

struct BoundReport {
    Rational chi_f;
    unsigned chi = 0;
    double lower_bound_bits = 0.0;
    /// Set when chi_f is a power of two, so the bound is rational.
    std::optional<Rational> lower_bound_exact;
    std::vector<SchemeStats> schemes;
};

/// (log2 chi_f - 2) / 2.
double lower_bound_bits(const Rational& chi_f);
std::optional<Rational> lower_bound_bits_exact(const Rational& chi_f);

BoundReport bound_report(const std::vector<Scheme>& schemes, const graphs::GraphSpec& spec, std::uint64_t seed,
                         const EnumerationCaps& caps = {});

/// Power tower 2^2^...^top with `height` twos; height 0 is the plain integer.
struct Tower {
    unsigned height = 0;
    BigInt top;

    /// Accepts "2^2^64", "2^73" or a decimal integer.
    static Tower parse(std::string_view text);
    std::string str() const;

    /// value >= x, exactly.
    bool ge(const BigInt& x) const;
    /// value >= 2^(2^z), exactly.
    bool ge_double_pow2(std::uint64_t z) const;
    /// value <= 2^e, exactly.
    bool le_pow2(const BigInt& e) const;
    /// value >= k * 2^e, exactly (k >= 1).
    bool ge_scaled_pow2(const BigInt& k, const BigInt& e) const;
};

struct UniverseParams {
    std::uint64_t n = 0;
    Tower u;
    std::uint64_t m = 0;
    std::uint64_t k = 0;
    /// u' = k * 2^exponent, exponent = m^(m^2 + m).
    BigInt exponent;
    bool u_prime_le_u = false;
    bool m_le_sqrt_n = false;
    /// u <= 2^(n^(n^2+n)), exact.
    bool below_upper_range = false;
    /// u >= n * 2^(2^sqrt(log2 log2 n)), evaluated in long double.
    bool above_lower_range = false;

    bool in_range() const noexcept { return below_upper_range && above_lower_range; }
    /// u' as an exact integer; throws when it is too large to materialize.
    BigInt u_prime() const;
};

/// Throws InvalidInput when n < 2, u < 4, or log2 log2 u < 1.
UniverseParams parameterize(std::uint64_t n, const Tower& u);

nlohmann::json to_json(const KeySet& keys);
nlohmann::json to_json(const MmphfIndex& index);
nlohmann::json to_json(const ColoringExtraction& coloring);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const UniverseParams& params);

/// Newline-delimited decimals after a "u=<universe>" header line.
KeySet read_keyset(std::istream& in);
void write_keyset(std::ostream& out, const KeySet& keys);

}  // namespace mmphflab::mmphf
