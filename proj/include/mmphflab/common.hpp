#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mmphflab {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Enumeration limits shared by every module. Exceeding one is always an
/// error (CapExceeded), never a silent truncation.
struct EnumerationCaps {
    std::uint64_t max_vertices = 1'000'000;
    std::uint64_t max_label_functions = 59'049;  // 3^10
    std::uint64_t max_outcomes = 10'000'000;
    std::uint64_t max_tree_nodes = 2'000'000;
    std::uint64_t max_window = 1'000'000;
};

class CapExceeded : public std::runtime_error {
public:
    CapExceeded(std::string cap_name, const BigInt& needed, std::uint64_t cap);

    const std::string& cap_name() const noexcept { return cap_name_; }

private:
    std::string cap_name_;
};

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Internal invariant broken (LP infeasible where it cannot be, etc.).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Throws CapExceeded when needed > cap.
void check_cap(std::string_view cap_name, const BigInt& needed, std::uint64_t cap);

BigInt binomial(std::uint64_t n, std::uint64_t k);
BigInt pow_big(const BigInt& base, std::uint64_t exponent);
BigInt pow2(const BigInt& exponent);

/// Smallest e with 2^e >= value (value >= 1).
std::uint64_t ceil_log2(const BigInt& value);

/// Canonical num/den.
Rational ratio(const BigInt& num, const BigInt& den);
Rational ratio(std::uint64_t num, std::uint64_t den);

/// Rationals always render as "p/q", including integers ("2/1").
std::string fraction_string(const Rational& value);
Rational parse_fraction(std::string_view text);

std::uint64_t to_u64(const BigInt& value);

}  // namespace mmphflab
