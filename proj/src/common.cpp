#include "mmphflab/common.hpp"

#include <limits>

namespace mmphflab {

namespace {

std::string compact(const BigInt& value) {
    const auto bits = mpz_sizeinbase(value.get_mpz_t(), 2);
    if (bits <= 64) {
        return value.get_str();
    }
    return "more than 2^" + std::to_string(bits - 1);
}

}  // namespace

CapExceeded::CapExceeded(std::string cap_name, const BigInt& needed, std::uint64_t cap)
    : std::runtime_error("enumeration cap exceeded: " + cap_name + " (needed " + compact(needed) + ", cap " +
                         std::to_string(cap) + ")"),
      cap_name_(std::move(cap_name)) {}

void check_cap(std::string_view cap_name, const BigInt& needed, std::uint64_t cap) {
    if (needed > BigInt(std::to_string(cap))) {
        throw CapExceeded(std::string(cap_name), needed, cap);
    }
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    BigInt out;
    if (k > n) {
        return out;
    }
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

BigInt pow_big(const BigInt& base, std::uint64_t exponent) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

BigInt pow2(const BigInt& exponent) {
    if (exponent < 0) {
        throw InvalidInput("pow2: negative exponent");
    }
    if (!exponent.fits_ulong_p()) {
        throw InvalidInput("pow2: exponent too large to materialize");
    }
    BigInt out = 1;
    mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), exponent.get_ui());
    return out;
}

std::uint64_t ceil_log2(const BigInt& value) {
    if (value < 1) {
        throw InvalidInput("ceil_log2: value must be positive");
    }
    if (value == 1) {
        return 0;
    }
    BigInt below = value - 1;
    return mpz_sizeinbase(below.get_mpz_t(), 2);
}

Rational ratio(const BigInt& num, const BigInt& den) {
    if (den == 0) {
        throw InvalidInput("zero denominator");
    }
    Rational out(num, den);
    out.canonicalize();
    return out;
}

Rational ratio(std::uint64_t num, std::uint64_t den) {
    return ratio(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
}

std::string fraction_string(const Rational& value) {
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational parse_fraction(std::string_view text) {
    Rational out;
    if (out.set_str(std::string(text), 10) != 0) {
        throw InvalidInput("not a rational: " + std::string(text));
    }
    if (out.get_den() == 0) {
        throw InvalidInput("zero denominator: " + std::string(text));
    }
    out.canonicalize();
    return out;
}

std::uint64_t to_u64(const BigInt& value) {
    if (value < 0 || mpz_sizeinbase(value.get_mpz_t(), 2) > 64) {
        throw InvalidInput("value does not fit in 64 bits: " + value.get_str());
    }
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, value.get_mpz_t());
    return out;
}

}  // namespace mmphflab
