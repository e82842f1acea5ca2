#pragma once

#include <cstdint>
#include <string>

#include "hinf/errors.hpp"

namespace hinf {

using Coeff = std::uint32_t;

/// Arithmetic in GF(p) for a prime p < 2^31. Elements are kept in [0, p).
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p = 2) : p_(p)
    {
        require(is_prime(p) && p < (1u << 31), ErrorCode::InvalidArgument,
                "field modulus " + std::to_string(p) + " is not a prime below 2^31");
    }

    std::uint32_t p() const noexcept { return p_; }

    Coeff reduce(std::int64_t v) const noexcept
    {
        auto r = v % static_cast<std::int64_t>(p_);
        return static_cast<Coeff>(r < 0 ? r + p_ : r);
    }
    Coeff add(Coeff a, Coeff b) const noexcept
    {
        auto s = static_cast<std::uint64_t>(a) + b;
        return static_cast<Coeff>(s >= p_ ? s - p_ : s);
    }
    Coeff neg(Coeff a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Coeff sub(Coeff a, Coeff b) const noexcept { return add(a, neg(b)); }
    Coeff mul(Coeff a, Coeff b) const noexcept
    {
        return static_cast<Coeff>(static_cast<std::uint64_t>(a) * b % p_);
    }
    Coeff inv(Coeff a) const
    {
        require(a % p_ != 0, ErrorCode::Internal, "inverse of zero in GF(p)");
        return pow(a, p_ - 2);
    }
    Coeff pow(Coeff a, std::uint64_t e) const noexcept
    {
        Coeff r = 1 % p_;
        while (e) {
            if (e & 1)
                r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    /// (-1)^k as a field element.
    Coeff sign(int k) const noexcept { return (k & 1) ? neg(1 % p_) : 1 % p_; }

    static bool is_prime(std::uint32_t n) noexcept
    {
        if (n < 2)
            return false;
        for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
            if (n % d == 0)
                return false;
        return true;
    }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t p_;
};

}  // namespace hinf
