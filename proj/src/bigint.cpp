#include "klsym/bigint.hpp"

namespace klsym {

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    if (n < 1) throw InvalidArgument("prime_factors: n must be positive");
    std::vector<std::int64_t> out;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::int64_t mult_order(std::int64_t a, std::int64_t m) {
    if (m < 2) throw InvalidArgument("mult_order: modulus must be >= 2");
    a %= m;
    if (a < 0) a += m;
    std::int64_t x = a % m, ord = 1;
    while (x != 1) {
        x = x * a % m;
        ++ord;
        if (ord > m) throw InvalidArgument("mult_order: arguments not coprime");
    }
    return ord;
}

}  // namespace klsym
