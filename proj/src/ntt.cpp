#include "ntt.hpp"

#include <bit>
#include <map>
#include <mutex>

#include "klsym/errors.hpp"
#include "parallel.hpp"

namespace klsym::ntt {

namespace {

constexpr std::uint64_t kGenerator = 7;  // multiplicative generator of F_P

// Montgomery arithmetic with R = 2^64.
constexpr std::uint64_t mont_ninv() {
    // -P^{-1} mod 2^64 by Newton iteration.
    std::uint64_t x = 1;
    for (int i = 0; i < 6; ++i) x *= 2 - kPrime * x;
    return ~x + 1;
}
constexpr std::uint64_t kNinv = mont_ninv();

constexpr std::uint64_t kR = (~kPrime) + 1;  // 2^64 mod P

inline std::uint64_t redc(unsigned __int128 t) {
    // (t + m*P) / 2^64 with the 129-bit sum handled via the known carry:
    // low(t) + low(m*P) is either 0 or exactly 2^64.
    std::uint64_t m = static_cast<std::uint64_t>(t) * kNinv;
    unsigned __int128 mp = static_cast<unsigned __int128>(m) * kPrime;
    unsigned __int128 r = (t >> 64) + (mp >> 64) + (static_cast<std::uint64_t>(t) != 0 ? 1 : 0);
    if (r >= kPrime) r -= kPrime;
    return static_cast<std::uint64_t>(r);
}

inline std::uint64_t mont_mul(std::uint64_t a, std::uint64_t b) {
    return redc(static_cast<unsigned __int128>(a) * b);
}

// 2^128 mod P, for entering Montgomery form.
const std::uint64_t kR2 = []() {
    unsigned __int128 r = kR % kPrime;
    r = (r * r) % kPrime;
    return static_cast<std::uint64_t>(r);
}();

inline std::uint64_t to_mont(std::uint64_t a) { return mont_mul(a, kR2); }
inline std::uint64_t from_mont(std::uint64_t a) { return redc(a); }

struct Plan {
    std::uint64_t length;
    std::vector<std::uint64_t> fwd;  // twiddles in Montgomery form, size L/2
    std::vector<std::uint64_t> inv;
    std::uint64_t inv_length_mont;
};

const Plan& get_plan(std::uint64_t L) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<Plan>> plans;
    std::lock_guard<std::mutex> lock(mu);
    auto it = plans.find(L);
    if (it != plans.end()) return *it->second;

    auto plan = std::make_unique<Plan>();
    plan->length = L;
    std::uint64_t w = pow_mod(kGenerator, (kPrime - 1) / L);
    if (pow_mod(w, L / 2) != kPrime - 1) throw InternalError("ntt: bad primitive root");
    std::uint64_t wi = pow_mod(w, kPrime - 2);
    plan->fwd.resize(L / 2);
    plan->inv.resize(L / 2);
    std::uint64_t fw = to_mont(1), iw = to_mont(1);
    std::uint64_t wm = to_mont(w), wim = to_mont(wi);
    for (std::uint64_t j = 0; j < L / 2; ++j) {
        plan->fwd[j] = fw;
        plan->inv[j] = iw;
        fw = mont_mul(fw, wm);
        iw = mont_mul(iw, wim);
    }
    plan->inv_length_mont = to_mont(pow_mod(L % kPrime, kPrime - 2));
    return *plans.emplace(L, std::move(plan)).first->second;
}

}  // namespace

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kPrime);
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    if (s < a)
        s += kR;  // wrapped 2^64: add 2^64 - P
    else if (s >= kPrime)
        s -= kPrime;
    return s;
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t n) {
    std::uint64_t r = 1;
    a %= kPrime;
    while (n) {
        if (n & 1) r = mul_mod(r, a);
        a = mul_mod(a, a);
        n >>= 1;
    }
    return r;
}

void transform(std::vector<std::uint64_t>& a, bool inverse) {
    const std::uint64_t L = a.size();
    if (L == 0 || (L & (L - 1)) != 0) throw InternalError("ntt: length must be a power of two");
    const Plan& plan = get_plan(L);
    const auto& tw = inverse ? plan.inv : plan.fwd;

    // bit reversal
    for (std::uint64_t i = 1, j = 0; i < L; ++i) {
        std::uint64_t bit = L >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::uint64_t len = 2; len <= L; len <<= 1) {
        const std::uint64_t half = len >> 1;
        const std::uint64_t stride = L / len;
        for (std::uint64_t block = 0; block < L; block += len) {
            const std::uint64_t* w = tw.data();
            for (std::uint64_t j = 0; j < half; ++j) {
                std::uint64_t u = a[block + j];
                std::uint64_t v = mont_mul(a[block + j + half], w[j * stride]);
                a[block + j] = add_mod(u, v);
                std::uint64_t d = u - v;
                if (u < v) d += kPrime;
                a[block + j + half] = d;
            }
        }
    }

    if (inverse) {
        for (auto& v : a) v = mont_mul(v, plan.inv_length_mont);
    }
}

Operand prepare(const std::vector<std::vector<std::uint64_t>>& lanes, std::int64_t m, int jobs) {
    if (m <= 0) throw InternalError("ntt: empty convolution");
    std::uint64_t L = std::bit_ceil(static_cast<std::uint64_t>(2 * m - 1));
    if (L > (1ULL << 26)) throw BudgetExceeded("ntt: transform length exceeds 2^26");
    Operand op;
    op.length = L;
    op.m = m;
    op.hat.resize(lanes.size());
    parallel_for(static_cast<std::int64_t>(lanes.size()), jobs, [&](std::int64_t c) {
        auto& lane = op.hat[static_cast<std::size_t>(c)];
        lane.assign(L, 0);
        const auto& src = lanes[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < src.size(); ++i) lane[i] = to_mont(src[i] % kPrime);
        transform(lane, false);
    });
    return op;
}

std::vector<std::vector<std::uint64_t>> multiply(const Operand& a, const Operand& b, int jobs) {
    if (a.length != b.length || a.m != b.m || a.hat.size() != b.hat.size())
        throw InternalError("ntt: operand shape mismatch");
    const std::uint64_t L = a.length;
    const std::int64_t m = a.m;
    const int lanes = static_cast<int>(a.hat.size());

    std::vector<std::vector<std::uint64_t>> out(static_cast<std::size_t>(lanes));
    parallel_for(lanes, jobs, [&](std::int64_t c) {
        std::vector<std::uint64_t> acc(L, 0);
        for (int c1 = 0; c1 < lanes; ++c1) {
            int c2 = static_cast<int>((c - c1 + lanes) % lanes);
            const auto& x = a.hat[static_cast<std::size_t>(c1)];
            const auto& y = b.hat[static_cast<std::size_t>(c2)];
            for (std::uint64_t i = 0; i < L; ++i) acc[i] = add_mod(acc[i], mont_mul(x[i], y[i]));
        }
        transform(acc, true);
        auto& lane = out[static_cast<std::size_t>(c)];
        lane.assign(static_cast<std::size_t>(m), 0);
        for (std::uint64_t i = 0; i < L; ++i) {
            std::uint64_t v = from_mont(acc[i]);
            if (v) {
                auto& slot = lane[static_cast<std::size_t>(i % static_cast<std::uint64_t>(m))];
                slot = add_mod(slot, v);
            }
        }
    });
    return out;
}

}  // namespace klsym::ntt
