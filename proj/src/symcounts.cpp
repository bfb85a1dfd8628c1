#include "klsym/symcounts.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace klsym {

namespace {

void require_hypotheses(int n, std::int64_t p, int k) {
    if (n < 1) throw InvalidArgument("n must be >= 1");
    if (k < 0) throw InvalidArgument("k must be >= 0");
    if (std::gcd(static_cast<std::int64_t>(n), p) != 1)
        throw InvalidArgument("S_k(n,p) requires (n, p) = 1");
}

SymTuple rotate(const SymTuple& j) {
    // sigma(j_0, ..., j_{n-1}) = (j_{n-1}, j_0, ..., j_{n-2})
    SymTuple out(j.size());
    out[0] = j.back();
    std::copy(j.begin(), j.end() - 1, out.begin() + 1);
    return out;
}

}  // namespace

std::vector<SymTuple> s_k_set(int n, std::int64_t p, int k, std::int64_t zeta_exponent) {
    require_hypotheses(n, p, k);
    FieldPtr F;
    Coords zeta;
    if (n == 1) {
        F = get_field(p, 1);
        zeta = F->one();
    } else {
        int e = static_cast<int>(mult_order(p, n));
        F = get_field(p, e);
        zeta = F->nth_root_of_unity(n);
        if (std::gcd(zeta_exponent, static_cast<std::int64_t>(n)) != 1)
            throw InvalidArgument("zeta exponent must be coprime to n");
        zeta = F->pow(zeta, static_cast<std::uint64_t>(zeta_exponent % n));
    }
    std::vector<Coords> zeta_pows(static_cast<std::size_t>(n));
    zeta_pows[0] = F->one();
    for (int i = 1; i < n; ++i) zeta_pows[static_cast<std::size_t>(i)] = F->mul(zeta_pows[static_cast<std::size_t>(i - 1)], zeta);

    std::vector<SymTuple> out;
    SymTuple j(static_cast<std::size_t>(n), 0);
    j[0] = k;
    // odometer over compositions of k into n parts
    for (;;) {
        Coords acc = F->zero();
        for (int i = 0; i < n; ++i)
            if (j[static_cast<std::size_t>(i)] != 0)
                acc = F->add(acc, F->mul_scalar(zeta_pows[static_cast<std::size_t>(i)], j[static_cast<std::size_t>(i)]));
        if (F->is_zero(acc)) out.push_back(j);

        // next composition
        if (n == 1 || j[static_cast<std::size_t>(n - 1)] == k) break;
        int i = n - 2;
        while (i >= 0 && j[static_cast<std::size_t>(i)] == 0) --i;
        if (i < 0) break;
        --j[static_cast<std::size_t>(i)];
        int tail = 1;
        for (int t = i + 1; t < n; ++t) {
            tail += j[static_cast<std::size_t>(t)];
            j[static_cast<std::size_t>(t)] = 0;
        }
        j[static_cast<std::size_t>(i + 1)] = tail;
    }
    return out;
}

std::int64_t d_k(int n, std::int64_t p, int k) {
    return static_cast<std::int64_t>(s_k_set(n, p, k).size());
}

std::map<SymTuple, std::int64_t> v_vector(const SymTuple& rep, int n, int k) {
    if (static_cast<int>(rep.size()) != n) throw InvalidArgument("tuple has wrong length");
    // v_j = sum_i beta^{j_{n-1} + ... + j_{n-i}} e^{sigma^i(j)} with beta = 1
    // for odd n and beta = -1 for even n.
    std::map<SymTuple, std::int64_t> acc;
    SymTuple cur = rep;
    int sign_exp = 0;
    for (int i = 0; i < n; ++i) {
        std::int64_t sign = (n % 2 == 1) ? 1 : (sign_exp % 2 == 0 ? 1 : -1);
        acc[cur] += sign;
        sign_exp += rep[static_cast<std::size_t>(n - 1 - i)];
        cur = rotate(cur);
    }
    (void)k;
    return acc;
}

SymCounts sym_counts(int n, std::int64_t p, int k) {
    std::vector<SymTuple> tuples = s_k_set(n, p, k);

    // the defining relation is sigma-stable; assert it
    std::set<SymTuple> members(tuples.begin(), tuples.end());
    for (const auto& j : tuples)
        if (!members.count(rotate(j))) throw InternalError("S_k(n,p) is not sigma-stable");

    SymCounts out;
    out.d = static_cast<std::int64_t>(tuples.size());

    std::set<SymTuple> seen;
    for (const auto& j : tuples) {
        if (seen.count(j)) continue;
        SymOrbit orbit;
        std::vector<SymTuple> orbit_members;
        SymTuple cur = j;
        do {
            orbit_members.push_back(cur);
            seen.insert(cur);
            cur = rotate(cur);
        } while (cur != j);
        orbit.size = static_cast<int>(orbit_members.size());
        orbit.rep = *std::min_element(orbit_members.begin(), orbit_members.end());

        auto flags_of = [&](const SymTuple& t) {
            bool nz = false;
            for (const auto& [mono, coeff] : v_vector(t, n, k)) {
                (void)mono;
                if (coeff != 0) nz = true;
            }
            std::int64_t w = 0;
            for (int i = 1; i < n; ++i) w += static_cast<std::int64_t>(i) * t[static_cast<std::size_t>(i)];
            return std::make_pair(nz, w % 2 != 0);
        };
        auto [nz, wodd] = flags_of(orbit.rep);
        orbit.v_nonzero = nz;
        orbit.weighted_odd = wodd;
        // the flags only feed the bad-factor formulas for even k (and even n
        // for the parity); there they are representative-independent
        if (k % 2 == 0) {
            for (const auto& t : orbit_members) {
                auto [nz2, wodd2] = flags_of(t);
                if (nz2 != nz) throw InternalError("v_j vanishing depends on the orbit representative");
                if (n % 2 == 0 && wodd2 != wodd)
                    throw InternalError("weighted parity depends on the orbit representative");
            }
        }

        out.orbits.push_back(std::move(orbit));
    }

    std::sort(out.orbits.begin(), out.orbits.end(),
              [](const SymOrbit& a, const SymOrbit& b) { return a.rep < b.rep; });
    out.a = static_cast<std::int64_t>(out.orbits.size());
    for (const auto& orbit : out.orbits) {
        if (orbit.size <= 0 || n % orbit.size != 0) throw InternalError("orbit size does not divide n");
        if (orbit.v_nonzero) {
            ++out.b;
            if (orbit.weighted_odd) ++out.c;
        }
    }
    return out;
}

}  // namespace klsym
