#include "klsym/global_l.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "klsym/closed_forms.hpp"
#include "parallel.hpp"

namespace klsym {

namespace {

// Fixed-width signed integers for the n = 2 trace kernel; `checked` makes an
// overflow throw instead of truncating, and the caller falls back to the
// arbitrary-precision path.
using I256 = boost::multiprecision::number<
    boost::multiprecision::cpp_int_backend<256, 256, boost::multiprecision::signed_magnitude,
                                           boost::multiprecision::checked, void>>;

constexpr int kMaxWidth = 12;  // power-basis width p-1; fast path needs p <= 13

struct CycFix {
    std::array<I256, kMaxWidth> c{};
};

// out = a * b in Z[zeta_p], via the redundant length-p accumulator.
void cyc_mul(const CycFix& a, const CycFix& b, int w, CycFix& out, std::array<I256, kMaxWidth + 1>& red) {
    const int p = w + 1;
    for (int i = 0; i <= w; ++i) red[static_cast<std::size_t>(i)] = 0;
    for (int i = 0; i < w; ++i) {
        if (a.c[static_cast<std::size_t>(i)].is_zero()) continue;
        for (int j = 0; j < w; ++j) {
            if (b.c[static_cast<std::size_t>(j)].is_zero()) continue;
            int idx = i + j;
            if (idx >= p) idx -= p;
            red[static_cast<std::size_t>(idx)] += a.c[static_cast<std::size_t>(i)] * b.c[static_cast<std::size_t>(j)];
        }
    }
    for (int i = 0; i < w; ++i)
        out.c[static_cast<std::size_t>(i)] = red[static_cast<std::size_t>(i)] - red[static_cast<std::size_t>(w)];
}

void cyc_scalar_mul_sub(CycFix& target, const CycFix& a, const I256& s, int w) {
    // target = a_scaled subtracted: target -= s * a
    for (int i = 0; i < w; ++i) target.c[static_cast<std::size_t>(i)] -= s * a.c[static_cast<std::size_t>(i)];
}

CycInt to_cyc_int(const CycFix& v, int w, std::int64_t p) {
    CycInt z(p);
    for (int i = 0; i < w; ++i) z.coord(static_cast<std::size_t>(i)) = BigInt(v.c[static_cast<std::size_t>(i)].str());
    return z;
}

// One degree group of the n=2 kernel: every point of degree d contributes
// d * h_k(eigenvalue j-th powers) to S_{d*j} for d*j <= N.
void n2_group_fast(KlStore& store, const FieldPtr& base, int d, int k, int N,
                   std::vector<CycInt>& sums) {
    const std::int64_t p = base->p();
    const int w = static_cast<int>(p - 1);
    if (w > kMaxWidth) throw std::overflow_error("width exceeds the fast kernel");
    const auto& points = closed_points_of_degree(base, d);
    if (points.empty()) return;
    FieldPtr ext = points.front().ext;
    KlTablePtr table = store.table(2, ext);

    const int jmax = N / d;
    BigInt Qd_big = big_pow(BigInt(base->q()), static_cast<std::uint64_t>(d));
    I256 Qd(Qd_big.str());
    std::vector<I256> Qd_pow(static_cast<std::size_t>(jmax) + 1);
    Qd_pow[0] = 1;
    for (int j = 1; j <= jmax; ++j) Qd_pow[static_cast<std::size_t>(j)] = Qd_pow[static_cast<std::size_t>(j - 1)] * Qd;

    const int jobs = store.jobs();
    std::vector<std::vector<CycFix>> partial(static_cast<std::size_t>(std::max(1, jobs)),
                                             std::vector<CycFix>(static_cast<std::size_t>(jmax) + 1));
    std::atomic<std::int64_t> cursor{0};
    std::vector<std::thread> threads;
    const std::int64_t count = static_cast<std::int64_t>(points.size());
    const std::int64_t chunk = 1024;

    std::exception_ptr worker_error;
    std::mutex error_mu;

    auto worker_body = [&](int tid) {
        auto& acc = partial[static_cast<std::size_t>(tid)];
        std::array<I256, kMaxWidth + 1> red;
        std::vector<CycFix> psum(static_cast<std::size_t>(jmax) + 1);
        std::vector<CycFix> h(static_cast<std::size_t>(k) + 1);
        for (;;) {
            std::int64_t lo = cursor.fetch_add(chunk);
            if (lo >= count) break;
            std::int64_t hi = std::min(count, lo + chunk);
            for (std::int64_t idx = lo; idx < hi; ++idx) {
                const ClosedPoint& pt = points[static_cast<std::size_t>(idx)];
                const std::int64_t* raw = table->raw(pt.rank);
                // p_1 = -Kl_2; p_2 = p_1^2 - 2 Qd; p_j = p_1 p_{j-1} - Qd p_{j-2}
                CycFix p1;
                for (int i = 0; i < w; ++i) p1.c[static_cast<std::size_t>(i)] = -raw[i];
                psum[1] = p1;
                for (int j = 2; j <= jmax; ++j) {
                    cyc_mul(p1, psum[static_cast<std::size_t>(j - 1)], w, psum[static_cast<std::size_t>(j)], red);
                    if (j == 2) {
                        psum[2].c[0] -= Qd;
                        psum[2].c[0] -= Qd;
                    } else {
                        cyc_scalar_mul_sub(psum[static_cast<std::size_t>(j)], psum[static_cast<std::size_t>(j - 2)], Qd, w);
                    }
                }
                for (int j = 1; j <= jmax; ++j) {
                    // h-recursion with e'_1 = p_j, e'_2 = Qd^j
                    const CycFix& e1 = psum[static_cast<std::size_t>(j)];
                    const I256& e2 = Qd_pow[static_cast<std::size_t>(j)];
                    h[0] = CycFix{};
                    h[0].c[0] = 1;
                    if (k >= 1) h[1] = e1;
                    for (int r = 2; r <= k; ++r) {
                        cyc_mul(e1, h[static_cast<std::size_t>(r - 1)], w, h[static_cast<std::size_t>(r)], red);
                        cyc_scalar_mul_sub(h[static_cast<std::size_t>(r)], h[static_cast<std::size_t>(r - 2)], e2, w);
                    }
                    CycFix& slot = acc[static_cast<std::size_t>(j)];
                    const CycFix& hk = h[static_cast<std::size_t>(k)];
                    for (int i = 0; i < w; ++i) slot.c[static_cast<std::size_t>(i)] += hk.c[static_cast<std::size_t>(i)];
                }
            }
        }
    };
    auto worker = [&](int tid) {
        try {
            worker_body(tid);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!worker_error) worker_error = std::current_exception();
            cursor.store(count);  // stop the other workers
        }
    };

    if (jobs <= 1) {
        worker(0);
    } else {
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker, t);
        for (auto& t : threads) t.join();
    }
    if (worker_error) std::rethrow_exception(worker_error);

    for (int j = 1; j <= jmax; ++j) {
        CycFix total;
        for (const auto& part : partial)
            for (int i = 0; i < w; ++i) total.c[static_cast<std::size_t>(i)] += part[static_cast<std::size_t>(j)].c[static_cast<std::size_t>(i)];
        CycInt value = to_cyc_int(total, w, p) * BigInt(d);
        sums[static_cast<std::size_t>(d * j - 1)] += value;
    }
}

void group_generic(KlStore& store, int n, const FieldPtr& base, int d, int k, int N,
                   std::vector<CycInt>& sums) {
    const auto& points = closed_points_of_degree(base, d);
    const int jmax = N / d;
    const std::int64_t p = base->p();
    std::vector<CycInt> acc(static_cast<std::size_t>(jmax), CycInt(p));
    for (const ClosedPoint& pt : points) {
        LocalFactor lf = local_factor(store, pt, n);
        for (int j = 1; j <= jmax; ++j) acc[static_cast<std::size_t>(j - 1)] += sym_trace(lf, k, j);
    }
    for (int j = 1; j <= jmax; ++j)
        sums[static_cast<std::size_t>(d * j - 1)] += acc[static_cast<std::size_t>(j - 1)] * BigInt(d);
}

std::vector<BigInt> finish_sums(std::vector<CycInt>& sums) {
    std::vector<BigInt> out;
    out.reserve(sums.size());
    for (std::size_t m = 0; m < sums.size(); ++m) {
        auto v = sums[m].as_integer();
        if (!v) throw InternalError("S_" + std::to_string(m + 1) + " is not a rational integer");
        out.push_back(*v);
    }
    return out;
}

std::vector<BigInt> dirichlet_sums_impl(KlStore& store, int n, int k, const FieldPtr& base, int N,
                                        bool allow_fast) {
    if (N < 0) throw InvalidArgument("truncation must be >= 0");
    // Plan feasibility before any enumeration: degree-d points need Kloosterman
    // tables over F_{q^{d j}} for j <= n-1, up to d = N.
    const double log2_q = base->e() * std::log2(static_cast<double>(base->p()));
    for (int d = 1; d <= N; ++d) {
        for (int j = 1; j <= std::max(1, n - 1); ++j) {
            if (!store.table_feasible(n, base->p(), log2_q * d * j))
                throw BudgetExceeded("truncation " + std::to_string(N) + " needs Kloosterman tables over F_{" +
                                     std::to_string(base->p()) + "^" + std::to_string(base->e() * d * j) +
                                     "}, beyond the table budgets");
        }
    }
    std::vector<CycInt> sums(static_cast<std::size_t>(N), CycInt(base->p()));
    for (int d = 1; d <= N; ++d) {
        bool fast = allow_fast && n == 2 && base->p() <= kMaxWidth + 1;
        if (fast) {
            // conservative coordinate-growth estimate for the checked 256-bit kernel
            double bits = std::log2(static_cast<double>(k + 1)) +
                          (static_cast<double>(N) / d) * (k + 2) / 2.0 *
                              std::log2(static_cast<double>(base->q())) * d +
                          16;
            if (bits > 250) fast = false;
        }
        if (fast) {
            try {
                n2_group_fast(store, base, d, k, N, sums);
            } catch (const std::overflow_error&) {
                group_generic(store, n, base, d, k, N, sums);
            }
        } else {
            group_generic(store, n, base, d, k, N, sums);
        }
    }
    return finish_sums(sums);
}

}  // namespace

std::vector<BigInt> dirichlet_sums(KlStore& store, int n, int k, const FieldPtr& base, int N) {
    return dirichlet_sums_impl(store, n, k, base, N, true);
}

std::vector<BigInt> dirichlet_sums_reference(KlStore& store, int n, int k, const FieldPtr& base, int N) {
    return dirichlet_sums_impl(store, n, k, base, N, false);
}

RatSeries euler_product_series(KlStore& store, int n, int k, const FieldPtr& base, int N) {
    const std::int64_t p = base->p();
    // accumulate prod 1 / det(1 - F T^d, Sym^k) over points of degree <= N,
    // as a CycInt series; the result must have rational-integer coordinates
    std::vector<CycInt> series(static_cast<std::size_t>(N) + 1, CycInt(p));
    series[0] = CycInt::from_integer(p, 1);
    for (int d = 1; d <= N; ++d) {
        for (const ClosedPoint& pt : closed_points_of_degree(base, d)) {
            LocalFactor lf = local_factor(store, pt, n);
            std::vector<CycInt> f = sym_local_factor(lf, k);  // in T
            // inverse of f(T^d) mod T^{N+1}
            std::vector<CycInt> inv(static_cast<std::size_t>(N) + 1, CycInt(p));
            inv[0] = CycInt::from_integer(p, 1);
            for (int m = 1; m <= N; ++m) {
                CycInt acc(p);
                for (int i = 1; i * d <= m && i < static_cast<int>(f.size()); ++i)
                    acc += f[static_cast<std::size_t>(i)] * inv[static_cast<std::size_t>(m - i * d)];
                inv[static_cast<std::size_t>(m)] = -acc;
            }
            // series *= inv
            std::vector<CycInt> next(static_cast<std::size_t>(N) + 1, CycInt(p));
            for (int i = 0; i <= N; ++i) {
                if (series[static_cast<std::size_t>(i)].is_zero()) continue;
                for (int j = 0; i + j <= N; ++j)
                    next[static_cast<std::size_t>(i + j)] += series[static_cast<std::size_t>(i)] * inv[static_cast<std::size_t>(j)];
            }
            series = std::move(next);
        }
    }
    RatSeries out;
    out.c.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        auto v = series[i].as_integer();
        if (!v) throw InternalError("Euler product coefficient is not a rational integer");
        out.c.emplace_back(*v);
    }
    return out;
}

ComputeResult compute_L(KlStore& store, int n, int k, const FieldPtr& base, const ComputeOptions& options) {
    if (std::gcd(static_cast<std::int64_t>(n), base->p()) != 1)
        throw InvalidArgument("compute_L requires (n, p) = 1");
    ComputeResult out;
    out.options = options;
    out.counts = sym_counts(n, base->p(), k);
    out.degree_predicted = degree_from_counts(n, base->p(), k, out.counts);

    const int D = static_cast<int>(out.degree_predicted);
    const int N = options.mode == ComputeMode::guarded ? D + options.guard : D;
    out.truncation = N;
    out.sums = dirichlet_sums(store, n, k, base, N);
    RatSeries series = series_exp(out.sums);

    if (options.mode == ComputeMode::guarded) {
        out.L = reconstruct(series, D, options.den_bound);
    } else {
        std::vector<BigInt> coeffs;
        coeffs.reserve(static_cast<std::size_t>(D) + 1);
        for (int i = 0; i <= D; ++i) coeffs.push_back(numerator(series.coeff(i)));
        out.L.num = IntPoly(std::move(coeffs));
        out.L.den = IntPoly::one();
        out.L.degree_trusted = true;
    }
    return out;
}

bool congruence_check(const LPoly& a, const LPoly& b, std::int64_t p, int m) {
    if (!(a.den == b.den)) return false;
    BigInt modulus = big_pow(BigInt(p), static_cast<std::uint64_t>(m));
    int d = std::max(a.num.degree(), b.num.degree());
    for (int i = 0; i <= d; ++i)
        if ((a.num.coeff(i) - b.num.coeff(i)) % modulus != 0) return false;
    return true;
}

}  // namespace klsym
