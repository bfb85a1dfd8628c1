#include "klsym/local_factors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "klsym/errors.hpp"

namespace klsym {

namespace {

std::vector<ClosedPoint> enumerate_degree(const FieldPtr& base, int d, std::int64_t field_budget) {
    const std::int64_t p = base->p();
    const int e0 = base->e();
    const std::int64_t q = base->q();

    FieldPtr ext = get_field(p, e0 * d, field_budget);
    const std::int64_t m = ext->q() - 1;
    const std::int64_t qbar = q % m;

    std::vector<ClosedPoint> out;
    std::vector<bool> visited(static_cast<std::size_t>(m), false);
    const Coords g = ext->mult_generator();
    Coords x = ext->one();  // g^0
    for (std::int64_t i = 0; i < m; ++i) {
        if (!visited[static_cast<std::size_t>(i)]) {
            // walk the orbit of i under multiplication by q mod m
            int size = 0;
            std::int64_t idx = i;
            do {
                visited[static_cast<std::size_t>(idx)] = true;
                idx = idx * qbar % m;
                ++size;
            } while (idx != i);
            if (size == d) {
                // rep = lexicographically smallest conjugate element
                Coords best = x, y = x;
                for (int t = 1; t < d; ++t) {
                    y = ext->frobenius_pow(y, e0);
                    if (ext->element_index(y) < ext->element_index(best)) best = y;
                }
                ClosedPoint pt;
                pt.base = base;
                pt.d = d;
                pt.ext = ext;
                pt.rank = ext->element_index(best) - 1;
                pt.rep = std::move(best);
                out.push_back(std::move(pt));
            }
        }
        x = ext->mul(x, g);
    }
    std::sort(out.begin(), out.end(),
              [](const ClosedPoint& a, const ClosedPoint& b) { return a.rank < b.rank; });
    return out;
}

}  // namespace

const std::vector<ClosedPoint>& closed_points_of_degree(const FieldPtr& base, int d,
                                                        std::int64_t field_budget) {
    if (d < 1) throw InvalidArgument("degree must be >= 1");
    static std::mutex mu;
    static std::map<std::tuple<std::int64_t, int, int>,
                    std::unique_ptr<const std::vector<ClosedPoint>>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(base->p(), base->e(), d);
    auto it = registry.find(key);
    if (it == registry.end()) {
        auto points = std::make_unique<const std::vector<ClosedPoint>>(
            enumerate_degree(base, d, field_budget));
        it = registry.emplace(key, std::move(points)).first;
    }
    return *it->second;
}

std::vector<ClosedPoint> closed_points(const FieldPtr& base, int max_degree, std::int64_t field_budget) {
    if (max_degree < 1) throw InvalidArgument("max_degree must be >= 1");
    std::vector<ClosedPoint> out;
    for (int d = 1; d <= max_degree; ++d) {
        const auto& pts = closed_points_of_degree(base, d, field_budget);
        out.insert(out.end(), pts.begin(), pts.end());
    }
    return out;
}

std::vector<CycInt> power_sums(KlStore& store, const ClosedPoint& pt, int n, int count) {
    std::vector<CycInt> out;
    out.reserve(static_cast<std::size_t>(count));
    const std::int64_t p = pt.base->p();
    for (int j = 1; j <= count; ++j) {
        FieldPtr big = get_field(p, pt.ext->e() * j);
        Coords lambda = pt.ext->e() == big->e() ? pt.rep : get_embedding(pt.ext, big).apply(pt.rep);
        CycInt v = store.value(n, big, lambda);
        out.push_back(n % 2 == 0 ? -v : v);  // (-1)^{n-1} Kl_n
    }
    return out;
}

namespace {

// e_j = (1/j) sum_{i=1}^{j} (-1)^{i-1} p_i e_{j-i}, with exact division.
CycInt newton_elementary(const std::vector<CycInt>& p_sums, const std::vector<CycInt>& elems, int j,
                         std::int64_t p) {
    CycInt acc(p);
    for (int i = 1; i <= j; ++i) {
        CycInt term = p_sums[static_cast<std::size_t>(i - 1)] *
                      (i == j ? CycInt::from_integer(p, 1) : elems[static_cast<std::size_t>(j - i - 1)]);
        if (i % 2 == 0) term = -term;
        acc += term;
    }
    CycInt out(p);
    for (std::size_t t = 0; t + 1 < static_cast<std::size_t>(p); ++t) {
        BigInt quo, rem;
        boost::multiprecision::divide_qr(acc.coord(t), BigInt(j), quo, rem);
        if (rem != 0) throw InternalError("Newton identity produced a non-integral e_" + std::to_string(j));
        out.coord(t) = quo;
    }
    return out;
}

}  // namespace

LocalFactor local_factor(KlStore& store, const ClosedPoint& pt, int n, bool cross_check) {
    if (n < 1) throw InvalidArgument("rank must be >= 1");
    const std::int64_t p = pt.base->p();
    LocalFactor lf;
    lf.point = pt;
    lf.n = n;

    if (n == 1) {
        CycInt p1 = power_sums(store, pt, 1, 1)[0];
        lf.psums = {};
        lf.elementary = {p1};  // factor 1 - psi(rep) T
        return lf;
    }

    lf.psums = power_sums(store, pt, n, n - 1);
    lf.elementary.clear();
    for (int j = 1; j <= n - 1; ++j)
        lf.elementary.push_back(newton_elementary(lf.psums, lf.elementary, j, p));
    // determinant twist: e_n = q^{d n(n-1)/2} exactly
    BigInt en = big_pow(BigInt(pt.base->q()),
                        static_cast<std::uint64_t>(static_cast<std::int64_t>(pt.d) * n * (n - 1) / 2));
    lf.elementary.push_back(CycInt::from_integer(p, en));

    if (cross_check) {
        // compute p_n from the degree-dn field and verify the n-th identity
        FieldPtr big = get_field(p, pt.ext->e() * n);
        Coords lambda = get_embedding(pt.ext, big).apply(pt.rep);
        CycInt pn = store.value(n, big, lambda);
        if (n % 2 == 0) pn = -pn;
        // n e_n = sum_{i=1}^{n} (-1)^{i-1} p_i e_{n-i}
        std::vector<CycInt> all_psums = lf.psums;
        all_psums.push_back(pn);
        CycInt acc(p);
        for (int i = 1; i <= n; ++i) {
            CycInt term = all_psums[static_cast<std::size_t>(i - 1)] *
                          (i == n ? CycInt::from_integer(p, 1) : lf.elementary[static_cast<std::size_t>(n - i - 1)]);
            if (i % 2 == 0) term = -term;
            acc += term;
        }
        if (acc != lf.elementary.back() * BigInt(n))
            throw CheckFailed("determinant twist disagrees with the full Newton identity at degree " +
                              std::to_string(pt.d));
    }
    return lf;
}

std::vector<CycInt> LocalFactor::poly() const {
    const std::int64_t p = point.base->p();
    std::vector<CycInt> out;
    out.push_back(CycInt::from_integer(p, 1));
    for (std::size_t j = 0; j < elementary.size(); ++j) {
        CycInt c = elementary[j];
        if (j % 2 == 0) c = -c;  // coefficient of T^{j+1} is (-1)^{j+1} e_{j+1}
        out.push_back(c);
    }
    return out;
}

std::vector<CycInt> extend_power_sums(const LocalFactor& lf, int M) {
    const int n = lf.n;
    const std::int64_t p = lf.point.base->p();
    std::vector<CycInt> out;
    out.reserve(static_cast<std::size_t>(M));
    for (int m = 1; m <= M; ++m) {
        if (m <= n - 1) {
            out.push_back(lf.psums[static_cast<std::size_t>(m - 1)]);
            continue;
        }
        CycInt acc(p);
        if (m <= n) {
            // Newton seeding: p_m = sum_{i<m} (-1)^{i-1} e_i p_{m-i} + (-1)^{m-1} m e_m
            for (int i = 1; i < m; ++i) {
                CycInt term = lf.elementary[static_cast<std::size_t>(i - 1)] * out[static_cast<std::size_t>(m - i - 1)];
                if (i % 2 == 0) term = -term;
                acc += term;
            }
            CycInt tail = lf.elementary[static_cast<std::size_t>(m - 1)] * BigInt(m);
            if (m % 2 == 0) tail = -tail;
            acc += tail;
        } else {
            for (int i = 1; i <= n; ++i) {
                CycInt term = lf.elementary[static_cast<std::size_t>(i - 1)] * out[static_cast<std::size_t>(m - i - 1)];
                if (i % 2 == 0) term = -term;
                acc += term;
            }
        }
        out.push_back(std::move(acc));
    }
    return out;
}

CycInt sym_trace(const LocalFactor& lf, int k, int m) {
    if (k < 0 || m < 1) throw InvalidArgument("sym_trace needs k >= 0, m >= 1");
    const std::int64_t p = lf.point.base->p();
    if (k == 0) return CycInt::from_integer(p, 1);

    std::vector<CycInt> psums = extend_power_sums(lf, m * k);
    // h-recursion on the m-th eigenvalue powers: r h_r = sum P_j h_{r-j}
    std::vector<CycInt> h;
    h.push_back(CycInt::from_integer(p, 1));
    for (int r = 1; r <= k; ++r) {
        CycInt acc(p);
        for (int j = 1; j <= r; ++j)
            acc += psums[static_cast<std::size_t>(m * j - 1)] * h[static_cast<std::size_t>(r - j)];
        CycInt hr(p);
        for (std::size_t t = 0; t + 1 < static_cast<std::size_t>(p); ++t) {
            BigInt quo, rem;
            boost::multiprecision::divide_qr(acc.coord(t), BigInt(r), quo, rem);
            if (rem != 0) throw InternalError("h-recursion produced a non-integral trace");
            hr.coord(t) = quo;
        }
        h.push_back(std::move(hr));
    }
    return h.back();
}

std::vector<CycInt> sym_local_factor(const LocalFactor& lf, int k) {
    const std::int64_t p = lf.point.base->p();
    BigInt deg_big = binomial(k + lf.n - 1, lf.n - 1);
    if (deg_big > 512) throw BudgetExceeded("Sym^k local factor would have degree " + deg_big.str());
    const int R = deg_big.convert_to<int>();

    std::vector<CycInt> traces;
    for (int m = 1; m <= R; ++m) traces.push_back(sym_trace(lf, k, m));

    std::vector<CycInt> elems;
    for (int j = 1; j <= R; ++j) elems.push_back(newton_elementary(traces, elems, j, p));

    std::vector<CycInt> out;
    out.push_back(CycInt::from_integer(p, 1));
    for (int j = 1; j <= R; ++j) {
        CycInt c = elems[static_cast<std::size_t>(j - 1)];
        if (j % 2 == 1) c = -c;
        out.push_back(std::move(c));
    }
    return out;
}

void check_local_purity(const LocalFactor& lf, double tol) {
    const int n = lf.n;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    std::vector<CycInt> coeffs = lf.poly();
    // reciprocal roots are eigenvalues of companion of x^n - e_1 x^{n-1} + ...
    for (int i = 0; i < n; ++i) {
        std::complex<double> ci = coeffs[static_cast<std::size_t>(n - i)].complex_value();
        companion(i, n - 1) = -ci;
    }
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw InternalError("eigenvalue computation failed");
    const double expected =
        std::pow(static_cast<double>(lf.point.base->q()), lf.point.d * (n - 1) / 2.0);
    for (int i = 0; i < n; ++i) {
        double modulus = std::abs(solver.eigenvalues()[i]);
        if (std::abs(modulus - expected) > tol * expected)
            throw CheckFailed("local factor is not pure: |root| = " + std::to_string(modulus) +
                              ", expected " + std::to_string(expected));
    }
}

}  // namespace klsym
