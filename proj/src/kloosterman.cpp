#include "klsym/kloosterman.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ntt.hpp"
#include "parallel.hpp"

namespace klsym {

namespace {

using json = nlohmann::json;

constexpr int kMaxLanes = 64;  // cap on p for the table strategies
constexpr std::int64_t kNaivePreferredElements = 4096;

bool counts_fit_63_bits(std::int64_t q, int n) {
    // Table coordinates are solution counts bounded by q^{n-1}; the NTT path
    // additionally needs 2*q^{n-1} < 2^64 - 2^32 + 1.
    return (n - 1) * std::log2(static_cast<double>(q)) < 62.0;
}

struct GroupTables {
    std::vector<std::int32_t> trace;  // trace of g^a
    std::vector<std::int64_t> rank;   // element rank of g^a
};

GroupTables group_tables(const FieldPtr& field, int jobs) {
    const std::int64_t m = field->q() - 1;
    GroupTables gt;
    gt.trace.resize(static_cast<std::size_t>(m));
    gt.rank.resize(static_cast<std::size_t>(m));
    const Coords g = field->mult_generator();
    std::int64_t chunk = std::max<std::int64_t>(1, m / std::max(1, jobs * 4));
    std::int64_t blocks = (m + chunk - 1) / chunk;
    parallel_for(blocks, jobs, [&](std::int64_t b) {
        std::int64_t lo = b * chunk, hi = std::min(m, lo + chunk);
        Coords x = field->pow(g, static_cast<std::uint64_t>(lo));
        for (std::int64_t a = lo; a < hi; ++a) {
            gt.trace[static_cast<std::size_t>(a)] = static_cast<std::int32_t>(field->trace_to_prime(x));
            gt.rank[static_cast<std::size_t>(a)] = field->element_index(x) - 1;
            x = field->mul(x, g);
        }
    });
    return gt;
}

void require_coprime(int n, const FieldPtr& field) {
    if (n < 1) throw InvalidArgument("rank n must be >= 1");
    if (std::gcd(static_cast<std::int64_t>(n), field->p()) != 1)
        throw InvalidArgument("Kloosterman sums require (n, p) = 1");
}

// Fold redundant counts (lane c = multiplicity of zeta^c) at one group index
// into power-basis coordinates.
template <class Src>
void write_power_basis(std::int64_t* dst, const Src& counts_at, std::int64_t p) {
    const std::int64_t top = counts_at(p - 1);
    for (std::int64_t c = 0; c + 1 < p; ++c) dst[c] = counts_at(c) - top;
}

std::vector<std::int64_t> fold_lanes_to_coords(const FieldPtr& field,
                                               const GroupTables& gt,
                                               const std::vector<std::vector<std::uint64_t>>& lanes) {
    const std::int64_t p = field->p();
    const std::int64_t m = field->q() - 1;
    std::vector<std::int64_t> coords(static_cast<std::size_t>(m * (p - 1)));
    for (std::int64_t a = 0; a < m; ++a) {
        std::int64_t* dst = coords.data() + gt.rank[static_cast<std::size_t>(a)] * (p - 1);
        write_power_basis(dst, [&](std::int64_t c) {
            return static_cast<std::int64_t>(lanes[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)]);
        }, p);
    }
    return coords;
}

std::uint64_t fnv1a(const void* data, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= b[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

CycInt psi(const FieldPtr& field, const Coords& x) {
    return CycInt::zeta_pow(field->p(), field->trace_to_prime(x));
}

KlTable::KlTable(FieldPtr field, int n, std::vector<std::int64_t> coords)
    : field_(std::move(field)), n_(n), coords_(std::move(coords)) {
    const std::int64_t m = field_->q() - 1;
    if (static_cast<std::int64_t>(coords_.size()) != m * (field_->p() - 1))
        throw InternalError("Kloosterman table has wrong size");
}

const std::int64_t* KlTable::raw(std::int64_t rank) const {
    if (rank < 0 || rank >= count()) throw InvalidArgument("table rank out of range");
    return coords_.data() + rank * (field_->p() - 1);
}

CycInt KlTable::value_at_rank(std::int64_t rank) const {
    const std::int64_t* src = raw(rank);
    CycInt z(field_->p());
    for (std::int64_t i = 0; i + 1 < field_->p(); ++i) z.coord(static_cast<std::size_t>(i)) = src[i];
    return z;
}

CycInt KlTable::value(const Coords& lambda) const {
    if (field_->is_zero(lambda)) throw InvalidArgument("Kloosterman sums are indexed by F^*");
    return value_at_rank(field_->element_index(lambda) - 1);
}

void KlTable::check_invariants(int jobs) const {
    const std::int64_t p = field_->p();
    const std::int64_t m = count();
    const std::int64_t width = p - 1;

    // Global sum identity: sum over F^* equals (-1)^n.
    std::vector<__int128> lane_sum(static_cast<std::size_t>(width), 0);
    for (std::int64_t r = 0; r < m; ++r) {
        const std::int64_t* src = coords_.data() + r * width;
        for (std::int64_t i = 0; i < width; ++i) lane_sum[static_cast<std::size_t>(i)] += src[i];
    }
    const std::int64_t expect = (n_ % 2 == 0) ? 1 : -1;
    for (std::int64_t i = 0; i < width; ++i) {
        __int128 want = (i == 0) ? expect : 0;
        if (lane_sum[static_cast<std::size_t>(i)] != want)
            throw InternalError("Kloosterman table violates the global sum identity");
    }

    const double weil = n_ * std::pow(static_cast<double>(field_->q()),
                                      (n_ - 1) / 2.0) + 1e-6;
    std::vector<std::complex<double>> zeta(static_cast<std::size_t>(p));
    for (std::int64_t c = 0; c < p; ++c) {
        double ang = 2.0 * 3.14159265358979323846 * static_cast<double>(c) / static_cast<double>(p);
        zeta[static_cast<std::size_t>(c)] = {std::cos(ang), std::sin(ang)};
    }

    parallel_chunks(m, jobs, [&](std::int64_t lo, std::int64_t hi) {
        Coords x = field_->element_at(lo + 1);
        for (std::int64_t r = lo; r < hi; ++r) {
            // Frobenius invariance: the value at x^p equals the value at x.
            Coords y = field_->frobenius(x);
            std::int64_t ry = field_->element_index(y) - 1;
            const std::int64_t* a = coords_.data() + r * width;
            const std::int64_t* b = coords_.data() + ry * width;
            for (std::int64_t i = 0; i < width; ++i)
                if (a[i] != b[i]) throw InternalError("Kloosterman table is not Frobenius invariant");

            std::complex<double> v(0.0, 0.0);
            for (std::int64_t i = 0; i < width; ++i)
                if (a[i]) v += static_cast<double>(a[i]) * zeta[static_cast<std::size_t>(i)];
            if (std::abs(v) > weil)
                throw InternalError("Kloosterman value violates the Weil bound");

            // next element in rank order
            if (r + 1 < hi) x = field_->element_at(r + 2);
        }
    });
}

KlTablePtr kl_table_naive(int n, const FieldPtr& field, std::int64_t ops_budget) {
    require_coprime(n, field);
    const std::int64_t p = field->p();
    const std::int64_t q = field->q();
    const std::int64_t m = q - 1;
    if (q > ops_budget / q)
        throw BudgetExceeded("naive Kloosterman table: |F|^2 exceeds the ops budget");
    if (!counts_fit_63_bits(q, n))
        throw BudgetExceeded("naive Kloosterman table: counts would overflow 63 bits");
    if (n > 2 && p > kMaxLanes)
        throw BudgetExceeded("naive Kloosterman table: p too large for iterated convolution");

    GroupTables gt = group_tables(field, 1);

    // T_j(a, c) = #{(x_1..x_j) : prod = g^a, sum of traces = c}, convolved in
    // the exponent; T_1 is the delta array of the trace.
    std::vector<std::int64_t> cur(static_cast<std::size_t>(m * p), 0);
    if (n == 1) {
        for (std::int64_t a = 0; a < m; ++a) cur[static_cast<std::size_t>(a * p + gt.trace[static_cast<std::size_t>(a)])] = 1;
    } else {
        // first convolution directly from two deltas
        for (std::int64_t a = 0; a < m; ++a) {
            const std::int64_t ca = gt.trace[static_cast<std::size_t>(a)];
            for (std::int64_t b = 0; b < m; ++b) {
                std::int64_t dst = a + b;
                if (dst >= m) dst -= m;
                std::int64_t c = ca + gt.trace[static_cast<std::size_t>(b)];
                if (c >= p) c -= p;
                ++cur[static_cast<std::size_t>(dst * p + c)];
            }
        }
        for (int step = 3; step <= n; ++step) {
            std::vector<std::int64_t> next(static_cast<std::size_t>(m * p), 0);
            for (std::int64_t b = 0; b < m; ++b) {
                const std::int64_t cb = gt.trace[static_cast<std::size_t>(b)];
                for (std::int64_t a = 0; a < m; ++a) {
                    std::int64_t dst = a + b;
                    if (dst >= m) dst -= m;
                    const std::int64_t* src = cur.data() + a * p;
                    std::int64_t* out = next.data() + dst * p;
                    for (std::int64_t c = 0; c < p; ++c) {
                        std::int64_t cc = c + cb;
                        if (cc >= p) cc -= p;
                        out[cc] += src[c];
                    }
                }
            }
            cur = std::move(next);
        }
    }

    std::vector<std::int64_t> coords(static_cast<std::size_t>(m * (p - 1)));
    for (std::int64_t a = 0; a < m; ++a) {
        std::int64_t* dst = coords.data() + gt.rank[static_cast<std::size_t>(a)] * (p - 1);
        const std::int64_t* src = cur.data() + a * p;
        write_power_basis(dst, [&](std::int64_t c) { return src[c]; }, p);
    }
    return std::make_shared<KlTable>(field, n, std::move(coords));
}

KlTablePtr kl_table_ntt(int n, const FieldPtr& field, int jobs) {
    require_coprime(n, field);
    const std::int64_t p = field->p();
    const std::int64_t q = field->q();
    const std::int64_t m = q - 1;
    if (p > kMaxLanes) throw BudgetExceeded("ntt Kloosterman table: p too large");
    if (!counts_fit_63_bits(q, n))
        throw BudgetExceeded("ntt Kloosterman table: counts would overflow the working prime");

    GroupTables gt = group_tables(field, jobs);

    std::vector<std::vector<std::uint64_t>> delta(static_cast<std::size_t>(p));
    for (auto& lane : delta) lane.assign(static_cast<std::size_t>(m), 0);
    for (std::int64_t a = 0; a < m; ++a)
        delta[static_cast<std::size_t>(gt.trace[static_cast<std::size_t>(a)])][static_cast<std::size_t>(a)] = 1;

    std::vector<std::int64_t> coords;
    if (n == 1) {
        coords = fold_lanes_to_coords(field, gt, delta);
    } else {
        ntt::Operand psi_hat = ntt::prepare(delta, m, jobs);
        delta.clear();
        delta.shrink_to_fit();
        std::vector<std::vector<std::uint64_t>> cur = ntt::multiply(psi_hat, psi_hat, jobs);
        for (int step = 3; step <= n; ++step) {
            ntt::Operand cur_hat = ntt::prepare(cur, m, jobs);
            cur = ntt::multiply(cur_hat, psi_hat, jobs);
        }
        coords = fold_lanes_to_coords(field, gt, cur);
    }
    return std::make_shared<KlTable>(field, n, std::move(coords));
}

CycInt kl_point_direct(int n, const FieldPtr& field, const Coords& lambda) {
    require_coprime(n, field);
    if (field->is_zero(lambda)) throw InvalidArgument("Kloosterman sums are indexed by F^*");
    const std::int64_t p = field->p();
    if (n == 1) return psi(field, lambda);

    const Coords g = field->mult_generator();
    const Coords gi = field->inv(g);
    const std::int64_t m = field->q() - 1;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(p), 0);

    // Free slots x_1..x_{n-1} run through g^i with a running inverse product,
    // so the bound slot x_n = lambda / (x_1...x_{n-1}) costs one multiply.
    std::function<void(int, const Coords&, std::int64_t)> rec =
        [&](int d, const Coords& inv_prod, std::int64_t tr_sum) {
            if (d == n - 1) {
                std::int64_t c = (tr_sum + field->trace_to_prime(inv_prod)) % p;
                ++counts[static_cast<std::size_t>(c)];
                return;
            }
            Coords xv = field->one(), xi = field->one();
            for (std::int64_t i = 0; i < m; ++i) {
                rec(d + 1, field->mul(inv_prod, xi), tr_sum + field->trace_to_prime(xv));
                xv = field->mul(xv, g);
                xi = field->mul(xi, gi);
            }
        };
    rec(0, lambda, 0);

    CycInt z(p);
    for (std::int64_t i = 0; i + 1 < p; ++i)
        z.coord(static_cast<std::size_t>(i)) = counts[static_cast<std::size_t>(i)] - counts[static_cast<std::size_t>(p - 1)];
    return z;
}

// ---------------------------------------------------------------------------
// Cache files

namespace {

struct CacheDoc {
    int format = 0;
    std::string kind;
    std::int64_t p = 0;
    int e = 0;
    int n = 0;
    std::vector<std::int32_t> modulus;
    std::vector<std::int64_t> dense;                  // rank-major coords
    std::int64_t dense_rows = 0;
    std::map<std::int64_t, std::vector<std::string>> sparse;
};

// Strict SAX reader for the cache schema; throws CacheError on anything
// unexpected so corruption is reported rather than partially accepted.
struct CacheSax {
    enum class Where {
        start, top, modulus, values, value_row, points, point_row, done
    };

    explicit CacheSax(std::int64_t expected_p) : expected_p_(expected_p) {}

    CacheDoc doc;
    Where where = Where::start;
    std::string current_key;
    std::int64_t expected_p_;
    std::int64_t row_len = 0;
    std::int64_t point_rank = 0;
    std::vector<std::string> point_row;

    [[noreturn]] void corrupt(const char* why) { throw CacheError(std::string("cache file corrupt: ") + why); }

    bool null() { corrupt("unexpected null"); }
    bool boolean(bool) { corrupt("unexpected boolean"); }
    bool number_float(double, const std::string&) { corrupt("unexpected float"); }
    bool binary(std::vector<std::uint8_t>&) { corrupt("unexpected binary"); }

    bool handle_int(std::int64_t v) {
        switch (where) {
            case Where::top:
                if (current_key == "format") doc.format = static_cast<int>(v);
                else if (current_key == "p") doc.p = v;
                else if (current_key == "e") doc.e = static_cast<int>(v);
                else if (current_key == "n") doc.n = static_cast<int>(v);
                else corrupt("unexpected integer field");
                if (current_key == "format" && doc.format != 1)
                    throw CacheError("cache format version mismatch");
                return true;
            case Where::modulus:
                doc.modulus.push_back(static_cast<std::int32_t>(v));
                return true;
            default:
                corrupt("integer in unexpected position");
        }
    }
    bool number_integer(std::int64_t v) { return handle_int(v); }
    bool number_unsigned(std::uint64_t v) {
        if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) corrupt("integer out of range");
        return handle_int(static_cast<std::int64_t>(v));
    }

    bool string(std::string& s) {
        switch (where) {
            case Where::top:
                if (current_key == "kind") doc.kind = s;
                else corrupt("unexpected string field");
                return true;
            case Where::value_row: {
                std::int64_t v = 0;
                auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
                if (ec != std::errc() || ptr != s.data() + s.size()) corrupt("malformed coordinate");
                doc.dense.push_back(v);
                ++row_len;
                return true;
            }
            case Where::point_row:
                point_row.push_back(s);
                return true;
            default:
                corrupt("string in unexpected position");
        }
    }

    bool start_object(std::size_t) {
        if (where == Where::start) {
            where = Where::top;
            return true;
        }
        if (where == Where::top && current_key == "points") {
            where = Where::points;
            return true;
        }
        corrupt("unexpected object");
    }

    bool key(std::string& k) {
        if (where == Where::top) {
            current_key = k;
            return true;
        }
        if (where == Where::points) {
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), v);
            if (ec != std::errc() || ptr != k.data() + k.size()) corrupt("malformed point rank");
            point_rank = v;
            return true;
        }
        corrupt("key in unexpected position");
    }

    bool end_object() {
        if (where == Where::points) {
            where = Where::top;
            return true;
        }
        if (where == Where::top) {
            where = Where::done;
            return true;
        }
        corrupt("unexpected end of object");
    }

    bool start_array(std::size_t) {
        switch (where) {
            case Where::top:
                if (current_key == "modulus") where = Where::modulus;
                else if (current_key == "values") where = Where::values;
                else corrupt("unexpected array field");
                return true;
            case Where::values:
                where = Where::value_row;
                row_len = 0;
                return true;
            case Where::points:
                where = Where::point_row;
                point_row.clear();
                return true;
            default:
                corrupt("array in unexpected position");
        }
    }

    bool end_array() {
        switch (where) {
            case Where::modulus:
                where = Where::top;
                return true;
            case Where::value_row:
                if (row_len != expected_p_ - 1) corrupt("value row has wrong length");
                ++doc.dense_rows;
                where = Where::values;
                return true;
            case Where::values:
                where = Where::top;
                return true;
            case Where::point_row:
                doc.sparse[point_rank] = point_row;
                where = Where::points;
                return true;
            default:
                corrupt("unexpected end of array");
        }
    }

    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) {
        throw CacheError(std::string("cache file is not valid JSON: ") + ex.what());
    }
};

CacheDoc read_cache_file(const std::filesystem::path& path, const FieldPtr& field, int n) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open cache file " + path.string());
    CacheSax sax(field->p());
    if (!json::sax_parse(in, &sax)) throw CacheError("cache file corrupt: parse aborted");
    CacheDoc& doc = sax.doc;
    if (doc.format != 1) throw CacheError("cache format version mismatch");
    if (doc.kind != "table" && doc.kind != "points") throw CacheError("cache file corrupt: unknown kind");
    if (doc.p != field->p() || doc.e != field->e() || doc.n != n) throw CacheError("cache file corrupt: key mismatch");
    std::vector<std::int32_t> mod(field->modulus().begin(), field->modulus().end());
    if (doc.modulus != mod) throw CacheError("cache file corrupt: modulus mismatch");
    if (doc.kind == "table" && doc.dense_rows != field->q() - 1)
        throw CacheError("cache file corrupt: wrong number of values");
    return doc;
}

void atomic_write(const std::filesystem::path& path, const std::string& payload) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write cache file " + tmp.string());
        out << payload;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_table_file(const std::filesystem::path& path, const KlTable& table) {
    const FieldPtr& f = table.field();
    const std::int64_t width = f->p() - 1;
    std::string out;
    out.reserve(static_cast<std::size_t>(table.count() * width * 8));
    out += "{\"format\":1,\"kind\":\"table\",\"p\":" + std::to_string(f->p());
    out += ",\"e\":" + std::to_string(f->e());
    out += ",\"n\":" + std::to_string(table.n());
    out += ",\"modulus\":[";
    for (std::size_t i = 0; i < f->modulus().size(); ++i) {
        if (i) out += ',';
        out += std::to_string(f->modulus()[i]);
    }
    out += "],\"values\":[";
    char buf[32];
    for (std::int64_t r = 0; r < table.count(); ++r) {
        if (r) out += ',';
        out += '[';
        const std::int64_t* src = table.raw(r);
        for (std::int64_t i = 0; i < width; ++i) {
            if (i) out += ',';
            out += '"';
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), src[i]);
            out.append(buf, ptr);
            out += '"';
        }
        out += ']';
    }
    out += "]}";
    atomic_write(path, out);
}

void write_points_file(const std::filesystem::path& path, const FieldPtr& f, int n,
                       const std::map<std::int64_t, CycInt>& points) {
    json doc;
    doc["format"] = 1;
    doc["kind"] = "points";
    doc["p"] = f->p();
    doc["e"] = f->e();
    doc["n"] = n;
    doc["modulus"] = f->modulus();
    json pts = json::object();
    for (const auto& [rank, value] : points) pts[std::to_string(rank)] = value.to_decimal_strings();
    doc["points"] = std::move(pts);
    atomic_write(path, doc.dump());
}

}  // namespace

KlStore::KlStore(std::filesystem::path dir, KlBudgets budgets, int jobs)
    : dir_(std::move(dir)), budgets_(budgets), jobs_(jobs > 0 ? jobs : default_jobs()) {
    std::filesystem::create_directories(dir_);
}

std::string KlStore::key_of(int n, const FieldPtr& field) const {
    const auto& mod = field->modulus();
    std::uint64_t h = fnv1a(mod.data(), mod.size() * sizeof(mod[0]));
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return "kl_p" + std::to_string(field->p()) + "_e" + std::to_string(field->e()) + "_n" +
           std::to_string(n) + "_" + hex;
}

std::filesystem::path KlStore::file_of(const std::string& key) const { return dir_ / (key + ".json"); }

std::mutex& KlStore::key_mutex(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = key_mutexes_[key];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

KlStore::Strategy KlStore::table_strategy(int n, const FieldPtr& field) const {
    const std::int64_t q = field->q();
    const std::int64_t m = q - 1;
    const std::int64_t p = field->p();
    if (!counts_fit_63_bits(q, n)) return Strategy::none;
    const bool naive_ok = q <= budgets_.naive_table_ops / q && (n <= 2 || p <= kMaxLanes);
    const bool ntt_ok = p <= kMaxLanes && m <= budgets_.ntt_max_elements;
    if (naive_ok && m <= kNaivePreferredElements) return Strategy::naive;
    if (ntt_ok) return Strategy::ntt;
    if (naive_ok) return Strategy::naive;
    return Strategy::none;
}

bool KlStore::table_feasible(int n, std::int64_t p, double log2_q) const {
    if ((n - 1) * log2_q >= 62.0) return false;
    const bool naive_ok = 2 * log2_q <= std::log2(static_cast<double>(budgets_.naive_table_ops)) &&
                          (n <= 2 || p <= kMaxLanes);
    const bool ntt_ok = p <= kMaxLanes && log2_q <= std::log2(static_cast<double>(budgets_.ntt_max_elements));
    return naive_ok || ntt_ok;
}

KlTablePtr KlStore::table(int n, const FieldPtr& field) {
    require_coprime(n, field);
    const std::string key = key_of(n, field);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ram_tables_.find(key);
        if (it != ram_tables_.end()) return it->second;
    }
    std::lock_guard<std::mutex> key_lock(key_mutex(key));
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ram_tables_.find(key);
        if (it != ram_tables_.end()) return it->second;
    }

    const std::filesystem::path path = file_of(key);
    if (std::filesystem::exists(path)) {
        CacheDoc doc = read_cache_file(path, field, n);
        if (doc.kind == "table") {
            auto table = std::make_shared<KlTable>(field, n, std::move(doc.dense));
            table->check_invariants(jobs_);
            std::lock_guard<std::mutex> lock(mu_);
            ram_tables_[key] = table;
            return table;
        }
        // a sparse doc exists for this key; fall through and build the table
    }

    Strategy strategy = table_strategy(n, field);
    KlTablePtr table;
    switch (strategy) {
        case Strategy::naive:
            table = kl_table_naive(n, field, budgets_.naive_table_ops);
            break;
        case Strategy::ntt:
            table = kl_table_ntt(n, field, jobs_);
            break;
        case Strategy::none:
            throw BudgetExceeded("no Kloosterman table strategy fits |F| = " + std::to_string(field->q()));
    }
    table->check_invariants(jobs_);
    if (field->q() - 1 <= budgets_.disk_max_elements) write_table_file(path, *table);
    std::lock_guard<std::mutex> lock(mu_);
    ram_tables_[key] = table;
    return table;
}

CycInt KlStore::value(int n, const FieldPtr& field, const Coords& lambda) {
    require_coprime(n, field);
    if (field->is_zero(lambda)) throw InvalidArgument("Kloosterman sums are indexed by F^*");
    if (table_strategy(n, field) != Strategy::none) return table(n, field)->value(lambda);

    const std::string key = key_of(n, field);
    const std::int64_t rank = field->element_index(lambda) - 1;
    std::lock_guard<std::mutex> key_lock(key_mutex(key));
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ram_points_.find(key);
        if (it != ram_points_.end()) {
            auto pt = it->second.find(rank);
            if (pt != it->second.end()) return pt->second;
        }
    }
    const std::filesystem::path path = file_of(key);
    if (std::filesystem::exists(path)) {
        CacheDoc doc = read_cache_file(path, field, n);
        if (doc.kind != "points") throw CacheError("cache file corrupt: expected a points document");
        std::lock_guard<std::mutex> lock(mu_);
        auto& slot = ram_points_[key];
        for (const auto& [r, strs] : doc.sparse)
            slot.emplace(r, CycInt::from_decimal_strings(field->p(), strs));
        auto pt = slot.find(rank);
        if (pt != slot.end()) return pt->second;
    }

    const double point_cost = (n - 1) * std::log2(static_cast<double>(field->q()));
    if (point_cost > std::log2(static_cast<double>(budgets_.point_ops)))
        throw BudgetExceeded("per-point Kloosterman budget exceeded for |F| = " + std::to_string(field->q()));
    CycInt v = kl_point_direct(n, field, lambda);

    std::map<std::int64_t, CycInt> snapshot;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto& slot = ram_points_[key];
        slot.emplace(rank, v);
        snapshot = slot;
    }
    write_points_file(path, field, n, snapshot);
    return v;
}

KlStore::Stats KlStore::stats() const {
    Stats s;
    if (std::filesystem::exists(dir_)) {
        for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (name.rfind("kl_", 0) == 0 && name.size() > 5 && name.substr(name.size() - 5) == ".json") {
                ++s.files;
                s.bytes += static_cast<std::int64_t>(entry.file_size());
            }
        }
    }
    std::lock_guard<std::mutex> lock(mu_);
    s.ram_tables = static_cast<std::int64_t>(ram_tables_.size());
    for (const auto& [k, pts] : ram_points_) s.ram_points += static_cast<std::int64_t>(pts.size());
    return s;
}

void KlStore::clear() {
    if (std::filesystem::exists(dir_)) {
        for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (name.rfind("kl_", 0) == 0 && name.size() > 5 && name.substr(name.size() - 5) == ".json")
                std::filesystem::remove(entry.path());
        }
    }
    std::lock_guard<std::mutex> lock(mu_);
    ram_tables_.clear();
    ram_points_.clear();
}

}  // namespace klsym
