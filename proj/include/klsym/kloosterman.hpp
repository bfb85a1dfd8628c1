#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "klsym/cyclotomic.hpp"
#include "klsym/finite_field.hpp"

namespace klsym {

/// psi(x) = zeta_p^{Tr(x)} with the absolute trace down to F_p.
CycInt psi(const FieldPtr& field, const Coords& x);

/// Dense table of Kl_n(F, lambda) for every lambda in F^*, stored as int64
/// power-basis coordinates (p-1 per element, rank-major). Coordinates are
/// counts bounded by |F|^{n-1}, which every build strategy gates on.
class KlTable {
public:
    KlTable(FieldPtr field, int n, std::vector<std::int64_t> coords);

    const FieldPtr& field() const { return field_; }
    int n() const { return n_; }
    std::int64_t count() const { return field_->q() - 1; }

    CycInt value(const Coords& lambda) const;
    CycInt value_at_rank(std::int64_t rank) const;
    /// p-1 coordinates of the value at the given rank (rank = element index - 1).
    const std::int64_t* raw(std::int64_t rank) const;

    /// Table-sum identity, Frobenius invariance, and the numeric Weil bound;
    /// throws CheckFailed on violation.
    void check_invariants(int jobs) const;

private:
    FieldPtr field_;
    int n_;
    std::vector<std::int64_t> coords_;
};

using KlTablePtr = std::shared_ptr<const KlTable>;

/// Build strategies. All are exact; they must agree wherever they overlap
/// (covered by the oracle test suite).
KlTablePtr kl_table_naive(int n, const FieldPtr& field, std::int64_t ops_budget);
KlTablePtr kl_table_ntt(int n, const FieldPtr& field, int jobs);
CycInt kl_point_direct(int n, const FieldPtr& field, const Coords& lambda);

struct KlBudgets {
    std::int64_t naive_table_ops = std::int64_t(1) << 26;  // |F|^2 <= this
    std::int64_t point_ops = std::int64_t(1) << 34;        // |F|^{n-1} <= this
    std::int64_t ntt_max_elements = std::int64_t(1) << 25;
    std::int64_t disk_max_elements = std::int64_t(1) << 20;
};

/// Strategy dispatch plus a persistent JSON cache, one document per
/// (p, e, n, modulus) key under the cache directory.
class KlStore {
public:
    explicit KlStore(std::filesystem::path dir, KlBudgets budgets = {}, int jobs = 0);

    const std::filesystem::path& dir() const { return dir_; }
    const KlBudgets& budgets() const { return budgets_; }
    int jobs() const { return jobs_; }

    enum class Strategy { naive, ntt, none };
    Strategy table_strategy(int n, const FieldPtr& field) const;
    /// Size-only feasibility probe; lets planners reject a truncation before
    /// any field or table is constructed.
    bool table_feasible(int n, std::int64_t p, double log2_q) const;

    /// Full table via RAM cache, disk cache, or a fresh build.
    KlTablePtr table(int n, const FieldPtr& field);

    /// kl_cached: table value when a table is within budget, else a cached
    /// per-point evaluation.
    CycInt value(int n, const FieldPtr& field, const Coords& lambda);

    struct Stats {
        std::int64_t files = 0;
        std::int64_t bytes = 0;
        std::int64_t ram_tables = 0;
        std::int64_t ram_points = 0;
    };
    Stats stats() const;
    void clear();

private:
    std::string key_of(int n, const FieldPtr& field) const;
    std::filesystem::path file_of(const std::string& key) const;
    std::mutex& key_mutex(const std::string& key);

    std::filesystem::path dir_;
    KlBudgets budgets_;
    int jobs_;

    mutable std::mutex mu_;
    std::map<std::string, KlTablePtr> ram_tables_;
    std::map<std::string, std::map<std::int64_t, CycInt>> ram_points_;
    std::map<std::string, std::unique_ptr<std::mutex>> key_mutexes_;
};

}  // namespace klsym
