#include "klsym.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "klsym/closed_forms.hpp"
#include "klsym/report.hpp"
#include "klsym/verify.hpp"
#include "parallel.hpp"

using namespace klsym;

struct klsym_session {
    std::unique_ptr<KlStore> store;
    int jobs = 1;
    std::string last_error;
};

namespace {

std::string resolve_cache_dir(const char* cache_dir) {
    if (cache_dir && *cache_dir) return cache_dir;
    if (const char* env = std::getenv("KLSYM_CACHE"); env && *env) return env;
    return "./.klsym-cache";
}

int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    if (const char* env = std::getenv("KLSYM_JOBS"); env && *env) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return default_jobs();
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

klsym_status set_error(klsym_session* session, klsym_status code, const std::string& message) {
    if (session) session->last_error = message;
    return code;
}

klsym_status status_of(const Error& e) {
    switch (e.code()) {
        case ErrorCode::invalid_argument: return KLSYM_ERR_INVALID_ARGUMENT;
        case ErrorCode::budget_exceeded: return KLSYM_ERR_BUDGET_EXCEEDED;
        case ErrorCode::check_failed: return KLSYM_ERR_CHECK_FAILED;
        case ErrorCode::cache: return KLSYM_ERR_CACHE;
        case ErrorCode::io: return KLSYM_ERR_IO;
        case ErrorCode::internal: return KLSYM_ERR_INTERNAL;
    }
    return KLSYM_ERR_INTERNAL;
}

template <class Fn>
klsym_status guarded(klsym_session* session, Fn&& fn) {
    if (!session) return KLSYM_ERR_INVALID_ARGUMENT;
    session->last_error.clear();
    try {
        return fn();
    } catch (const Error& e) {
        return set_error(session, status_of(e), e.what());
    } catch (const std::exception& e) {
        return set_error(session, KLSYM_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(session, KLSYM_ERR_INTERNAL, "unknown error");
    }
}

klsym_status emit(klsym_session* session, const nlohmann::json& doc, klsym_format format, char** out) {
    std::string rendered = format == KLSYM_FORMAT_TEXT ? render_text(doc) : doc.dump();
    char* s = dup_string(rendered);
    if (!s) return set_error(session, KLSYM_ERR_INTERNAL, "allocation failure");
    *out = s;
    return KLSYM_OK;
}

}  // namespace

extern "C" {

klsym_session* klsym_session_new(const char* cache_dir, int jobs) {
    try {
        auto* session = new klsym_session;
        session->jobs = resolve_jobs(jobs);
        session->store = std::make_unique<KlStore>(resolve_cache_dir(cache_dir), KlBudgets{}, session->jobs);
        return session;
    } catch (...) {
        return nullptr;
    }
}

void klsym_session_free(klsym_session* session) { delete session; }

const char* klsym_version(void) { return "1.0.0"; }

const char* klsym_last_error(const klsym_session* session) {
    return session ? session->last_error.c_str() : "";
}

void klsym_string_free(char* s) { std::free(s); }

klsym_status klsym_compute(klsym_session* session, int n, int64_t p, int e, int k,
                           const char* mode, int guard, int den_bound,
                           klsym_format format, char** out) {
    return guarded(session, [&]() -> klsym_status {
        if (!out) return set_error(session, KLSYM_ERR_INVALID_ARGUMENT, "out must not be null");
        ReportOptions options;
        options.n = n;
        options.p = p;
        options.e = e;
        options.k = k;
        if (mode && *mode) {
            std::string m = mode;
            if (m == "guarded")
                options.compute.mode = ComputeMode::guarded;
            else if (m == "trust-degree")
                options.compute.mode = ComputeMode::trust_degree;
            else
                return set_error(session, KLSYM_ERR_INVALID_ARGUMENT, "unknown mode: " + m);
        }
        if (guard >= 0) options.compute.guard = guard;
        if (den_bound >= 0) options.compute.den_bound = den_bound;
        nlohmann::json report = run_compute_report(*session->store, options);
        klsym_status rc = emit(session, report, format, out);
        if (rc != KLSYM_OK) return rc;
        if (!report_ok(report))
            return set_error(session, KLSYM_ERR_CHECK_FAILED, "one or more checks failed");
        return KLSYM_OK;
    });
}

klsym_status klsym_counts(klsym_session* session, int n, int64_t p, int k_min, int k_max,
                          klsym_format format, char** out) {
    return guarded(session, [&]() -> klsym_status {
        if (!out) return set_error(session, KLSYM_ERR_INVALID_ARGUMENT, "out must not be null");
        if (k_min < 0 || k_max < k_min)
            return set_error(session, KLSYM_ERR_INVALID_ARGUMENT, "need 0 <= k_min <= k_max");
        nlohmann::json rows = nlohmann::json::array();
        for (int k = k_min; k <= k_max; ++k) {
            SymCounts counts = sym_counts(n, p, k);
            nlohmann::json row;
            row["k"] = k;
            row["d"] = counts.d;
            row["a"] = counts.a;
            row["b"] = counts.b;
            row["c"] = counts.c;
            row["degree"] = degree_from_counts(n, p, k, counts);
            rows.push_back(row);
        }
        nlohmann::json doc;
        doc["schema"] = 1;
        doc["n"] = n;
        doc["p"] = p;
        doc["rows"] = rows;
        if (format == KLSYM_FORMAT_TEXT) {
            std::string text = "k\td_k\ta_k\tb_k\tc_k\tdegree\n";
            for (const auto& row : rows) {
                text += std::to_string(row["k"].get<int>()) + "\t" + std::to_string(row["d"].get<std::int64_t>()) +
                        "\t" + std::to_string(row["a"].get<std::int64_t>()) + "\t" +
                        std::to_string(row["b"].get<std::int64_t>()) + "\t" +
                        std::to_string(row["c"].get<std::int64_t>()) + "\t" +
                        std::to_string(row["degree"].get<std::int64_t>()) + "\n";
            }
            char* s = dup_string(text);
            if (!s) return set_error(session, KLSYM_ERR_INTERNAL, "allocation failure");
            *out = s;
            return KLSYM_OK;
        }
        return emit(session, doc, format, out);
    });
}

klsym_status klsym_verify(klsym_session* session, const char* grid, int jobs,
                          klsym_format format, char** out, int* ok_out) {
    return guarded(session, [&]() -> klsym_status {
        if (!out) return set_error(session, KLSYM_ERR_INVALID_ARGUMENT, "out must not be null");
        nlohmann::json doc =
            run_verify(*session->store, grid ? grid : "", jobs > 0 ? jobs : session->jobs);
        if (ok_out) *ok_out = doc["ok"].get<bool>() ? 1 : 0;
        return emit(session, doc, format, out);
    });
}

klsym_status klsym_congruence(klsym_session* session, int n, int64_t p, int k1, int k2, int m,
                              klsym_format format, char** out, int* holds_out) {
    return guarded(session, [&]() -> klsym_status {
        if (!out) return set_error(session, KLSYM_ERR_INVALID_ARGUMENT, "out must not be null");
        if (m < 1) return set_error(session, KLSYM_ERR_INVALID_ARGUMENT, "need m >= 1");
        FieldPtr base = get_field(p, 1);
        ComputeResult r1 = compute_L(*session->store, n, k1, base);
        ComputeResult r2 = compute_L(*session->store, n, k2, base);
        bool holds = congruence_check(r1.L, r2.L, p, m);
        if (holds_out) *holds_out = holds ? 1 : 0;
        nlohmann::json doc;
        doc["schema"] = 1;
        doc["n"] = n;
        doc["p"] = p;
        doc["k1"] = k1;
        doc["k2"] = k2;
        doc["m"] = m;
        doc["holds"] = holds;
        doc["L1_num"] = r1.L.num.to_decimal_strings();
        doc["L2_num"] = r2.L.num.to_decimal_strings();
        if (format == KLSYM_FORMAT_TEXT) {
            std::string text = "L(Sym^" + std::to_string(k1) + ") vs L(Sym^" + std::to_string(k2) +
                               ") mod " + std::to_string(p) + "^" + std::to_string(m) + ": " +
                               (holds ? "congruent" : "NOT congruent") + "\n";
            char* s = dup_string(text);
            if (!s) return set_error(session, KLSYM_ERR_INTERNAL, "allocation failure");
            *out = s;
            return KLSYM_OK;
        }
        return emit(session, doc, format, out);
    });
}

klsym_status klsym_cache_stats(klsym_session* session, char** out) {
    return guarded(session, [&]() -> klsym_status {
        if (!out) return set_error(session, KLSYM_ERR_INVALID_ARGUMENT, "out must not be null");
        KlStore::Stats stats = session->store->stats();
        nlohmann::json doc;
        doc["files"] = stats.files;
        doc["bytes"] = stats.bytes;
        doc["ram_tables"] = stats.ram_tables;
        doc["ram_points"] = stats.ram_points;
        doc["path"] = session->store->dir().string();
        return emit(session, doc, KLSYM_FORMAT_JSON, out);
    });
}

klsym_status klsym_cache_clear(klsym_session* session) {
    return guarded(session, [&]() -> klsym_status {
        session->store->clear();
        return KLSYM_OK;
    });
}

klsym_status klsym_cache_path(klsym_session* session, char** out) {
    return guarded(session, [&]() -> klsym_status {
        if (!out) return set_error(session, KLSYM_ERR_INVALID_ARGUMENT, "out must not be null");
        char* s = dup_string(session->store->dir().string());
        if (!s) return set_error(session, KLSYM_ERR_INTERNAL, "allocation failure");
        *out = s;
        return KLSYM_OK;
    });
}

}  // extern "C"
