// klsym command-line tool: compute, counts, verify, cache. Thin shell over
// the shared-library C API (klsym.h); exit codes 0 ok, 2 budget exceeded,
// 3 falsified check, 4 internal/cache error.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "klsym.h"

namespace {

int exit_code_of(klsym_status status) {
    switch (status) {
        case KLSYM_OK: return 0;
        case KLSYM_ERR_INVALID_ARGUMENT: return 1;
        case KLSYM_ERR_BUDGET_EXCEEDED: return 2;
        case KLSYM_ERR_CHECK_FAILED: return 3;
        case KLSYM_ERR_INTERNAL: return 4;
        case KLSYM_ERR_CACHE: return 4;
        case KLSYM_ERR_IO: return 4;
    }
    return 4;
}

struct SessionHandle {
    klsym_session* session = nullptr;
    ~SessionHandle() { klsym_session_free(session); }
};

struct OutString {
    char* s = nullptr;
    ~OutString() { klsym_string_free(s); }
};

int deliver(const char* text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text, stdout);
        if (*text && text[std::strlen(text) - 1] != '\n') std::fputc('\n', stdout);
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
        return 4;
    }
    out << text;
    return 0;
}

int fail(const klsym_session* session, klsym_status status) {
    std::fprintf(stderr, "error: %s\n", klsym_last_error(session));
    return exit_code_of(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symmetric-power L-functions of Kloosterman sums, by exact point counting"};
    app.require_subcommand(1);

    std::string cache_dir;
    int jobs = 0;
    app.add_option("--cache", cache_dir, "cache directory (default $KLSYM_CACHE or ./.klsym-cache)");
    app.add_option("--jobs", jobs, "worker threads (default $KLSYM_JOBS or hardware)");

    // compute
    auto* compute = app.add_subcommand("compute", "compute and verify one L-function");
    int n = 0, e = 1, k = -1, guard = -1, den_bound = -1;
    std::int64_t p = 0;
    std::string mode = "guarded", format = "json", out_path;
    compute->add_option("--n", n, "rank of the Kloosterman sum")->required();
    compute->add_option("--p", p, "characteristic (prime)")->required();
    compute->add_option("--k", k, "symmetric power")->required();
    compute->add_option("--e", e, "base field extension degree (default 1)");
    compute->add_option("--mode", mode, "guarded | trust-degree")->check(CLI::IsMember({"guarded", "trust-degree"}));
    compute->add_option("--guard", guard, "extra verified series coefficients (default 3)");
    compute->add_option("--den-bound", den_bound, "max denominator degree to try (default 2)");
    compute->add_option("--format", format, "json | text")->check(CLI::IsMember({"json", "text"}));
    compute->add_option("--out", out_path, "write the report to a file instead of stdout");

    // counts
    auto* counts = app.add_subcommand("counts", "tuple counts d,a,b,c and the predicted degree");
    int ck = -1, ckmax = -1, cn = 0;
    std::int64_t cp = 0;
    std::string cformat = "text", cout_path;
    counts->add_option("--n", cn, "rank")->required();
    counts->add_option("--p", cp, "characteristic (prime)")->required();
    counts->add_option("--k", ck, "single symmetric power");
    counts->add_option("--kmax", ckmax, "table for k = 0..kmax");
    counts->add_option("--format", cformat, "json | text")->check(CLI::IsMember({"json", "text"}));
    counts->add_option("--out", cout_path, "write to a file instead of stdout");

    // verify
    auto* verify = app.add_subcommand("verify", "run the acceptance battery or a custom grid");
    std::string grid, config_path, vformat = "text", vout_path;
    int vjobs = 0;
    verify->add_option("--grid", grid, "grid spec, e.g. \"n=2 p=3|5|7 k=0..10\"");
    verify->add_option("--config", config_path, "file with a grid spec");
    verify->add_option("--jobs", vjobs, "parallel grid points");
    verify->add_option("--format", vformat, "json | text")->check(CLI::IsMember({"json", "text"}));
    verify->add_option("--out", vout_path, "write to a file instead of stdout");

    // cache
    auto* cache = app.add_subcommand("cache", "cache administration");
    auto* cache_stats = cache->add_subcommand("stats", "cache file statistics");
    auto* cache_clear = cache->add_subcommand("clear", "remove cached tables and points");
    auto* cache_path = cache->add_subcommand("path", "print the cache directory");
    cache->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    SessionHandle handle;
    handle.session = klsym_session_new(cache_dir.empty() ? nullptr : cache_dir.c_str(), jobs);
    if (!handle.session) {
        std::fprintf(stderr, "error: cannot create session\n");
        return 4;
    }

    if (compute->parsed()) {
        OutString out;
        klsym_status rc = klsym_compute(handle.session, n, p, e, k, mode.c_str(), guard, den_bound,
                                        format == "text" ? KLSYM_FORMAT_TEXT : KLSYM_FORMAT_JSON, &out.s);
        if (rc != KLSYM_OK && !out.s) return fail(handle.session, rc);
        int io = deliver(out.s, out_path);
        if (io) return io;
        if (rc != KLSYM_OK) {
            std::fprintf(stderr, "error: %s\n", klsym_last_error(handle.session));
            return exit_code_of(rc);
        }
        return 0;
    }

    if (counts->parsed()) {
        if (ck < 0 && ckmax < 0) {
            std::fprintf(stderr, "error: need --k or --kmax\n");
            return 1;
        }
        int lo = ckmax >= 0 ? 0 : ck;
        int hi = ckmax >= 0 ? ckmax : ck;
        OutString out;
        klsym_status rc = klsym_counts(handle.session, cn, cp, lo, hi,
                                       cformat == "text" ? KLSYM_FORMAT_TEXT : KLSYM_FORMAT_JSON, &out.s);
        if (rc != KLSYM_OK) return fail(handle.session, rc);
        return deliver(out.s, cout_path);
    }

    if (verify->parsed()) {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::fprintf(stderr, "error: cannot read %s\n", config_path.c_str());
                return 4;
            }
            std::string line, spec;
            while (std::getline(in, line)) {
                if (!line.empty() && line[0] != '#') spec += line + ";";
            }
            grid = spec;
        }
        OutString out;
        int ok = 0;
        klsym_status rc = klsym_verify(handle.session, grid.c_str(), vjobs,
                                       vformat == "text" ? KLSYM_FORMAT_TEXT : KLSYM_FORMAT_JSON, &out.s, &ok);
        if (rc != KLSYM_OK) return fail(handle.session, rc);
        int io = deliver(out.s, vout_path);
        if (io) return io;
        return ok ? 0 : 3;
    }

    if (cache->parsed()) {
        if (cache_stats->parsed()) {
            OutString out;
            klsym_status rc = klsym_cache_stats(handle.session, &out.s);
            if (rc != KLSYM_OK) return fail(handle.session, rc);
            return deliver(out.s, "");
        }
        if (cache_clear->parsed()) {
            klsym_status rc = klsym_cache_clear(handle.session);
            if (rc != KLSYM_OK) return fail(handle.session, rc);
            std::puts("cache cleared");
            return 0;
        }
        if (cache_path->parsed()) {
            OutString out;
            klsym_status rc = klsym_cache_path(handle.session, &out.s);
            if (rc != KLSYM_OK) return fail(handle.session, rc);
            return deliver(out.s, "");
        }
    }
    return 1;
}
