#include "klsym/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "klsym/closed_forms.hpp"

namespace klsym {

namespace {

using json = nlohmann::json;

json check_entry(const std::string& name, bool pass, const std::string& detail = "") {
    json j;
    j["name"] = name;
    j["status"] = pass ? "pass" : "fail";
    j["detail"] = detail;
    return j;
}

json skipped_entry(const std::string& name, const std::string& reason) {
    json j;
    j["name"] = name;
    j["status"] = "skipped";
    j["detail"] = reason;
    return j;
}

double round_sig(double v, int digits) {
    if (v == 0) return 0;
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return std::stod(os.str());
}

std::string rat_string(const BigRat& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace

json run_compute_report(KlStore& store, const ReportOptions& options) {
    const auto t_start = std::chrono::steady_clock::now();
    const int n = options.n, k = options.k;
    const std::int64_t p = options.p;

    FieldPtr base = get_field(p, options.e);
    const std::int64_t q = base->q();

    json report;
    report["schema"] = 1;
    json params;
    params["n"] = n;
    params["p"] = p;
    params["e"] = options.e;
    params["k"] = k;
    params["mode"] = options.compute.mode == ComputeMode::guarded ? "guarded" : "trust-degree";
    params["guard"] = options.compute.guard;
    params["den_bound"] = options.compute.den_bound;
    report["params"] = params;

    ComputeResult result = compute_L(store, n, k, base, options.compute);
    const auto t_computed = std::chrono::steady_clock::now();

    json counts;
    counts["d"] = result.counts.d;
    counts["a"] = result.counts.a;
    counts["b"] = result.counts.b;
    counts["c"] = result.counts.c;
    report["counts"] = counts;

    report["degree_predicted"] = result.degree_predicted;
    report["degree_computed"] = result.L.degree();
    report["degree_trusted"] = result.L.degree_trusted;
    report["truncation"] = result.truncation;
    report["L_num"] = result.L.num.to_decimal_strings();
    report["L_den"] = result.L.den.to_decimal_strings();
    {
        json sums = json::array();
        for (const auto& s : result.sums) sums.push_back(s.str());
        report["dirichlet_sums"] = sums;
    }

    Decomposition dec = verify_decomposition(result.L, n, p, q, k, result.counts, options.weight_tol);

    if (dec.bad_factor_applicable) {
        report["bad_factor_infinity"] = dec.bad_infinity.to_decimal_strings();
        report["bad_factor_infinity_dim"] = dec.inertia_dim;
    }
    if (dec.n2_applicable) {
        report["P_k"] = dec.p_k.to_decimal_strings();
        report["M_k"] = dec.m_k.to_decimal_strings();
        json feq;
        feq["c"] = rat_string(dec.feq.c);
        feq["delta"] = dec.feq.delta;
        feq["holds"] = dec.feq.holds;
        report["functional_equation"] = feq;
    }
    if (dec.zero_factor_applicable && !dec.n2_applicable) {
        json zf;
        zf["exponents"] = dec.zero_factor_exponents;
        zf["remaining_degree"] = dec.pure_part.degree();
        report["bad_factor_zero_empirical"] = zf;
    }
    if (dec.weights_applicable) {
        json hist = json::array();
        for (const auto& [w, cnt] : dec.weights.counts) {
            json h;
            h["weight"] = w;
            h["count"] = cnt;
            double modulus = 0;
            for (const auto& [rw, rm] : dec.weights.roots)
                if (rw == w) modulus = rm;
            h["modulus"] = round_sig(modulus, 12);
            hist.push_back(h);
        }
        report["weight_histogram"] = hist;
    }

    json checks = json::array();

    // degree
    {
        bool pass = result.L.degree() == result.degree_predicted;
        std::string detail = "computed " + std::to_string(result.L.degree()) + ", predicted " +
                             std::to_string(result.degree_predicted);
        if (result.L.degree_trusted) detail += " (degree-trusted mode: top coefficient nonzero required)";
        if (result.L.degree_trusted && result.L.num.coeff(static_cast<int>(result.degree_predicted)) == 0)
            pass = false;
        checks.push_back(check_entry("degree", pass, detail));
    }
    // integrality: S_m, series, and L coefficients are integer by
    // construction-time assertion; reaching this point means they held
    checks.push_back(check_entry("integrality", true,
                                 "all Dirichlet sums and L coefficients are rational integers"));
    // polynomiality
    if ((p * n) % 2 == 1 || n == 2) {
        if (k == 0) {
            checks.push_back(skipped_entry("polynomiality", "k = 0 is the zeta function of G_m"));
        } else {
            checks.push_back(check_entry("polynomiality", result.L.is_polynomial(),
                                         "denominator " + (result.L.den.is_one() ? std::string("1") : std::string("nontrivial"))));
        }
    } else {
        checks.push_back(skipped_entry("polynomiality", "not asserted for even n > 2; denominator reported as computed"));
    }
    // guard
    if (options.compute.mode == ComputeMode::guarded) {
        checks.push_back(check_entry("guard", true,
                                     "reconstruction reproduces all " + std::to_string(result.truncation) +
                                         " series coefficients"));
    } else {
        checks.push_back(skipped_entry("guard", "trust-degree mode"));
    }
    // bad factor at infinity
    if (dec.bad_factor_applicable) {
        checks.push_back(check_entry("bad_factor_infinity_degree", dec.bad_degree_matches,
                                     "degree " + std::to_string(dec.bad_infinity.degree()) +
                                         ", inertia dimension " + std::to_string(dec.inertia_dim)));
        checks.push_back(check_entry("bad_factor_infinity_divides", dec.bad_divides, ""));
    } else {
        checks.push_back(skipped_entry("bad_factor_infinity_degree", "n does not divide q-1"));
        checks.push_back(skipped_entry("bad_factor_infinity_divides", "n does not divide q-1"));
    }
    // zero factor
    if (dec.n2_applicable) {
        checks.push_back(check_entry("zero_factor", dec.zero_factor_in_bounds, "(1-T) divides L"));
    } else if (dec.zero_factor_applicable) {
        std::string detail = "stripped q-power exponents:";
        for (int e : dec.zero_factor_exponents) detail += " " + std::to_string(e);
        checks.push_back(check_entry("zero_factor", dec.zero_factor_in_bounds, detail));
    } else {
        checks.push_back(skipped_entry("zero_factor", k == 0 ? "k = 0" : (n == 2 ? "n=2 case needs q = p odd, k >= 1, polynomial L" : "no closed form; L not polynomial or n even > 2")));
    }
    // decomposition
    if (dec.n2_applicable) {
        bool pass = dec.l_equals_pk_mk && dec.p_k_matches_bad_factor && dec.m_k_degree_matches;
        std::string detail = "L = P_k · M_k with deg M_k = " + std::to_string(dec.m_k.degree());
        if (!dec.p_k_matches_bad_factor) detail += "; P_k disagrees with the count-based bad factor";
        checks.push_back(check_entry("decomposition", pass, detail));
    } else {
        checks.push_back(skipped_entry("decomposition", n != 2       ? "defined for n = 2"
                                                        : k == 0     ? "k = 0"
                                                        : q != p     ? "needs q = p"
                                                        : p % 2 == 0 ? "needs p odd"
                                                                     : "L is not a polynomial"));
    }
    // functional equation
    if (dec.n2_applicable) {
        checks.push_back(check_entry("functional_equation", dec.feq.holds && dec.feq_constant_squares,
                                     "c = " + rat_string(dec.feq.c) + ", delta = " + std::to_string(dec.feq.delta)));
    } else {
        checks.push_back(skipped_entry("functional_equation", "proved for the n = 2 decomposition only"));
    }
    // weight purity
    if (dec.weights_applicable) {
        std::string detail = "expected weight " + std::to_string(dec.expected_weight);
        if (!dec.weight_error.empty()) detail += "; " + dec.weight_error;
        checks.push_back(check_entry("weight_purity", dec.weights_pure, detail));
    } else {
        checks.push_back(skipped_entry("weight_purity", "no purity statement applies"));
    }

    report["checks"] = checks;

    if (options.timings) {
        const auto t_end = std::chrono::steady_clock::now();
        json timings;
        timings["compute_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t_computed - t_start).count();
        timings["total_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start).count();
        report["timings"] = timings;
    }
    return report;
}

bool report_ok(const json& report) {
    if (!report.contains("checks")) return false;
    for (const auto& c : report["checks"])
        if (c["status"] == "fail") return false;
    return true;
}

std::string render_text(const json& doc) {
    std::ostringstream os;
    if (doc.contains("criteria")) {
        os << "acceptance verification\n";
        for (const auto& c : doc["criteria"]) {
            os << "  criterion " << c["index"].get<int>() << " (" << c["name"].get<std::string>()
               << "): " << (c["status"] == "pass" ? "PASS" : "FAIL");
            std::string detail = c["detail"].get<std::string>();
            if (!detail.empty()) os << " — " << detail;
            os << "\n";
        }
        os << (doc["ok"].get<bool>() ? "all criteria passed" : "SOME CRITERIA FAILED") << "\n";
        return os.str();
    }
    if (doc.contains("points")) {
        for (const auto& pt : doc["points"]) os << render_text(pt);
        os << (doc["ok"].get<bool>() ? "all points passed" : "SOME POINTS FAILED") << "\n";
        return os.str();
    }

    const auto& p = doc["params"];
    os << "Sym^" << p["k"].get<int>() << "(Kl_" << p["n"].get<int>() << ") over F_" << p["p"].get<std::int64_t>();
    if (p["e"].get<int>() != 1) os << "^" << p["e"].get<int>();
    os << "  [" << p["mode"].get<std::string>() << "]\n";

    auto poly_str = [](const json& arr) {
        std::string s;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string c = arr[i].get<std::string>();
            if (c == "0") continue;
            bool negative = !c.empty() && c[0] == '-';
            if (negative) c = c.substr(1);
            if (s.empty()) {
                if (negative) s += "-";
            } else {
                s += negative ? " - " : " + ";
            }
            if (i == 0) {
                s += c;
            } else {
                if (c != "1") s += c + "*";
                s += "T";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? std::string("0") : s;
    };
    os << "  L = " << poly_str(doc["L_num"]);
    if (doc["L_den"].size() > 1) os << " / (" << poly_str(doc["L_den"]) << ")";
    os << "\n  degree " << doc["degree_computed"].get<std::int64_t>() << " (predicted "
       << doc["degree_predicted"].get<std::int64_t>() << ")";
    const auto& c = doc["counts"];
    os << ", counts d=" << c["d"].get<std::int64_t>() << " a=" << c["a"].get<std::int64_t>()
       << " b=" << c["b"].get<std::int64_t>() << " c=" << c["c"].get<std::int64_t>() << "\n";
    if (doc.contains("bad_factor_infinity"))
        os << "  bad factor at infinity: " << poly_str(doc["bad_factor_infinity"]) << "\n";
    if (doc.contains("P_k")) {
        os << "  P_k = " << poly_str(doc["P_k"]) << "\n";
        os << "  M_k = " << poly_str(doc["M_k"]) << "\n";
        const auto& f = doc["functional_equation"];
        os << "  functional equation: c = " << f["c"].get<std::string>() << ", delta = "
           << f["delta"].get<int>() << ", " << (f["holds"].get<bool>() ? "holds" : "FAILS") << "\n";
    }
    for (const auto& chk : doc["checks"]) {
        os << "  check " << chk["name"].get<std::string>() << ": " << chk["status"].get<std::string>();
        std::string detail = chk["detail"].get<std::string>();
        if (!detail.empty() && chk["status"] != "pass") os << " (" << detail << ")";
        os << "\n";
    }
    return os.str();
}

}  // namespace klsym
