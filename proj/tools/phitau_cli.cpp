// phitau: batch front end. Every command prints one document,
//   {"command", "config", "results": [{"name", "value", "exact", "precision", "paper_anchor"}]}
// as JSON (default) or as CSV rows of the results.
//
// Exit status: 0 on success; 1 when a suite has failures, or under --strict
// when some result is indeterminate; 2 on configuration errors; 3 when the
// computation itself gives up (precision or extension caps).

#include <CLI11.hpp>
#include <json.hpp>

#include <phitau/suites.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace phitau;
using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Result {
    std::string name;
    std::string value;
    bool exact = true;
    std::string precision = "exact";
    std::string anchor;
};

struct Settings {
    // run configuration
    std::uint64_t p = 3;
    std::uint64_t q = 0;  // 0: q = p
    int e = 1;
    int n = 1;
    int M = 20;
    int W = 12;
    int N = 8;
    int len = 2;
    std::int64_t D = 0;
    int jmax = 3;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string out;
    std::string config_file;
    bool strict = false;
    // operation inputs
    std::string a, x, y, z, matrix, coeffs, exps;
    std::string chi, chi_tau = "1";
    int h = 1, r = 1, s = 1, m = 1, t = 0, i = 1, trials = 0;
    bool tame = false, refined = false, mutate = false;
};

// ---------------------------------------------------------------------------
// parsing helpers

std::int64_t parse_int(const std::string& s, const char* what) {
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError(std::string("expected an integer for ") + what + ", got '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError(std::string("expected an integer for ") + what + ", got '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string::npos) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<std::int64_t> parse_list(const std::string& s, const char* what) {
    std::vector<std::int64_t> v;
    for (const auto& tok : split(s, ", \t")) v.push_back(parse_int(tok, what));
    if (v.empty()) throw ConfigError(std::string("empty list for ") + what);
    return v;
}

// "a b; c d" (or commas within rows) as a square integer matrix, row-major.
std::pair<int, std::vector<std::int64_t>> parse_matrix(const std::string& s) {
    std::vector<std::int64_t> v;
    const auto rows = split(s, ";");
    const int d = static_cast<int>(rows.size());
    for (const auto& row : rows) {
        const auto r = parse_list(row, "--matrix");
        if (static_cast<int>(r.size()) != d) throw ConfigError("--matrix must be square, rows separated by ';'");
        v.insert(v.end(), r.begin(), r.end());
    }
    if (d == 0) throw ConfigError("--matrix is empty");
    return {d, v};
}

// Elements of F_q are written as integers sum c_i p^i, c_i the coordinates
// in the field's polynomial basis.
Fq fq_from_index(const FqField* F, std::int64_t k) {
    if (k < 0 || static_cast<BigInt>(k) >= F->order) throw ConfigError("field element " + std::to_string(k) + " out of range for " + F->name());
    Fq a(F);
    for (int j = 0; j < F->n; ++j) {
        a.set_coeff(j, static_cast<std::uint32_t>(k % F->p));
        k /= F->p;
    }
    return a;
}

std::string fq_index(const Fq& a) {
    std::uint64_t k = 0;
    for (int j = a.degree() - 1; j >= 0; --j) k = k * a.prime() + a.coeff(j);
    return std::to_string(k);
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string s;
    for (std::size_t j = 0; j < v.size(); ++j) s += (j ? sep : "") + v[j];
    return s;
}

std::string fq_matrix_str(const Matrix<Fq>& A) {
    std::vector<std::string> rows;
    for (int r = 0; r < A.rows(); ++r) {
        std::vector<std::string> c;
        for (int k = 0; k < A.cols(); ++k) c.push_back(fq_index(A(r, k)));
        rows.push_back(join(c, " "));
    }
    return "[" + join(rows, "; ") + "]";
}

std::string zmatrix_str(const ZMatrix& A) {
    std::vector<std::string> rows;
    for (int r = 0; r < A.rows(); ++r) {
        std::vector<std::string> c;
        for (int k = 0; k < A.cols(); ++k) c.push_back(std::to_string(A(r, k).residue()));
        rows.push_back(join(c, " "));
    }
    return "[" + join(rows, "; ") + "]";
}

std::string mod_str(std::uint64_t p, int k) { return "mod " + std::to_string(p) + "^" + std::to_string(k); }
std::string trunc_str(int M) { return "O(u^" + std::to_string(M) + ")"; }

Result verdict_result(const std::string& name, Verdict v, const std::string& precision, const std::string& anchor) {
    return {name, to_string(v), v != Verdict::Indeterminate, precision, anchor};
}

// ---------------------------------------------------------------------------

class Runner {
public:
    Runner(const Settings& s, const CLI::App& app) : S(s), app_(app) {}

    const FqField* field() const {
        const std::uint64_t q = S.q ? S.q : S.p;
        int f = 0;
        std::uint64_t t = q;
        while (t % S.p == 0) {
            t /= S.p;
            ++f;
        }
        if (t != 1 || f == 0) throw ConfigError("--q must be a power of --p");
        return gf(static_cast<std::uint32_t>(S.p), f);
    }
    bool given(const std::string& opt) const { return app_.get_option("--" + opt)->count() > 0; }
    void need(const std::string& opt) const {
        if (!given(opt)) throw ConfigError("this command needs --" + opt);
    }

    std::vector<Result> padic(const std::string& op) {
        const std::uint64_t p = S.p;
        auto Z = [&](const std::string& v, const char* what) { return PadicInt(p, S.N, parse_int(v, what)); };
        if (op == "qanalog") {
            need("a");
            const PadicInt a = Z(S.a, "--a"), q = Z(S.chi_tau, "--chi-tau");
            const PadicInt b = q_analogue(a, q);
            const PadicInt back = q_analogue_inverse(b, q);
            return {{"q_analogue", std::to_string(b.residue()), true, mod_str(p, b.precision()), "q-analogue [a]_q"},
                    {"inverse", std::to_string(back.residue()), true, mod_str(p, back.precision()), "inverse q-analogue"}};
        }
        if (op == "chi-tau") {
            need("chi");
            const PadicInt c = chi_tau(Z(S.chi, "--chi"), Z(S.chi_tau, "--chi-tau"));
            return {{"chi_tau", std::to_string(c.residue()), true, mod_str(p, c.precision()), "tau-exponent of an element of G_inf"}};
        }
        if (op == "log" || op == "exp") {
            need("x");
            const PadicInt x = Z(S.x, "--x");
            const PadicInt v = op == "log" ? log_unit(x) : exp_unit(x);
            return {{op, std::to_string(v.residue()), true, mod_str(p, v.precision()), op == "log" ? "p-adic logarithm" : "p-adic exponential"}};
        }
        throw ConfigError("unknown padic operation '" + op + "' (qanalog, chi-tau, log, exp)");
    }

    WittVector<Fq> witt_arg(const std::string& v, const char* what) const {
        const FqField* F = field();
        std::vector<Fq> c;
        for (auto k : parse_list(v, what)) c.push_back(fq_from_index(F, k));
        return {F->p, c};
    }
    std::string witt_str(const WittVector<Fq>& w) const {
        std::vector<std::string> c;
        for (int k = 0; k < w.length(); ++k) c.push_back(fq_index(w[k]));
        return "(" + join(c, ", ") + ")";
    }

    std::vector<Result> witt(const std::string& op) {
        const std::string where = "W_n(F_" + std::to_string(field()->order.convert_to<std::uint64_t>()) + ")";
        if (op == "add" || op == "mul") {
            need("x");
            need("y");
            const auto x = witt_arg(S.x, "--x"), y = witt_arg(S.y, "--y");
            return {{op == "add" ? "sum" : "product", witt_str(op == "add" ? x + y : x * y), true, "exact in " + where, "Witt vector ring laws"}};
        }
        if (op == "from-int") {
            need("z");
            const auto w = from_zmod(S.p, S.len, BigInt(parse_int(S.z, "--z")));
            return {{"coordinates", witt_str(w), true, "exact in W_" + std::to_string(S.len) + "(F_" + std::to_string(S.p) + ")", "W_n(F_p) = Z/p^n"}};
        }
        if (op == "to-int") {
            need("x");
            return {{"integer", to_zmod(witt_arg(S.x, "--x")).str(), true, mod_str(S.p, static_cast<int>(parse_list(S.x, "--x").size())),
                     "W_n(F_p) = Z/p^n"}};
        }
        if (op == "teichmuller") {
            need("x");
            const auto c = parse_list(S.x, "--x");
            const auto w = WittVector<Fq>::teichmuller(S.p, S.len, fq_from_index(field(), c.at(0)));
            return {{"teichmuller", witt_str(w), true, "exact in " + where, "Teichmuller lift"}};
        }
        throw ConfigError("unknown witt operation '" + op + "' (add, mul, from-int, to-int, teichmuller)");
    }

    EisensteinPoly eisenstein() const {
        need("coeffs");
        std::vector<BigInt> c;
        for (auto k : parse_list(S.coeffs, "--coeffs")) c.emplace_back(k);
        return {S.p, c};
    }

    std::vector<Result> series(const std::string& op) {
        if (op == "lambda") {
            const auto E = eisenstein();
            const auto kl = kisin_lambda(E, S.M);
            return {{"lambda", kl.lambda.str(), true, trunc_str(kl.lambda.precision()), "lambda = prod phi^n(E/E(0))"},
                    {"factors", std::to_string(kl.factors), true, "exact", "lambda = prod phi^n(E/E(0))"}};
        }
        if (op == "newton") {
            need("coeffs");
            std::vector<BigInt> c;
            for (auto k : parse_list(S.coeffs, "--coeffs")) c.emplace_back(k);
            const auto np = newton_polygon_padic(c, S.p);
            std::vector<Result> out;
            for (const auto& seg : np.segments)
                out.push_back({"slope " + rat_str(seg.slope), std::to_string(seg.length), true, "exact", "Newton polygon (root valuations)"});
            out.push_back({"zero_roots", std::to_string(np.zero_roots), true, "exact", "Newton polygon (root valuations)"});
            return out;
        }
        if (op == "fixed") {
            const auto E = eisenstein();
            const auto r = solve_frobenius_fixed(E.over_witt(field(), S.n), {S.s, S.D, S.jmax, S.M});
            std::vector<Result> out;
            for (int k = 0; k < r.V.length(); ++k)
                out.push_back({"V_" + std::to_string(k), r.V[k].str(), true, "below u^" + rat_str(r.precision[k]), "Frobenius-fixed vector phi(V) = U V"});
            bool zero = true;
            const WittPerf lhs = r.V.frobenius(), rhs = r.U_image * r.V;
            for (int k = 0; k < r.V.length(); ++k) zero = zero && lhs[k] == rhs[k];
            out.push_back({"residual_zero", zero ? "true" : "false", true, "at the certified precision", "Frobenius-fixed vector phi(V) = U V"});
            out.push_back({"lattice_limited", r.lattice_limited ? "true" : "false", true, "exact", "Frobenius-fixed vector phi(V) = U V"});
            return out;
        }
        throw ConfigError("unknown series operation '" + op + "' (lambda, newton, fixed)");
    }

    std::vector<Result> phimod(const std::string& op) {
        const FqField* F = field();
        if (op == "height") {
            need("exps");
            const auto ex = parse_list(S.exps, "--exps");
            const int d = static_cast<int>(ex.size());
            Rng rng(S.seed);
            LMatrix Dg(d, d, laurent_zero(F, S.n, S.M));
            for (int k = 0; k < d; ++k) {
                if (ex[k] < 0) throw ConfigError("--exps must be non-negative");
                Dg(k, k) = Laurent::monomial(witt_int(F, S.n, 1), static_cast<int>(ex[k]), S.M);
            }
            const LMatrix G = random_unit_matrix(F, S.n, d, 4, S.M, rng) * Dg * random_unit_matrix(F, S.n, d, 4, S.M, rng);
            const auto L = PhiLattice::standard(PhiModule(F, S.n, G));
            const auto h = u_height(L);
            std::vector<Result> out{{"u_height", std::to_string(h.height), h.certified, h.certified ? "certified at " + trunc_str(S.M) : "not certified",
                                     "u-height via Smith normal form"}};
            if (S.n == 1) {
                const auto b = u_height_bruteforce(L, 6, S.M - 4);
                out.push_back({"u_height_bruteforce", b ? std::to_string(*b) : "none <= 6", true, "membership test, h <= 6", "u-height by brute force"});
            }
            return out;
        }
        if (op == "cyclotomic") {
            const auto E = eisenstein();
            const auto L = PhiLattice::standard(cyclotomic_module(E, S.m, F, S.n, S.M));
            const auto h = u_height(L);
            return {{"u_height", std::to_string(h.height), h.certified, h.certified ? "certified at " + trunc_str(S.M) : "not certified",
                     "u-height of the cyclotomic module"}};
        }
        throw ConfigError("unknown phimod operation '" + op + "' (height, cyclotomic)");
    }

    Matrix<Fq> fq_matrix(const FqField* F) const {
        need("matrix");
        const auto [d, v] = parse_matrix(S.matrix);
        Matrix<Fq> A(d, d, Fq(F));
        for (int k = 0; k < d * d; ++k) A(k / d, k % d) = fq_from_index(F, v[k]);
        return A;
    }

    std::vector<Result> galois(const std::string& op) {
        const FqField* F = field();
        if (op == "solve") {
            const auto S0 = solve_unit_root(constant_series_matrix(fq_matrix(F), S.M));
            std::vector<std::string> basis;
            for (const auto& b : S0.basis) {
                std::vector<std::string> c;
                for (const auto& x : b) c.push_back(fq_index(x.coeff(0)));
                basis.push_back("(" + join(c, ", ") + ")");
            }
            return {{"solutions", std::to_string(S0.solutions.size()), true, "exact", "mod p Fontaine functor"},
                    {"s", std::to_string(S0.s), true, "exact", "residue field of the solutions"},
                    {"basis_residues", join(basis, " "), true, "exact in F_" + std::to_string(S0.K->order.convert_to<std::uint64_t>()),
                     "mod p Fontaine functor"},
                    {"action", fq_matrix_str(frobenius_action(S0, F->n)), true, "exact over F_" + std::to_string(S.p), "arithmetic Frobenius on T(M)"}};
        }
        if (op == "unramified") {
            const auto G = unramified_to_phimod(fq_matrix(gf(static_cast<std::uint32_t>(S.p), 1)), F);
            return {{"G", fq_matrix_str(G), true, "exact over " + F->name(), "unramified representation to phi-module"}};
        }
        throw ConfigError("unknown galois operation '" + op + "' (solve, unramified)");
    }

    std::vector<Result> tau(const std::string& op) {
        const std::uint64_t p = S.p;
        const FqField* F = gf(static_cast<std::uint32_t>(p), 1);
        const int d = static_cast<int>(p);
        const BivarWeights wt{1, 1};
        // tau acts through the cyclic shift of a basis of size p
        Matrix<Fq> P(d, d, Fq(F));
        for (int k = 0; k < d; ++k) P((k + 1) % d, k) = Fq::one(F);
        auto M = trivial_restriction_module(P, 1, wt, S.W);
        if (S.mutate) {
            const BivarSeries eta = BivarSeries(F, wt, S.W).eta();
            const BMatrix I = BMatrix::identity(d, eta), T = M.T;
            M.T = T * (I + (T - I).map([&](const BivarSeries& v) { return v * eta; }));
        }
        if (op == "order") {
            const int w = tau_order_witness(M, 4);
            return {{"order_log", w < 0 ? "none <= 4" : std::to_string(w), true, "weight " + std::to_string(S.W), "order of tau on the module"},
                    {"phi_commutes", phi_commutes(M) ? "true" : "false", true, "weight " + std::to_string(S.W), "phi commutes with tau"}};
        }
        if (op == "check") {
            need("chi");
            const GaloisElt g(PadicInt(p, S.N, 0), PadicInt(p, S.N, parse_int(S.chi, "--chi")));
            Rng rng(S.seed);
            BMatrix X(d, 1, BivarSeries(F, wt, S.W));
            for (int r = 0; r < d; ++r) {
                BivarSeries f(F, wt, S.W);
                for (int k = -2; k < S.W; ++k)
                    if (rng.below(3) == 0) f = f + BivarSeries::monomial(F, wt, S.W, Fq::random(F, rng), k, 0);
                X(r, 0) = f;
            }
            return {verdict_result("commutation", check_commutation(M, g, X), "weight " + std::to_string(S.W), "tau-commutation relation")};
        }
        throw ConfigError("unknown tau operation '" + op + "' (check, order)");
    }

    ZMatrix zmat() const {
        need("matrix");
        const auto [d, v] = parse_matrix(S.matrix);
        return zmatrix(S.p, S.N, d, v);
    }

    std::vector<Result> logm(const std::string& op) {
        if (op == "eval") {
            const auto L = log_m(zmat(), S.m);
            return {{"log_m", L.str(), true, mod_str(S.p, L.precision()), "truncated logarithm (minus log)"},
                    {"shift", std::to_string(L.shift), true, "exact", "truncated logarithm (minus log)"}};
        }
        if (op == "bounded") {
            return {{"bounded", is_bounded(zmat(), S.m, 0) ? "true" : "false", true, mod_str(S.p, S.N), "domain of the truncated logarithm"}};
        }
        if (op == "rdc") {
            return {verdict_result("bound_holds", rdc_valuation_check(zmat(), S.t, S.i), mod_str(S.p, S.N), "valuation bound for unipotent f")};
        }
        if (op == "log" || op == "exp") {
            const ZMatrix A = zmat();
            const ZMatrix B = op == "log" ? log_full(A) : exp_full(A);
            return {{op, zmatrix_str(B), true, mod_str(S.p, precision(B)), op == "log" ? "matrix logarithm" : "matrix exponential"}};
        }
        throw ConfigError("unknown logm operation '" + op + "' (eval, bounded, rdc, log, exp)");
    }

    std::vector<Result> ramif(const std::string& op) {
        const std::uint64_t p = S.p, e = static_cast<std::uint64_t>(S.e), h = static_cast<std::uint64_t>(S.h);
        auto bexpr = [](const std::string& name, const BoundExpr& b, const std::string& anchor) {
            return Result{name, b.str(), b.is_rational(), b.is_rational() ? "exact" : "exact (symbolic logarithm)", anchor};
        };
        if (op == "bound-gk") {
            if (S.tame && S.refined) throw ConfigError("--tame and --refined are exclusive");
            const GKVariant v = S.refined ? GKVariant::RefinedTame : S.tame ? GKVariant::Tame : GKVariant::General;
            return {bexpr("bound", bound_GK(h, S.n, e, p, v), "ramification bound over G_K")};
        }
        if (op == "bound-ginf") return {{"bound", rat_str(bound_Ginf(h, S.n, p)), true, "exact", "ramification bound over G_inf"}};
        if (op == "converse") {
            const auto c = bound_converse(h, e, p);
            return {bexpr("mu_threshold", c.mu_threshold, "converse ramification bound"),
                    {"height", std::to_string(c.height), true, "exact", "converse ramification bound"},
                    {"u_valuation", std::to_string(c.u_valuation), true, "exact", "converse ramification bound"}};
        }
        if (op == "semistable") {
            const auto b = bound_semistable(static_cast<std::uint64_t>(S.r), S.n, e, p);
            return {{"alpha", std::to_string(b.alpha), true, "exact", "semistable ramification bound"},
                    {"beta", rat_str(b.beta), true, "exact", "semistable ramification bound"},
                    {"bound", rat_str(b.bound), true, "exact", "semistable ramification bound"}};
        }
        if (op == "phi-kinf") {
            const PLFunction phi = phi_Kinf(p, e, S.s);
            std::vector<Result> out;
            for (int k = 1; k <= S.s; ++k) {
                const Rational l = kinf_lambda(p, e, k);
                out.push_back({"lambda_" + std::to_string(k), rat_str(l), true, "exact", "Herbrand function of K_inf"});
                out.push_back({"phi(lambda_" + std::to_string(k) + ")", rat_str(phi(l)), true, "exact", "Herbrand function of K_inf"});
            }
            out.push_back({"final_slope", rat_str(phi.final_slope()), true, "exact", "Herbrand function of K_inf"});
            return out;
        }
        throw ConfigError("unknown ramif operation '" + op + "' (bound-gk, bound-ginf, converse, semistable, phi-kinf)");
    }

    std::vector<Result> suite(const std::string& name, bool& failed) {
        SuiteConfig c;
        c.seed = S.seed;
        c.trials = S.trials;
        if (given("p")) c.p = S.p;
        if (given("m")) c.m = S.m;
        std::vector<const SuiteEntry*> todo;
        if (name == "all") {
            for (const auto& s : suite_registry()) todo.push_back(&s);
        } else if (const SuiteEntry* s = find_suite(name)) {
            todo.push_back(s);
        } else {
            std::vector<std::string> names;
            for (const auto& s : suite_registry()) names.push_back(s.name);
            throw ConfigError("unknown suite '" + name + "' (" + join(names, ", ") + ", all)");
        }
        std::vector<Result> out;
        for (const SuiteEntry* s : todo) {
            const SuiteReport rep = s->run(c);
            for (const auto& k : rep.checks) {
                std::string v = (k.passed() ? "pass " : "FAIL ") + std::to_string(k.trials - k.failures - k.indeterminate) + "/" + std::to_string(k.trials);
                if (!k.passed() && !k.first_failure.empty()) v += "; first: " + k.first_failure;
                out.push_back({rep.suite + ": " + k.name, v, true, k.precision, k.anchor});
            }
            out.push_back({rep.suite, rep.passed() ? "pass" : "fail", true, "exact", "suite summary"});
            failed = failed || !rep.passed();
        }
        return out;
    }

private:
    const Settings& S;
    const CLI::App& app_;
};

// ---------------------------------------------------------------------------
// config file: one `key = value` per line, '#' starts a comment, keys are
// the long option names without dashes. Command-line flags win.

std::vector<std::string> config_args(const std::string& path, const CLI::App& app) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "config" || key == "help" || app.get_option_no_throw("--" + key) == nullptr)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
    return r + "\"";
}

Json config_json(const Settings& S, const CLI::App& app) {
    Json c;
    c["p"] = S.p;
    c["q"] = S.q ? S.q : S.p;
    c["e"] = S.e;
    c["n"] = S.n;
    c["M"] = S.M;
    c["W"] = S.W;
    c["N"] = S.N;
    c["len"] = S.len;
    c["D"] = S.D;
    c["jmax"] = S.jmax;
    c["seed"] = S.seed;
    c["format"] = S.format;
    for (const CLI::Option* o : app.get_options()) {
        const std::string name = o->get_single_name();
        if (c.contains(name) || name == "out" || name == "config" || name == "help" || o->count() == 0) continue;
        c[name] = o->as<std::string>();
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    Settings S;
    CLI::App app{"phitau: exact computations with Witt vectors, phi-modules, the tau-action and ramification bounds"};
    app.set_help_flag("--help", "print this help");  // -h would clash with --h
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.fallthrough();
    app.require_subcommand(1);

    app.add_option("--p", S.p, "odd prime");
    app.add_option("--q", S.q, "size of the residue field F_q (default p)");
    app.add_option("--e", S.e, "ramification index");
    app.add_option("--n", S.n, "torsion level");
    app.add_option("--M", S.M, "u-adic truncation");
    app.add_option("--W", S.W, "eta-weight truncation");
    app.add_option("--N", S.N, "p-adic precision");
    app.add_option("--len", S.len, "Witt vector length");
    app.add_option("--D", S.D, "exponent lattice denominator (0: p - 1)");
    app.add_option("--jmax", S.jmax, "p-power depth of the exponent lattice");
    app.add_option("--seed", S.seed, "random seed");
    app.add_option("--format", S.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", S.out, "write the document to FILE");
    app.add_option("--config", S.config_file, "key = value file; flags override it");
    app.add_flag("--strict", S.strict, "exit 1 on indeterminate results");
    app.add_option("--a", S.a, "p-adic integer");
    app.add_option("--x", S.x, "first argument (comma-separated for Witt vectors)");
    app.add_option("--y", S.y, "second argument");
    app.add_option("--z", S.z, "integer");
    app.add_option("--matrix", S.matrix, "square matrix, rows separated by ';'");
    app.add_option("--coeffs", S.coeffs, "polynomial coefficients, constant term first");
    app.add_option("--exps", S.exps, "elementary divisor exponents");
    app.add_option("--chi", S.chi, "cyclotomic character of g");
    app.add_option("--chi-tau", S.chi_tau, "cyclotomic character of tau");
    app.add_option("--h", S.h, "height");
    app.add_option("--r", S.r, "Hodge-Tate weight bound");
    app.add_option("--s", S.s, "count (residue extension degree, breakpoints)");
    app.add_option("--m", S.m, "logarithm order");
    app.add_option("--t", S.t, "exponent t in f^{p^t}");
    app.add_option("--i", S.i, "power i");
    app.add_option("--trials", S.trials, "trials per suite check (0: suite default)");
    app.add_flag("--tame", S.tame, "tamely ramified variant");
    app.add_flag("--refined", S.refined, "refined tame variant");
    app.add_flag("--mutate", S.mutate, "twist tau into the control module");

    std::string op;
    const std::vector<std::pair<const char*, const char*>> commands = {
        {"padic", "qanalog | chi-tau | log | exp"},
        {"witt", "add | mul | from-int | to-int | teichmuller"},
        {"series", "lambda | newton | fixed"},
        {"phimod", "height | cyclotomic"},
        {"galois", "solve | unramified"},
        {"tau", "check | order"},
        {"logm", "eval | bounded | rdc | log | exp"},
        {"ramif", "bound-gk | bound-ginf | converse | semistable | phi-kinf"},
        {"suite", "suite name or 'all'"},
    };
    for (auto [name, ops] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->set_help_flag("--help", "print this help");
        sub->add_option("op", op, ops)->required();
    }

    std::vector<std::string> args{argv[0]};
    try {
        // the config file is read first so that later flags take precedence
        for (int k = 1; k < argc; ++k) {
            const std::string a = argv[k];
            std::string path;
            if (a == "--config" && k + 1 < argc) path = argv[k + 1];
            if (a.rfind("--config=", 0) == 0) path = a.substr(9);
            if (!path.empty())
                for (auto& c : config_args(path, app)) args.push_back(c);
        }
        for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
        std::vector<char*> av;
        for (auto& s : args) av.push_back(s.data());
        app.parse(static_cast<int>(av.size()), av.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "phitau: " << e.what() << "\n";
        return 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    std::vector<Result> results;
    bool failed = false;
    try {
        if (S.M <= 0 || S.W <= 0 || S.N <= 0 || S.len <= 0 || S.jmax <= 0 || S.D < 0 || S.n <= 0 || S.e <= 0)
            throw ConfigError("truncations must be positive");
        (void)PadicInt(S.p, 1, 0);  // odd prime check
        Runner run(S, app);
        (void)run.field();
        if (cmd == "padic") results = run.padic(op);
        else if (cmd == "witt") results = run.witt(op);
        else if (cmd == "series") results = run.series(op);
        else if (cmd == "phimod") results = run.phimod(op);
        else if (cmd == "galois") results = run.galois(op);
        else if (cmd == "tau") results = run.tau(op);
        else if (cmd == "logm") results = run.logm(op);
        else if (cmd == "ramif") results = run.ramif(op);
        else results = run.suite(op, failed);
    } catch (const ConfigError& e) {
        std::cerr << "phitau: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "phitau: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "phitau: " << e.what() << "\n";
        return 3;
    }

    std::string doc;
    if (S.format == "csv") {
        doc = "name,value,exact,precision,paper_anchor\n";
        for (const auto& r : results)
            doc += csv_field(r.name) + "," + csv_field(r.value) + "," + (r.exact ? "true" : "false") + "," + csv_field(r.precision) + "," +
                   csv_field(r.anchor) + "\n";
    } else {
        Json j;
        j["command"] = cmd + " " + op;
        j["config"] = config_json(S, app);
        j["results"] = Json::array();
        for (const auto& r : results)
            j["results"].push_back({{"name", r.name}, {"value", r.value}, {"exact", r.exact}, {"precision", r.precision}, {"paper_anchor", r.anchor}});
        doc = j.dump(2) + "\n";
    }
    if (S.out.empty()) {
        std::cout << doc;
    } else {
        std::ofstream f(S.out, std::ios::binary);
        if (!f) {
            std::cerr << "phitau: cannot write " << S.out << "\n";
            return 2;
        }
        f << doc;
    }

    if (failed) return 1;
    if (S.strict)
        for (const auto& r : results)
            if (r.value == "indeterminate") return 1;
    return 0;
}
