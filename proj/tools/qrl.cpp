// qrl: command-line front end for the quadratic-field routines.
//
// Records are written one per line, as JSON (default) or CSV with a fixed
// header. Floats carry 12 significant digits. Errors go to stderr as a JSON
// record; the exit status is 2 for usage errors and 1 for invalid values.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrl/classno.hpp"
#include "qrl/criterion.hpp"
#include "qrl/families.hpp"

using json = nlohmann::ordered_json;
using namespace qrl;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double round12(long double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", v);
    return std::strtod(buf, nullptr);
}

std::string fmt12(long double v)
{
    if (std::isnan(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", v);
    return buf;
}

json num(long double v) { return std::isnan(v) ? json(nullptr) : json(round12(v)); }

template <class T>
json opt(const std::optional<T>& v)
{
    if (!v) return nullptr;
    if constexpr (std::is_floating_point_v<T>)
        return num(*v);
    else
        return *v;
}

template <class T>
std::string join(const std::vector<T>& v, const char* sep = ";")
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << sep;
        os << v[i];
    }
    return os.str();
}

std::string csv_cell(const json& v)
{
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return fmt12(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ';';
            out += csv_cell(v[i]);
        }
        return out;
    }
    return v.dump();
}

std::vector<Int> parse_int_list(const std::string& text)
{
    std::vector<Int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw domain_error("not an integer: '" + item + "'");
        }
    }
    return out;
}

// Writes records in the chosen format; CSV columns come from `header`.
class Emitter {
public:
    Emitter(std::ostream& os, bool csv, std::vector<std::string> header)
        : os_(os), csv_(csv), header_(std::move(header))
    {
        if (csv_) os_ << join(header_, ",") << '\n';
    }

    void operator()(const json& rec)
    {
        if (!csv_) {
            os_ << rec.dump() << '\n';
            return;
        }
        for (std::size_t i = 0; i < header_.size(); ++i) {
            if (i) os_ << ',';
            auto it = rec.find(header_[i]);
            if (it != rec.end()) os_ << csv_cell(*it);
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
    bool csv_;
    std::vector<std::string> header_;
};

struct Common {
    std::string format = "json";
    std::string out;
    unsigned jobs = 1;
};

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw domain_error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

json spec_to_json(const ProgressionSpec& s)
{
    return json{{"m", s.m},       {"primes", s.primes},   {"x", round12(s.x)},
                {"eps1", round12(s.eps1)}, {"S", s.S},    {"P_small", s.P_small},
                {"S_prime", s.S_prime},    {"residues", s.residues},
                {"residue_moduli", s.residue_moduli},     {"q", s.q}, {"n0", s.n0}};
}

ProgressionSpec spec_from_json(const json& j)
{
    ProgressionSpec s;
    try {
        s.m = j.at("m").get<Int>();
        s.primes = j.at("primes").get<std::vector<Int>>();
        s.x = j.at("x").get<double>();
        s.eps1 = j.at("eps1").get<double>();
        s.S = j.value("S", std::vector<Int>{});
        s.P_small = j.value("P_small", std::vector<Int>{});
        s.S_prime = j.value("S_prime", std::vector<Int>{});
        s.residues = j.at("residues").get<std::vector<Int>>();
        s.residue_moduli = j.at("residue_moduli").get<std::vector<Int>>();
        s.q = j.at("q").get<Int>();
        s.n0 = j.at("n0").get<Int>();
    } catch (const json::exception& e) {
        throw domain_error(std::string("malformed progression spec: ") + e.what());
    }
    if (s.m < 1 || static_cast<Int>(s.primes.size()) != s.m) throw domain_error("spec: m must equal the number of primes");
    auto c = crt(s.residues, s.residue_moduli);
    if (c.modulus != s.q || c.residue != s.n0) throw domain_error("spec: q and n0 disagree with the residue classes");
    return s;
}

const std::vector<std::string> unit_header{"d", "preperiod", "period", "l", "regulator", "norm_sign"};

json unit_record(const Discriminant& D, Int max_steps = 0)
{
    auto ex = cf_expand(QuadIrrational::omega(D), max_steps);
    auto u = fundamental_unit(D);
    return json{{"d", D.value()},          {"preperiod", ex.preperiod},      {"period", ex.period},
                {"l", ex.period_length()}, {"regulator", num(u.regulator)}, {"norm_sign", u.norm_sign}};
}

void check_A(double A)
{
    if (!(A > 2)) throw domain_error("A must exceed 2");
}

void check_eps1(double eps1)
{
    if (!(eps1 > 0 && eps1 < 1)) throw domain_error("eps1 must lie in (0, 1)");
}

/// B = min((log x)^A, 10^6).
Int default_euler_bound(double x, double A)
{
    if (!(x > 1)) throw domain_error("x must exceed 1");
    long double B = powl(logl(x), A);
    return static_cast<Int>(std::min(B, 1e6L));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Real quadratic fields: units, class numbers, families, regulator bounds"};
    app.require_subcommand(1);
    Common common;
    app.fallthrough();
    auto* format_opt =
        app.add_option("--format", common.format, "Output format (scans default to csv)")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", common.out, "Output file (default stdout)");
    app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));

    // cf, unit
    Int d = 0;
    Int max_steps = 0;
    auto* cf = app.add_subcommand("cf", "Continued fraction of omega_d");
    cf->add_option("--d", d, "Discriminant")->required();
    cf->add_option("--max-steps", max_steps, "Step limit (default 10 ceil(sqrt d log d) + 10)");

    bool exact = false;
    auto* unit = app.add_subcommand("unit", "Fundamental unit and regulator");
    unit->add_option("--d", d, "Discriminant")->required();
    unit->add_flag("--exact", exact, "Also print the unit (x + y sqrt d)/2 exactly");

    // classno, lvalue
    Int euler_bound = 1000;
    auto* classno = app.add_subcommand("classno", "Class number from reduced form cycles");
    classno->add_option("--d", d, "Discriminant")->required();
    classno->add_option("--euler-bound", euler_bound, "Prime bound for the truncated L-value");

    std::string method = "exact";
    std::optional<Int> bound;
    std::optional<double> lx;
    double A = 2.05;
    auto* lvalue = app.add_subcommand("lvalue", "L(1, chi_d)");
    lvalue->add_option("--d", d, "Discriminant")->required();
    lvalue->add_option("--method", method, "exact or euler")->check(CLI::IsMember({"exact", "euler"}));
    lvalue->add_option("--bound", bound, "Prime bound B for the Euler product");
    lvalue->add_option("--x", lx, "Range bound; B = min((log x)^A, 10^6)");
    lvalue->add_option("--A", A, "Exponent A > 2");

    // family
    auto* family = app.add_subcommand("family", "Progressions for d = n^2 + 4p");
    family->require_subcommand(1);
    Int m = 1;
    std::string primes_text;
    double x = 0, eps1 = 0.9;
    auto* fbuild = family->add_subcommand("build", "Build the progression n = n0 (mod q)");
    fbuild->add_option("--m", m, "Number of primes")->required();
    fbuild->add_option("--primes", primes_text, "Comma-separated primes")->required();
    fbuild->add_option("--x", x, "Range bound")->required();
    fbuild->add_option("--eps1", eps1, "Exponent in (0, 1)");

    std::string spec_path;
    Int kmax = 0, h_limit = 100'000'000;
    bool strict = false, survivors = false;
    auto* fscan = family->add_subcommand("scan", "Scan n = n0 + k q for squarefree values");
    fscan->add_option("--spec", spec_path, "Spec JSON from 'family build'")->required();
    fscan->add_option("--kmax", kmax, "Largest k")->required();
    fscan->add_flag("--strict-range", strict, "Only k >= x^(1/4)/q");
    fscan->add_flag("--survivors-only", survivors, "Only rows where every d_i is squarefree");
    fscan->add_option("--euler-bound", euler_bound, "Prime bound for truncated L-values");
    fscan->add_option("--h-limit", h_limit, "Class numbers only for d up to this");

    // criterion
    std::string norms_text;
    auto* crit = app.add_subcommand("criterion", "Regulator lower bound from reduced principal ideals");
    crit->add_option("--d", d, "Discriminant");
    crit->add_option("--norms", norms_text, "Norms as \"n=n'*n'', ...\" (bare n means n=n*1)");
    bool search = false;
    HKParams hk;
    HKSearchBounds hkb;
    auto* hkr = crit->add_subcommand("hk-remark", "Non-primitive product of two primitive ideals");
    hkr->add_flag("--search", search, "Search (r, s, t, k, c) lexicographically");
    hkr->add_option("--r", hk.r);
    hkr->add_option("--s", hk.s);
    hkr->add_option("--t", hk.t);
    hkr->add_option("--k", hk.k);
    hkr->add_option("--c", hk.c);
    hkr->add_option("--c-max", hkb.c_max, "Search bound for c");

    // verify
    auto* verify = app.add_subcommand("verify", "Family checks");
    verify->require_subcommand(1);
    Int nmax = 0, p = 0;
    bool minus = false;
    auto* vshanks = verify->add_subcommand("shanks", "CF regulator against the closed-form unit");
    vshanks->add_option("--kmax", kmax, "Largest k")->required();
    auto* vyam = verify->add_subcommand("yamamoto", "Regulator bounds for d = n^2 + 4p");
    vyam->add_option("--p", p, "Prime p")->required();
    vyam->add_option("--nmax", nmax, "Largest n")->required();
    vyam->add_flag("--minus", minus, "Use d = n^2 - 4p");
    auto* vchowla = verify->add_subcommand("chowla", "xi_d <= 2 sqrt d for d = 4n^2 + 1");
    vchowla->add_option("--nmax", nmax, "Largest n")->required();

    // constants
    auto* constants = app.add_subcommand("constants", "The constants C'(m), C(m) and the stated 192");
    constants->add_option("--m", m, "Number of primes")->required();
    constants->add_option("--primes", primes_text, "Comma-separated primes")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }

    try {
        Output output(common.out);
        std::ostream& os = output.stream();
        const bool csv = common.format == "csv";

        if (*cf) {
            Emitter(os, csv, unit_header)(unit_record(Discriminant(d), max_steps));
        } else if (*unit) {
            Discriminant D(d);
            json rec = unit_record(D);
            auto header = unit_header;
            if (exact) {
                auto e = exact_unit(D);
                rec["x"] = e.x.str();
                rec["y"] = e.y.str();
                rec["norm"] = e.norm;
                header.insert(header.end(), {"x", "y", "norm"});
            }
            Emitter(os, csv, header)(rec);
        } else if (*classno) {
            auto cd = class_data(d, euler_bound);
            Emitter(os, csv, {"d", "h", "h_narrow", "regulator", "L_exact", "L_trunc", "euler_bound"})(
                json{{"d", cd.d},
                     {"h", cd.h},
                     {"h_narrow", cd.h_narrow},
                     {"regulator", num(cd.regulator)},
                     {"L_exact", num(cd.L_exact)},
                     {"L_trunc", num(cd.L_truncated)},
                     {"euler_bound", cd.euler_bound_B}});
        } else if (*lvalue) {
            Discriminant D(d);
            json rec{{"d", d}, {"method", method}};
            if (method == "exact") {
                rec["L"] = num(l_value_exact(d));
            } else {
                check_A(A);
                Int B;
                if (bound && lx) throw UsageError("give either --bound or --x, not both");
                if (bound) {
                    B = *bound;
                    if (B < 1) throw domain_error("bound must be positive");
                } else if (lx) {
                    B = default_euler_bound(*lx, A);
                } else {
                    throw UsageError("euler method needs --bound or --x");
                }
                rec["bound"] = B;
                rec["L"] = num(l_value_truncated(d, B));
            }
            Emitter(os, csv, {"d", "method", "bound", "L"})(rec);
        } else if (*fbuild) {
            check_eps1(eps1);
            auto spec = build_progression(m, parse_int_list(primes_text), x, eps1);
            os << spec_to_json(spec).dump() << '\n';
        } else if (*fscan) {
            std::ifstream in(spec_path);
            if (!in) throw domain_error("cannot read spec file " + spec_path);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw domain_error(std::string("spec file is not JSON: ") + e.what());
            }
            auto spec = spec_from_json(j);
            const bool scan_csv = format_opt->count() ? csv : true;  // scans default to CSV
            ScanOptions so{kmax, strict, survivors, common.jobs};
            auto rows = scan_squarefree(spec, so);
            AnnotateOptions ao;
            ao.euler_bound = euler_bound;
            ao.h_limit = h_limit;
            auto annotated = parallel_map(rows.size(), common.jobs, [&](std::size_t i) {
                ScanRecord r = rows[i];
                annotate(r, spec, ao);
                return r;
            });
            std::vector<std::string> header{"k", "n"};
            for (Int i = 1; i <= spec.m; ++i) header.push_back("d_" + std::to_string(i));
            header.insert(header.end(), {"squarefree", "h", "regulator", "L_trunc", "bound_ok"});
            Emitter emit(os, scan_csv, header);
            if (!scan_csv) {
                for (const auto& r : annotated) {
                    json rec{{"k", r.k}, {"n", r.n}, {"d", r.d}};
                    rec["squarefree"] = json::array();
                    for (bool b : r.squarefree) rec["squarefree"].push_back(b);
                    rec["h"] = json::array();
                    rec["regulator"] = json::array();
                    rec["L_trunc"] = json::array();
                    for (std::size_t i = 0; i < r.d.size(); ++i) {
                        rec["h"].push_back(opt(r.h[i]));
                        rec["regulator"].push_back(opt(r.regulator[i]));
                        rec["L_trunc"].push_back(opt(r.L_truncated[i]));
                    }
                    rec["bound_ok"] = opt(r.bound_ok);
                    emit(rec);
                }
            } else {
                for (const auto& r : annotated) {
                    json rec{{"k", r.k}, {"n", r.n}};
                    for (std::size_t i = 0; i < r.d.size(); ++i) rec["d_" + std::to_string(i + 1)] = r.d[i];
                    json sq = json::array(), h = json::array(), reg = json::array(), lt = json::array();
                    for (std::size_t i = 0; i < r.d.size(); ++i) {
                        sq.push_back(r.squarefree[i] ? 1 : 0);
                        h.push_back(opt(r.h[i]));
                        reg.push_back(opt(r.regulator[i]));
                        lt.push_back(opt(r.L_truncated[i]));
                    }
                    rec["squarefree"] = sq;
                    rec["h"] = h;
                    rec["regulator"] = reg;
                    rec["L_trunc"] = lt;
                    rec["bound_ok"] = opt(r.bound_ok);
                    emit(rec);
                }
            }
        } else if (*hkr) {
            std::optional<HKReport> rep;
            if (search) {
                rep = hk_search(hkb);
                if (!rep) throw domain_error("hk-remark: no parameter tuple found within the search bounds");
            } else {
                rep = hk_counterexample(hk);
            }
            json sums = json::object();
            for (const auto& [name, v] : rep->subset_sums) sums[name] = num(v);
            os << json{{"r", rep->params.r},
                       {"s", rep->params.s},
                       {"t", rep->params.t},
                       {"k", rep->params.k},
                       {"c", rep->params.c},
                       {"p", rep->p},
                       {"q", rep->q},
                       {"d", rep->d},
                       {"n1", to_string(rep->n1)},
                       {"n2", to_string(rep->n2)},
                       {"n3", to_string(rep->n3)},
                       {"product", to_string(rep->product)},
                       {"product_content", rep->product_content},
                       {"product_norm", rep->product_norm},
                       {"half_root_d", num(rep->half_root_d)},
                       {"norm_below_half_root", rep->norm_below_half_root},
                       {"n1_reduced_principal", rep->n1_reduced_principal},
                       {"n2_reduced_principal", rep->n2_reduced_principal},
                       {"subset_sums", sums}}
                      .dump()
               << '\n';
        } else if (*crit) {
            if (d == 0 || norms_text.empty()) throw UsageError("criterion needs --d and --norms");
            CriterionInput in{d, parse_decompositions(norms_text)};
            auto hyp = check_hypotheses(in);
            json checks = json::array();
            for (std::size_t i = 0; i < in.decomps.size(); ++i) {
                const auto& c = hyp.per_norm[i];
                checks.push_back({{"n", in.decomps[i].n},
                                  {"n_prime", in.decomps[i].coprime},
                                  {"n_dblprime", in.decomps[i].ramified},
                                  {"a", c.a},
                                  {"b1", c.b1},
                                  {"b2", c.b2},
                                  {"b3", c.b3}});
            }
            json rec{{"d", d}, {"hypotheses", checks}, {"hypotheses_ok", hyp.all()}};
            if (hyp.all()) {
                auto reduced = reduce_double_prime(in);
                std::vector<Int> norms;
                for (const auto& x : reduced.decomps) norms.push_back(x.n);
                auto omega = enumerate_omega(d, norms);
                auto br = omega_lower_bound(omega);
                rec["norms"] = norms;
                rec["lattice_count"] = br.lattice_count;
                rec["discrete_sum"] = num(br.discrete_sum);
                rec["exact_sum"] = num(br.exact_sum);
                rec["integral_I"] = num(br.integral_I);
                rec["integral_exact"] = num(br.integral_exact);
                rec["P_product"] = num(br.P_product);
                rec["regulator"] = num(br.regulator);
            }
            os << rec.dump() << '\n';
        } else if (*vshanks || *vyam || *vchowla) {
            FamilyParams fp;
            fp.jobs = common.jobs;
            fp.with_h = false;
            std::size_t failures = 0;
            if (*vshanks) {
                if (kmax > 30) throw domain_error("shanks: k must not exceed 30");
                Emitter emit(os, csv, {"k", "d", "regulator", "closed_form", "rel_err", "ok"});
                for (const auto& r : family_scan(FamilyKind::shanks, fp, 1, kmax)) {
                    if (!r.regulator) continue;
                    long double rel = fabsl(*r.regulator - *r.reference) / *r.reference;
                    failures += !*r.bound_ok;
                    emit(json{{"k", r.index},
                              {"d", r.d},
                              {"regulator", num(*r.regulator)},
                              {"closed_form", num(*r.reference)},
                              {"rel_err", num(rel)},
                              {"ok", *r.bound_ok}});
                }
            } else if (*vyam) {
                fp.p = p;
                auto kind = minus ? FamilyKind::yamamoto_minus : FamilyKind::yamamoto_plus;
                Emitter emit(os, csv,
                             {"n", "d", "ramified", "regulator", "full_bound", "full_ok", "simplified_bound",
                              "simplified_ok"});
                for (const auto& r : family_scan(kind, fp, 1, nmax)) {
                    if (!r.regulator) continue;
                    failures += !*r.bound_ok;
                    emit(json{{"n", r.index},
                              {"d", r.d},
                              {"ramified", r.index % p == 0},
                              {"regulator", num(*r.regulator)},
                              {"full_bound", num(*r.reference)},
                              {"full_ok", *r.bound_ok},
                              {"simplified_bound", num(*r.reference2)},
                              {"simplified_ok", *r.regulator >= *r.reference2}});
                }
            } else {
                Emitter emit(os, csv, {"n", "d", "regulator", "bound", "ok"});
                for (const auto& r : family_scan(FamilyKind::chowla, fp, 1, nmax)) {
                    if (!r.regulator) continue;
                    failures += !*r.bound_ok;
                    emit(json{{"n", r.index},
                              {"d", r.d},
                              {"regulator", num(*r.regulator)},
                              {"bound", num(*r.reference)},
                              {"ok", *r.bound_ok}});
                }
            }
            if (failures) std::cerr << json{{"failures", failures}}.dump() << '\n';
        } else if (*constants) {
            auto primes = parse_int_list(primes_text);
            if (static_cast<Int>(primes.size()) != m) throw domain_error("expected m primes");
            auto c = compute_constants(m, primes);
            Int pmax = *std::max_element(primes.begin(), primes.end());
            long double lp = logl(static_cast<long double>(pmax));
            Emitter(os, csv,
                    {"m", "primes", "C_prime_m", "C_m", "mertens_M", "intro_constant", "C_m_log_p",
                     "intro_log_p"})(json{{"m", m},
                                          {"primes", primes},
                                          {"C_prime_m", num(c.C_prime_m)},
                                          {"C_m", num(c.C_m)},
                                          {"mertens_M", num(c.mertens_M)},
                                          {"intro_constant", num(c.intro_constant)},
                                          {"C_m_log_p", num(c.C_m * lp)},
                                          {"intro_log_p", num(c.intro_constant * lp)}});
        }
    } catch (const UsageError& e) {
        std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    } catch (const domain_error& e) {
        std::cerr << json{{"error", "validation"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    } catch (const overflow_error& e) {
        std::cerr << json{{"error", "overflow"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
