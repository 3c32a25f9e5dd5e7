#include "halo/cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "halo/classical/classical.hpp"
#include "halo/fredholm/fredholm.hpp"

namespace halo::cli {

using padic::ExtensionField;
using padic::ValQ;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

long to_long(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad " + what + ": '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("bad " + what + ": '" + s + "'");
    return v;
}

std::string hex64(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string approx(const ValQ& v) {
    if (v.is_infinite()) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v.to_double());
    return buf;
}

struct Options {
    int p = 3;
    int t = 1;
    int prec = 20;
    int mx = 12;
    int moments = 24;
    long n = 12;
    int k = 0;
    int w = 0;
    int k_max = 4;
    long horizon = 0;
    long count = 0;
    std::string dataset;
    std::string eta = "triv";
    std::string omega;
    std::string eps1 = "triv";
    std::string eps2 = "triv";
    std::string z = "default";
    std::string datum;
    std::string slopes1, slopes2;
    std::string k_list;
    std::uint64_t seed = 0;
    int d = 1;
    int n_data = 0;
    bool standard = false;
    bool no_u_prime = false;
    std::string out;
    std::string format = "csv";
    int threads = 1;
    bool approx = false;
};

// header lines shared by every output
struct Output {
    std::ostringstream body;
    std::string command;
    std::string config;
    std::string dataset_line = "# dataset=none";

    std::string text() const {
        return std::string("# ") + kVersion + "\n# command=" + command + "\n# config: " + config + "\n" + dataset_line +
               "\n" + body.str();
    }
};

std::string config_string(const CLI::App* sub) {
    std::vector<std::string> parts;
    for (const auto* o : sub->get_options()) {
        const auto name = o->get_single_name();
        if (name.empty() || name == "help" || name == "out" || name == "threads") continue;
        std::string v;
        if (o->count() > 0) {
            for (const auto& r : o->results()) v += (v.empty() ? "" : ",") + r;
            if (o->get_expected_max() == 0) v = "true";
        } else {
            v = o->get_default_str();
            if (o->get_expected_max() == 0 && v.empty()) v = "false";
        }
        parts.push_back(name + "=" + v);
    }
    std::sort(parts.begin(), parts.end());
    std::string s;
    for (const auto& x : parts) s += (s.empty() ? "" : " ") + x;
    return s;
}

// hash of the canonical serialization, so comments and layout do not matter
std::string dataset_line(const coset::CosetDataset& ds) {
    return "# dataset_fnv1a64=" + hex64(coset::content_hash(coset::serialize_dataset(ds)));
}

coset::CosetDataset load_dataset(const Options& o, Output& out) {
    if (o.dataset.empty()) throw std::invalid_argument("--dataset is required");
    std::ifstream in(o.dataset, std::ios::binary);
    if (!in) throw IoError("cannot read dataset " + o.dataset);
    std::stringstream buf;
    buf << in.rdbuf();
    auto ds = coset::parse_dataset(buf.str());
    out.dataset_line = dataset_line(ds);
    return ds;
}

weight::FiniteCharacter character(int p, const std::string& spec) {
    auto c = parse_char(spec);
    return weight::FiniteCharacter::make(p, c.tame, c.wild, c.conductor);
}

weight::WeightPoint algebraic_point(const Options& o, int p) {
    if (o.k < 2) throw std::invalid_argument("--k must be at least 2");
    return weight::make_locally_algebraic(p, o.k, o.w, character(p, o.eps1), character(p, o.eps2));
}

weight::WeightComponent component(const Options& o, int p) {
    if (o.k > 0) return algebraic_point(o, p).component;
    auto eta = character(p, o.eta);
    int o1 = 0;
    int o2 = (((o.w + eta.tame()) % (p - 1)) + (p - 1)) % (p - 1);
    if (!o.omega.empty()) {
        auto v = split(o.omega, ',');
        if (v.size() != 2) throw std::invalid_argument("--omega takes two exponents 'a,b'");
        o1 = static_cast<int>(to_long(v[0], "omega"));
        o2 = static_cast<int>(to_long(v[1], "omega"));
    }
    return weight::make_component(p, o.w, eta, o1, o2);
}

std::vector<padic::PadicElement> z_samples(const Options& o, const weight::WeightComponent& comp) {
    if (o.z == "default") return fredholm::default_z_samples(comp.p, comp.field_level());
    std::vector<padic::PadicElement> zs;
    for (const auto& s : split(o.z, ';')) zs.push_back(parse_z(s, comp.p));
    return zs;
}

std::string z_label(const padic::PadicElement& z) {
    return z.field()->describe() + " v=" + z.valuation().value.str();
}

fredholm::LambdaSeries series(const Options& o, const coset::CosetDataset& ds, const weight::WeightComponent& comp,
                              long n_max) {
    dist::AssemblyOptions a;
    a.moments = o.moments;
    auto U = dist::u_v_matrix(ds, comp, o.prec, o.mx, a);
    if (static_cast<long>(U.dim()) < n_max)
        throw std::invalid_argument("matrix dimension " + std::to_string(U.dim()) + " is below n = " +
                                    std::to_string(n_max) + "; raise --moments");
    return fredholm::fredholm_series(U, n_max, o.threads);
}

void write_polygon(std::ostream& os, const fredholm::NewtonPolygon& np, bool with_approx) {
    os << "n,val_num,val_den,slope_from_prev_num,slope_from_prev_den,certified" << (with_approx ? ",approx_val" : "")
       << "\n";
    const auto verts = np.vertices();
    const auto& segs = np.segments();
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const auto& v = verts[i];
        os << v.n << "," << v.value.num() << "," << v.value.den() << ",";
        if (i == 0) os << ",";
        else os << segs[i - 1].slope.num() << "," << segs[i - 1].slope.den();
        const bool cert = np.certified_vertex(v.n) && (i == 0 || segs[i - 1].certified);
        os << "," << (cert ? "true" : "false");
        if (with_approx) os << "," << approx(v.value);
        os << "\n";
    }
}

void write_slopes(std::ostream& os, const fredholm::SlopeMultiset& s, bool with_approx) {
    os << "i,slope_num,slope_den,certified" << (with_approx ? ",approx_slope" : "") << "\n";
    for (std::size_t i = 0; i < s.slopes.size(); ++i) {
        os << i << "," << s.slopes[i].num() << "," << s.slopes[i].den() << "," << (s.certified[i] ? "true" : "false");
        if (with_approx) os << "," << approx(s.slopes[i]);
        os << "\n";
    }
}

void check_common(const Options& o) {
    if (o.prec < 1) throw std::invalid_argument("--prec must be positive");
    if (o.mx < 1) throw std::invalid_argument("--mx must be positive");
    if (o.moments < 1) throw std::invalid_argument("--moments must be positive");
    if (o.threads < 1) throw std::invalid_argument("--threads must be positive");
    if (o.format != "csv" && o.format != "text") throw std::invalid_argument("--format is csv or text");
}

// ---- subcommands ----

void cmd_lambda(const Options& o, Output& out) {
    if (o.n < 0) throw std::invalid_argument("--n must be >= 0");
    if (o.t < 1) throw std::invalid_argument("--t must be >= 1");
    if (o.p < 3 || o.p % 2 == 0) throw std::invalid_argument("--p must be an odd prime");
    for (int q = 3; q * q <= o.p; q += 2)
        if (o.p % q == 0) throw std::invalid_argument("--p must be an odd prime");
    auto lam = fredholm::lambda_table(o.p, o.t, std::max<long>(o.n - 1, 0));
    if (o.format == "csv") out.body << "n,lambda\n";
    for (long n = 0; n < o.n; ++n) {
        if (o.format == "csv") out.body << n << "," << lam[static_cast<std::size_t>(n)] << "\n";
        else out.body << "lambda(" << n << ") = " << lam[static_cast<std::size_t>(n)] << "\n";
    }
}

void cmd_charpoly(const Options& o, Output& out) {
    check_common(o);
    auto ds = load_dataset(o, out);
    auto comp = component(o, ds.p);
    auto S = series(o, ds, comp, o.n);
    const auto bad = fredholm::bound_violations(S);
    out.body << "# component=" << comp.str() << " t'=" << S.t_prime << "\n";
    out.body << "# bound_violations=" << bad.size() << "\n";
    out.body << "n,m,val_num,val_den,exact,value\n";
    for (long n = 0; n <= S.n_max(); ++n)
        for (int m = 0; m < o.mx; ++m) {
            auto b = S.c[static_cast<std::size_t>(n)].coefficient(m);
            auto v = b.valuation();
            out.body << n << "," << m << "," << v.value.num() << "," << v.value.den() << ","
                     << (v.exact ? "true" : "false") << "," << b.str() << "\n";
        }
}

void cmd_newton(const Options& o, Output& out) {
    check_common(o);
    auto ds = load_dataset(o, out);
    auto comp = component(o, ds.p);
    auto S = series(o, ds, comp, o.n);
    const long horizon = o.horizon > 0 ? o.horizon : 2 * o.n;
    for (const auto& z : z_samples(o, comp)) {
        auto sp = fredholm::specialize(S, z);
        auto np = fredholm::specialized_polygon(sp, S, horizon);
        out.body << "# z " << z_label(z) << " floor_violations=" << sp.violations() << "\n";
        write_polygon(out.body, np, o.approx);
    }
}

void cmd_halo(const Options& o, Output& out) {
    check_common(o);
    auto ds = load_dataset(o, out);
    auto comp = component(o, ds.p);
    // refuse before the expensive part
    fredholm::LambdaSeries stub;
    stub.ring = std::make_shared<const padic::LambdaRing>(comp.field(), o.prec, o.mx);
    stub.p = ds.p;
    stub.t_prime = ds.t_prime();
    stub.level = comp.field_level();
    stub.w = ds.w;
    long n_needed = 0;
    for (int k : fredholm::halo_weights(ds.w, o.k_max))
        n_needed = std::max(n_needed, fredholm::touch_index(ds.p, stub.level, stub.t_prime, k) + stub.t_prime);
    stub.c.assign(static_cast<std::size_t>(n_needed + 1), padic::LambdaElem(stub.ring.get()));
    fredholm::require_precision(stub, n_needed);

    auto S = series(o, ds, comp, n_needed);
    fredholm::HaloParams hp;
    hp.k_max = o.k_max;
    hp.horizon = o.horizon;
    hp.z_samples = z_samples(o, comp);
    auto rep = fredholm::halo_report(S, hp);
    out.body << rep.str();
}

void cmd_classical(const Options& o, Output& out) {
    auto ds = load_dataset(o, out);
    auto wp = algebraic_point(o, ds.p);
    auto A = o.datum.empty() ? classical::classical_u_v(ds, wp) : classical::classical_hecke_matrix(ds, o.datum, wp);
    auto s = classical::slope_multiset(A);
    out.body << "# weight=" << wp.str() << " dim=" << A.dim() << " anomalies=" << classical::slope_anomalies(s, o.k)
             << "\n";
    if (o.format == "csv") write_slopes(out.body, s, o.approx);
    else out.body << "slopes=" << s.str() << "\n";
}

void cmd_compare(const Options& o, Output& out) {
    check_common(o);
    auto ds = load_dataset(o, out);
    auto wp = algebraic_point(o, ds.p);
    const int prec = std::min(o.prec, ExtensionField::max_cap(ds.p));
    auto r = classical::compare_classicality(ds, wp, o.moments, prec, o.threads);
    out.body << r.str();
}

void cmd_al(const Options& o, Output& out) {
    if (o.k < 2) throw std::invalid_argument("--k must be at least 2");
    fredholm::SlopeMultiset a, b;
    std::size_t count = 0;
    if (!o.slopes1.empty() || !o.slopes2.empty()) {
        a.slopes = parse_slopes(o.slopes1);
        b.slopes = parse_slopes(o.slopes2);
        count = o.count > 0 ? static_cast<std::size_t>(o.count) : a.slopes.size();
    } else {
        auto ds = load_dataset(o, out);
        auto wp = algebraic_point(o, ds.p);
        const auto& la = wp.algebraic();
        auto inv = weight::make_locally_algebraic(ds.p, o.k, o.w, la.eps1.inverse(), la.eps2.inverse());
        a = classical::slope_multiset(classical::classical_u_v(ds, wp));
        b = classical::slope_multiset(classical::classical_u_v(ds, inv));
        count = static_cast<std::size_t>(classical::classical_dimension(ds.p, o.k, 1, ds.t_prime()));
        out.body << "# mode=dataset (synthetic data is not expected to satisfy the duality)\n";
    }
    a.certified.assign(a.slopes.size(), true);
    b.certified.assign(b.slopes.size(), true);
    auto r = classical::al_duality_check(a, b, o.k, count);
    out.body << "eps=" << a.str() << "\n" << "eps_inv=" << b.str() << "\n" << r.str() << "\n";
}

void cmd_gen(const Options& o, Output& out) {
    coset::SyntheticParams P;
    P.p = o.p;
    P.d = o.d;
    P.t = o.t;
    P.w = o.w;
    for (const auto& s : split(o.k_list, ',')) P.k_list.push_back(static_cast<int>(to_long(s, "k-list")));
    P.n_data = o.n_data;
    P.perturb = !o.standard;
    P.u_prime = !o.no_u_prime;
    P.precision = o.prec;
    auto ds = coset::gen_synthetic(o.seed, P);
    out.dataset_line = dataset_line(ds);
    out.body << coset::serialize_dataset(ds);
}

void cmd_validate(const Options& o, Output& out, bool& failed) {
    if (o.dataset.empty()) throw std::invalid_argument("--dataset is required");
    std::ifstream in(o.dataset, std::ios::binary);
    if (!in) throw IoError("cannot read dataset " + o.dataset);
    std::stringstream buf;
    buf << in.rdbuf();
    auto ds = coset::parse_dataset_unchecked(buf.str());
    out.dataset_line = dataset_line(ds);
    auto rep = coset::validate_dataset(ds);
    out.body << rep.str();
    failed = !rep.ok();
}

}  // namespace

padic::PadicElement parse_z(const std::string& spec, int p) {
    auto parts = split(spec, ':');
    if (parts.empty()) throw std::invalid_argument("empty z spec");
    long e = 0, j = 0, a = 1;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto eq = parts[i].find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad z spec field '" + parts[i] + "'");
        const auto key = parts[i].substr(0, eq);
        const long v = to_long(parts[i].substr(eq + 1), "z spec " + key);
        if (key == "e") e = v;
        else if (key == "j") j = v;
        else if (key == "a") a = v;
        else throw std::invalid_argument("unknown z spec field '" + key + "'");
    }
    if (a % p == 0) throw std::invalid_argument("z spec multiplier a must be prime to p");
    padic::FieldPtr f;
    if (parts[0] == "pure") {
        if (e < 1) throw std::invalid_argument("pure z spec needs e >= 1");
        f = ExtensionField::pure(p, static_cast<int>(e));
    } else if (parts[0] == "cyc") {
        if (j < 1) throw std::invalid_argument("cyc z spec needs j >= 1");
        f = ExtensionField::cyclotomic(p, static_cast<int>(j));
    } else {
        throw std::invalid_argument("z spec kind must be pure or cyc, got '" + parts[0] + "'");
    }
    return padic::PadicElement::uniformizer(f) * padic::PadicElement::from_int(f, a);
}

CharSpec parse_char(const std::string& spec) {
    if (spec == "triv" || spec.empty()) return {};
    auto v = split(spec, ':');
    if (v.size() != 3) throw std::invalid_argument("character spec is 'triv' or 'cond:tame:wild'");
    CharSpec c;
    c.conductor = static_cast<int>(to_long(v[0], "conductor"));
    c.tame = static_cast<int>(to_long(v[1], "tame exponent"));
    c.wild = to_long(v[2], "wild exponent");
    return c;
}

std::vector<ValQ> parse_slopes(const std::string& list) {
    std::vector<ValQ> out;
    for (const auto& s : split(list, ',')) {
        auto slash = s.find('/');
        if (slash == std::string::npos) out.emplace_back(to_long(s, "slope"));
        else out.emplace_back(to_long(s.substr(0, slash), "slope"), to_long(s.substr(slash + 1), "slope"));
    }
    std::sort(out.begin(), out.end());
    return out;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"halo-slopes"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_command(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Slope data for overconvergent forms near the boundary of weight space", "halo-slopes"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto out_opts = [&](CLI::App* s) {
        s->add_option("--out", o.out, "output file (default stdout)");
        s->add_option("--format", o.format, "csv or text")->capture_default_str();
    };
    auto data_opts = [&](CLI::App* s) { s->add_option("--dataset", o.dataset, "dataset file")->required(); };
    auto series_opts = [&](CLI::App* s) {
        s->add_option("--prec", o.prec, "p-adic precision N")->capture_default_str();
        s->add_option("--mx", o.mx, "X-truncation Mx")->capture_default_str();
        s->add_option("--moments", o.moments, "moment truncation M")->capture_default_str();
        s->add_option("--threads", o.threads, "worker threads")->capture_default_str();
    };
    auto comp_opts = [&](CLI::App* s) {
        s->add_option("--k", o.k, "take the component of this weight k (0: use --eta/--omega)")->capture_default_str();
        s->add_option("--w", o.w, "weight w")->capture_default_str();
        s->add_option("--eta", o.eta, "finite part of the central character")->capture_default_str();
        s->add_option("--omega", o.omega, "Teichmuller exponents 'a,b'");
        s->add_option("--eps1", o.eps1, "character eps1 (with --k)")->capture_default_str();
        s->add_option("--eps2", o.eps2, "character eps2 (with --k)")->capture_default_str();
    };
    auto weight_opts = [&](CLI::App* s) {
        s->add_option("--k", o.k, "weight k")->required();
        s->add_option("--w", o.w, "weight w")->capture_default_str();
        s->add_option("--eps1", o.eps1, "character eps1: triv or cond:tame:wild")->capture_default_str();
        s->add_option("--eps2", o.eps2, "character eps2")->capture_default_str();
    };

    auto* lam = app.add_subcommand("lambda", "table of the lower bound lambda(n)");
    lam->add_option("--p", o.p, "prime")->capture_default_str();
    lam->add_option("--t", o.t, "t' (class count times fixed-place dimensions)")->capture_default_str();
    lam->add_option("--n", o.n, "number of rows")->capture_default_str();
    out_opts(lam);

    auto* cp = app.add_subcommand("charpoly", "Fredholm coefficients over the weight component");
    data_opts(cp);
    series_opts(cp);
    comp_opts(cp);
    cp->add_option("--n", o.n, "last coefficient")->capture_default_str();
    out_opts(cp);

    auto* nw = app.add_subcommand("newton", "Newton polygon at sampled boundary points z");
    data_opts(nw);
    series_opts(nw);
    comp_opts(nw);
    nw->add_option("--n", o.n, "last coefficient")->capture_default_str();
    nw->add_option("--z", o.z, "z samples: default, or pure:e=E:a=A / cyc:j=J:a=A separated by ';'")
        ->capture_default_str();
    nw->add_option("--horizon", o.horizon, "reach of the lambda tail bound (0: 2n)")->capture_default_str();
    nw->add_flag("--approx", o.approx, "add a decimal column (not authoritative)");
    out_opts(nw);

    auto* ha = app.add_subcommand("halo", "touch points, slope windows and vertex checks");
    data_opts(ha);
    series_opts(ha);
    comp_opts(ha);
    ha->add_option("--k-max", o.k_max, "largest weight k in the report")->capture_default_str();
    ha->add_option("--z", o.z, "z samples")->capture_default_str();
    ha->add_option("--horizon", o.horizon, "reach of the lambda tail bound (0: 2 n_max)")->capture_default_str();
    out_opts(ha);

    auto* cl = app.add_subcommand("classical", "slopes on the classical space");
    data_opts(cl);
    weight_opts(cl);
    cl->add_option("--datum", o.datum, "operator name (default: U at the varying place)");
    cl->add_flag("--approx", o.approx, "add a decimal column (not authoritative)");
    out_opts(cl);

    auto* cc = app.add_subcommand("compare-classicality", "overconvergent versus classical slopes below k-1");
    data_opts(cc);
    weight_opts(cc);
    cc->add_option("--moments", o.moments, "moment truncation M (also checked at M+4)")->capture_default_str();
    cc->add_option("--prec", o.prec, "p-adic precision (capped by the field)")->capture_default_str();
    cc->add_option("--threads", o.threads, "worker threads")->capture_default_str();
    out_opts(cc);

    auto* al = app.add_subcommand("al-check", "Atkin-Lehner slope duality");
    al->add_option("--dataset", o.dataset, "dataset file (used without --slopes1/--slopes2)");
    al->add_option("--k", o.k, "weight k")->required();
    al->add_option("--w", o.w, "weight w")->capture_default_str();
    al->add_option("--eps1", o.eps1, "character eps1")->capture_default_str();
    al->add_option("--eps2", o.eps2, "character eps2")->capture_default_str();
    al->add_option("--slopes1", o.slopes1, "slopes for eps, e.g. 0,1,3/2");
    al->add_option("--slopes2", o.slopes2, "slopes for eps^-1");
    al->add_option("--count", o.count, "expected count (default: size of the first list)")->capture_default_str();
    out_opts(al);

    auto* gen = app.add_subcommand("gen-synthetic", "write a seeded synthetic dataset");
    gen->add_option("--seed", o.seed, "seed")->capture_default_str();
    gen->add_option("--p", o.p, "prime")->capture_default_str();
    gen->add_option("--t", o.t, "class count")->capture_default_str();
    gen->add_option("--d", o.d, "places above p")->capture_default_str();
    gen->add_option("--w", o.w, "weight w")->capture_default_str();
    gen->add_option("--k-list", o.k_list, "weights at the fixed places, comma separated");
    gen->add_option("--n-data", o.n_data, "number of away operators")->capture_default_str();
    gen->add_option("--prec", o.prec, "stored precision")->capture_default_str();
    gen->add_flag("--standard", o.standard, "standard coset representatives, no perturbation");
    gen->add_flag("--no-u-prime", o.no_u_prime, "omit U operators at the fixed places");
    gen->add_option("--out", o.out, "output file (default stdout)");

    auto* val = app.add_subcommand("validate", "check a dataset");
    val->add_option("--dataset", o.dataset, "dataset file")->required();
    val->add_option("--out", o.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    Output res;
    res.command = sub->get_name();
    res.config = config_string(sub);
    int code = kOk;
    try {
        bool failed = false;
        if (sub == lam) cmd_lambda(o, res);
        else if (sub == cp) cmd_charpoly(o, res);
        else if (sub == nw) cmd_newton(o, res);
        else if (sub == ha) cmd_halo(o, res);
        else if (sub == cl) cmd_classical(o, res);
        else if (sub == cc) cmd_compare(o, res);
        else if (sub == al) cmd_al(o, res);
        else if (sub == gen) cmd_gen(o, res);
        else if (sub == val) cmd_validate(o, res, failed);
        if (failed) code = kValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const fredholm::PrecisionRefusal& e) {
        err << "precision refusal: " << e.what() << "\n";
        return kPrecision;
    } catch (const std::exception& e) {
        // invalid input of any kind: bad parameters, dataset errors, caps
        err << "error: " << e.what() << "\n";
        return kValidation;
    }

    const auto text = res.text();
    if (o.out.empty()) {
        out << text;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << o.out << "\n";
            return kUsage;
        }
        f << text;
        if (!f) {
            err << "error: write failed for " << o.out << "\n";
            return kUsage;
        }
    }
    return code;
}

}  // namespace halo::cli
