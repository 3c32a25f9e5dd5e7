#include "halo/coset/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace halo::coset {

namespace {

std::int64_t ppow(int p, int n) {
    std::int64_t r = 1;
    for (int i = 0; i < n; ++i) r *= p;
    return r;
}

std::int64_t reduce(std::int64_t x, std::int64_t m) {
    std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

std::int64_t det_mod(const Mat2& g, std::int64_t m) {
    __int128 v = static_cast<__int128>(g.a) * g.d - static_cast<__int128>(g.b) * g.c;
    v %= m;
    if (v < 0) v += m;
    return static_cast<std::int64_t>(v);
}

bool is_odd_prime(int p) {
    if (p < 3 || p % 2 == 0) return false;
    for (int q = 3; q * q <= p; q += 2)
        if (p % q == 0) return false;
    return true;
}

std::string mat_str(const Mat2& g) {
    std::ostringstream os;
    os << "[" << g.a << " " << g.b << "; " << g.c << " " << g.d << "]";
    return os.str();
}

}  // namespace

const HeckeDatum* CosetDataset::find(std::string_view name) const {
    for (const auto& h : data)
        if (h.name == name) return &h;
    return nullptr;
}

const HeckeDatum& CosetDataset::u_v() const {
    for (const auto& h : data)
        if (h.kind == DatumKind::U && h.place == 0) return h;
    throw DatasetError("dataset has no U-operator at the varying place");
}

int CosetDataset::alg_dim() const {
    int r = 1;
    for (int k : k_list) r *= k - 1;
    return r;
}

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<Check> ValidationReport::failures() const {
    std::vector<Check> r;
    for (const auto& c : checks)
        if (!c.pass) r.push_back(c);
    return r;
}

std::string ValidationReport::str() const {
    std::ostringstream os;
    std::size_t nfail = 0;
    for (const auto& c : checks) {
        if (c.pass) continue;
        ++nfail;
        os << "FAIL " << (c.datum.empty() ? "<dataset>" : c.datum);
        if (c.item >= 0) os << " item " << c.item;
        os << ": " << c.condition;
        if (!c.detail.empty()) os << " (" << c.detail << ")";
        os << "\n";
    }
    os << "checks " << checks.size() << " failed " << nfail << "\n";
    return os.str();
}

int valuation_capped(std::int64_t x, int p, int cap) {
    x = reduce(x, ppow(p, cap));
    if (x == 0) return cap;
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

PadicMat2 to_padic(const Mat2& m, int p, int precision) {
    auto f = padic::ExtensionField::qp(p);
    auto e = [&](std::int64_t x) { return padic::PadicElement::from_int(f, x, precision); };
    return {e(m.a), e(m.b), e(m.c), e(m.d)};
}

ValidationReport validate_dataset(const CosetDataset& ds) {
    ValidationReport rep;
    auto add = [&](std::string datum, int item, std::string cond, bool pass, std::string detail = {}) {
        rep.checks.push_back({std::move(datum), item, std::move(cond), pass, std::move(detail)});
    };
    const bool prime_ok = is_odd_prime(ds.p);
    add("", -1, "p is an odd prime", prime_ok, "p=" + std::to_string(ds.p));
    add("", -1, "d >= 1", ds.d >= 1);
    add("", -1, "t >= 1", ds.t >= 1);
    add("", -1, "one weight per fixed place", static_cast<int>(ds.k_list.size()) == ds.d - 1,
        std::to_string(ds.k_list.size()) + " weights for d=" + std::to_string(ds.d));
    for (int k : ds.k_list) {
        add("", -1, "fixed weight >= 2", k >= 2, "k=" + std::to_string(k));
        add("", -1, "fixed weight parity matches w", (k - ds.w) % 2 == 0, "k=" + std::to_string(k));
    }
    if (!prime_ok) return rep;
    const int maxp = padic::ExtensionField::max_cap(ds.p);
    add("", -1, "stored precision in range", ds.precision >= 1 && ds.precision <= maxp,
        "precision=" + std::to_string(ds.precision));
    if (ds.precision < 1 || ds.precision > maxp) return rep;
    const int P = ds.precision;
    const std::int64_t mod = ppow(ds.p, P);

    std::set<std::string> names;
    bool has_uv = false;
    for (const auto& h : ds.data) {
        add(h.name, -1, "unique datum name", names.insert(h.name).second);
        if (h.kind == DatumKind::U) {
            add(h.name, -1, "U place in range", h.place >= 0 && h.place < ds.d, "place=" + std::to_string(h.place));
            if (h.place == 0) {
                has_uv = true;
                add(h.name, -1, "U at the varying place has p items", static_cast<int>(h.items.size()) == ds.p,
                    std::to_string(h.items.size()) + " items");
            }
        }
        add(h.name, -1, "at least one item", !h.items.empty());
        std::set<int> idx;
        for (const auto& it : h.items) {
            add(h.name, it.index, "unique item index", idx.insert(it.index).second);
            const bool sig_ok = static_cast<int>(it.sigma.size()) == ds.t &&
                                std::all_of(it.sigma.begin(), it.sigma.end(), [&](int s) { return s >= 0 && s < ds.t; });
            add(h.name, it.index, "sigma well-formed", sig_ok);
            if (static_cast<int>(it.mats.size()) != ds.d) {
                add(h.name, it.index, "one matrix per place", false);
                continue;
            }
            for (int j = 0; j < ds.d; ++j) {
                const Mat2& g = it.mats[static_cast<std::size_t>(j)];
                const std::string pl = "place " + std::to_string(j) + " ";
                const int vdet = valuation_capped(det_mod(g, mod), ds.p, P);
                const bool a_unit = reduce(g.a, ds.p) != 0;
                const bool c_div = reduce(g.c, ds.p) == 0;
                const bool target_u = h.kind == DatumKind::U && h.place == j;
                if (j == 0 && target_u) {
                    add(h.name, it.index, pl + "a is a unit", a_unit, mat_str(g));
                    add(h.name, it.index, pl + "c = 0 mod p (lower-triangular mod p)", c_div, mat_str(g));
                    add(h.name, it.index, pl + "det valuation >= 1 (compact part)", vdet >= 1,
                        "v(det)=" + std::to_string(vdet));
                } else if (target_u) {
                    add(h.name, it.index, pl + "det valuation = 1", vdet == 1, "v(det)=" + std::to_string(vdet));
                } else if (j == 0) {
                    add(h.name, it.index, pl + "a is a unit", a_unit, mat_str(g));
                    add(h.name, it.index, pl + "c = 0 mod p (lower-triangular mod p)", c_div, mat_str(g));
                    add(h.name, it.index, pl + "det is a unit", vdet == 0, "v(det)=" + std::to_string(vdet));
                } else {
                    add(h.name, it.index, pl + "in GL2(Z_p)", vdet == 0, "v(det)=" + std::to_string(vdet));
                }
            }
        }
    }
    add("", -1, "has a U-operator at the varying place", has_uv);
    return rep;
}

CosetDataset parse_dataset_unchecked(std::string_view text) {
    CosetDataset ds;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> DatasetError {
        return DatasetError("line " + std::to_string(lineno) + ": " + msg);
    };
    auto to_int = [&](const std::string& s) -> std::int64_t {
        std::size_t pos = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            throw fail("expected an integer, got '" + s + "'");
        }
        if (pos != s.size()) throw fail("expected an integer, got '" + s + "'");
        return v;
    };
    bool header = false, ended = false;
    std::set<std::string> seen;
    HeckeDatum* cur = nullptr;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string s; ls >> s;) tok.push_back(s);
        if (tok.empty()) continue;
        if (ended) throw fail("content after 'end'");
        if (!header) {
            if (tok.size() != 2 || tok[0] != "halo-dataset" || tok[1] != "1")
                throw fail("expected header 'halo-dataset 1'");
            header = true;
            continue;
        }
        const std::string& key = tok[0];
        if (key == "end") {
            ended = true;
            continue;
        }
        if (key == "datum") {
            if (tok.size() < 3) throw fail("datum needs a name and a kind");
            HeckeDatum h;
            h.name = tok[1];
            std::map<std::string, std::string> kv;
            for (std::size_t i = 2; i < tok.size(); ++i) {
                auto eq = tok[i].find('=');
                if (eq == std::string::npos) throw fail("expected key=value, got '" + tok[i] + "'");
                kv[tok[i].substr(0, eq)] = tok[i].substr(eq + 1);
            }
            if (kv["kind"] == "U") {
                h.kind = DatumKind::U;
                if (!kv.count("place")) throw fail("U datum needs place=");
                h.place = static_cast<int>(to_int(kv["place"]));
            } else if (kv["kind"] == "away") {
                h.kind = DatumKind::Away;
            } else {
                throw fail("unknown datum kind '" + kv["kind"] + "'");
            }
            ds.data.push_back(std::move(h));
            cur = &ds.data.back();
            continue;
        }
        if (key == "item") {
            if (!cur) throw fail("item outside a datum");
            if (tok.size() < 3 || tok[2] != "sigma") throw fail("expected 'item <index> sigma ...'");
            CosetItem it;
            it.index = static_cast<int>(to_int(tok[1]));
            std::size_t i = 3;
            for (; i < tok.size() && tok[i] != "|"; ++i) it.sigma.push_back(static_cast<int>(to_int(tok[i])));
            while (i < tok.size()) {
                if (tok[i] != "|") throw fail("expected '|' before a matrix");
                if (i + 4 >= tok.size()) throw fail("a matrix needs four entries");
                Mat2 g{to_int(tok[i + 1]), to_int(tok[i + 2]), to_int(tok[i + 3]), to_int(tok[i + 4])};
                it.mats.push_back(g);
                i += 5;
            }
            cur->items.push_back(std::move(it));
            continue;
        }
        if (!seen.insert(key).second) throw fail("duplicate header field '" + key + "'");
        if (key == "k") {
            for (std::size_t i = 1; i < tok.size(); ++i) ds.k_list.push_back(static_cast<int>(to_int(tok[i])));
        } else if (key == "provenance") {
            if (tok.size() >= 2 && tok[1] == "ingested" && tok.size() == 2) {
                ds.synthetic = false;
            } else if (tok.size() == 3 && tok[1] == "synthetic") {
                ds.synthetic = true;
                ds.seed = static_cast<std::uint64_t>(to_int(tok[2]));
            } else {
                throw fail("provenance must be 'ingested' or 'synthetic <seed>'");
            }
        } else if (tok.size() == 2 && (key == "p" || key == "d" || key == "t" || key == "w" || key == "precision")) {
            const int v = static_cast<int>(to_int(tok[1]));
            if (key == "p") ds.p = v;
            if (key == "d") ds.d = v;
            if (key == "t") ds.t = v;
            if (key == "w") ds.w = v;
            if (key == "precision") ds.precision = v;
        } else {
            throw fail("unknown field '" + key + "'");
        }
    }
    if (!header) throw DatasetError("empty dataset");
    if (!ended) throw DatasetError("missing 'end'");
    for (const char* f : {"p", "d", "t", "w", "precision"})
        if (!seen.count(f)) throw DatasetError(std::string("missing header field '") + f + "'");
    if (is_odd_prime(ds.p) && ds.precision >= 1 && ds.precision <= padic::ExtensionField::max_cap(ds.p)) {
        const std::int64_t mod = ppow(ds.p, ds.precision);
        for (auto& h : ds.data)
            for (auto& it : h.items)
                for (auto& g : it.mats) g = {reduce(g.a, mod), reduce(g.b, mod), reduce(g.c, mod), reduce(g.d, mod)};
    }
    return ds;
}

CosetDataset parse_dataset(std::string_view text) {
    auto ds = parse_dataset_unchecked(text);
    auto rep = validate_dataset(ds);
    if (!rep.ok()) {
        const auto f = rep.failures().front();
        std::string msg = "invalid dataset: " + (f.datum.empty() ? std::string("<dataset>") : f.datum);
        if (f.item >= 0) msg += " item " + std::to_string(f.item);
        msg += ": " + f.condition;
        if (!f.detail.empty()) msg += " (" + f.detail + ")";
        throw DatasetError(msg);
    }
    return ds;
}

std::string serialize_dataset(const CosetDataset& ds) {
    std::ostringstream os;
    os << "halo-dataset 1\n";
    os << "p " << ds.p << "\n";
    os << "d " << ds.d << "\n";
    os << "t " << ds.t << "\n";
    os << "w " << ds.w << "\n";
    os << "k";
    for (int k : ds.k_list) os << " " << k;
    os << "\n";
    os << "precision " << ds.precision << "\n";
    if (ds.synthetic) os << "provenance synthetic " << ds.seed << "\n";
    else os << "provenance ingested\n";
    std::vector<const HeckeDatum*> order;
    for (const auto& h : ds.data) order.push_back(&h);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->name < b->name; });
    const std::int64_t mod = ppow(ds.p, ds.precision);
    for (const auto* h : order) {
        os << "datum " << h->name << " kind=" << (h->kind == DatumKind::U ? "U" : "away");
        if (h->kind == DatumKind::U) os << " place=" << h->place;
        os << "\n";
        std::vector<const CosetItem*> items;
        for (const auto& it : h->items) items.push_back(&it);
        std::sort(items.begin(), items.end(), [](auto* a, auto* b) { return a->index < b->index; });
        for (const auto* it : items) {
            os << "item " << it->index << " sigma";
            for (int s : it->sigma) os << " " << s;
            for (const auto& g : it->mats)
                os << " | " << reduce(g.a, mod) << " " << reduce(g.b, mod) << " " << reduce(g.c, mod) << " "
                   << reduce(g.d, mod);
            os << "\n";
        }
    }
    os << "end\n";
    return os.str();
}

CosetDataset read_dataset_file(const std::string& path, bool validate) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DatasetError("cannot read dataset file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return validate ? parse_dataset(ss.str()) : parse_dataset_unchecked(ss.str());
}

namespace {

struct Gen {
    std::mt19937_64 rng;
    int p;
    std::int64_t mod;

    std::int64_t any() { return static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(mod)); }
    std::int64_t unit() {
        for (;;) {
            auto x = any();
            if (x % p != 0) return x;
        }
    }
    Mat2 gl2() {
        for (;;) {
            Mat2 g{any(), any(), any(), any()};
            if (det_mod(g, p) != 0) return g;
        }
    }
    // a unit, c = 0 mod p, d unit
    Mat2 iwahori() { return {unit(), any(), reduce(p * any(), mod), unit()}; }
    std::vector<int> perm(int t) {
        std::vector<int> s(static_cast<std::size_t>(t));
        for (int i = 0; i < t; ++i) s[static_cast<std::size_t>(i)] = i;
        for (int i = t - 1; i > 0; --i) {
            const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
            std::swap(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
        }
        return s;
    }
    Mat2 mul(const Mat2& x, const Mat2& y) const {
        auto m = [&](std::int64_t u, std::int64_t v, std::int64_t s, std::int64_t r) {
            __int128 q = static_cast<__int128>(u) * v + static_cast<__int128>(s) * r;
            q %= mod;
            if (q < 0) q += mod;
            return static_cast<std::int64_t>(q);
        };
        return {m(x.a, y.a, x.b, y.c), m(x.a, y.b, x.b, y.d), m(x.c, y.a, x.d, y.c), m(x.c, y.b, x.d, y.d)};
    }
};

}  // namespace

CosetDataset gen_synthetic(std::uint64_t seed, const SyntheticParams& P) {
    if (!is_odd_prime(P.p)) throw std::invalid_argument("p must be an odd prime");
    if (P.d < 1 || P.t < 1) throw std::invalid_argument("d and t must be >= 1");
    if (static_cast<int>(P.k_list.size()) != P.d - 1) throw std::invalid_argument("need one weight per fixed place");
    for (int k : P.k_list)
        if (k < 2 || (k - P.w) % 2 != 0) throw std::invalid_argument("fixed weights must be >= 2 with the parity of w");
    if (P.precision < 1 || P.precision > padic::ExtensionField::max_cap(P.p))
        throw std::invalid_argument("precision out of range");
    if (P.n_data < 0) throw std::invalid_argument("n_data must be >= 0");

    CosetDataset ds;
    ds.p = P.p;
    ds.d = P.d;
    ds.t = P.t;
    ds.w = P.w;
    ds.k_list = P.k_list;
    ds.precision = P.precision;
    ds.synthetic = true;
    ds.seed = seed;
    Gen g{std::mt19937_64(seed), P.p, ppow(P.p, P.precision)};
    const Mat2 id{};
    std::vector<int> ident(static_cast<std::size_t>(P.t));
    for (int i = 0; i < P.t; ++i) ident[static_cast<std::size_t>(i)] = i;

    // U at place j: [[1,0],[p c_i, p]] u_i at place j
    auto make_u = [&](const std::string& name, int place) {
        HeckeDatum h{name, DatumKind::U, place, {}};
        for (int i = 0; i < P.p; ++i) {
            CosetItem it;
            it.index = i;
            it.sigma = P.perturb ? g.perm(P.t) : ident;
            const std::int64_t ci = P.perturb ? reduce(i + P.p * g.any(), g.mod) : i;
            const Mat2 base{1, 0, reduce(P.p * ci, g.mod), P.p};
            for (int j = 0; j < P.d; ++j) {
                if (j == place) {
                    it.mats.push_back(P.perturb ? g.mul(base, g.iwahori()) : base);
                } else if (j == 0) {
                    it.mats.push_back(P.perturb ? g.iwahori() : id);
                } else {
                    it.mats.push_back(P.perturb ? g.gl2() : id);
                }
            }
            h.items.push_back(std::move(it));
        }
        return h;
    };
    ds.data.push_back(make_u("Uv", 0));
    if (P.u_prime)
        for (int j = 1; j < P.d; ++j) ds.data.push_back(make_u("Uv" + std::to_string(j), j));
    const int ells[] = {2, 5, 7, 11, 13, 17, 19, 23};
    int made = 0;
    for (int ell : ells) {
        if (made == P.n_data) break;
        if (ell == P.p) continue;
        HeckeDatum h{"T" + std::to_string(ell), DatumKind::Away, 0, {}};
        for (int i = 0; i <= ell; ++i) {
            CosetItem it;
            it.index = i;
            it.sigma = P.perturb ? g.perm(P.t) : ident;
            for (int j = 0; j < P.d; ++j) it.mats.push_back(P.perturb ? (j == 0 ? g.iwahori() : g.gl2()) : id);
            h.items.push_back(std::move(it));
        }
        ds.data.push_back(std::move(h));
        ++made;
    }
    if (made < P.n_data) throw std::invalid_argument("too many away-from-p operators requested");
    return ds;
}

std::uint64_t content_hash(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[h & 15];
        h >>= 4;
    }
    return s;
}

}  // namespace halo::coset
