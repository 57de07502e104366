// Command-line front end: point evaluations, experiment sweeps, Weyl scans and Jack tables.
// Exit codes: 0 ok, 2 bad configuration, 3 domain error, 4 acceptance predicate failed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypergeo/hypergeo.hpp"

namespace hg = hypergeo;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitAcceptance = 4;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string field = "r";
    int q = 1;
    double p = 3;
    std::vector<std::string> lambda;
    std::vector<std::string> t;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string output;
    std::string summary;
    int workers = 1;
    std::string method = "mc";
    std::string variant = "g";
    int nodes = hg::kDefaultQuadratureNodes;
    int degree = hg::kDefaultBesselDegree;
    std::string mu = "0";
    std::string k;
    std::string p_list = "10,20,40,80,160,320";
    std::string n_list = "2,4,8,16,32";
    int n_exponent = 1;
    int n_lambda = 50;
    std::string family = "b";
    int rank = 2;
    double eps = 0.5;
    int rho_samples = 100;
    double resolution = 1e-3;
    double alpha = 0;
    int max_weight = 4;
};

// Writes flat records as CSV (header from the first record) or JSONL.
class RecordWriter {
public:
    RecordWriter(const std::string& format, const std::string& path) : csv_(format == "csv") {
        if (format != "csv" && format != "jsonl") throw config_error("--format must be csv or jsonl");
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw config_error("cannot open output file " + path);
        }
    }

    void write(const json& rec) {
        std::ostream& os = file_ ? *file_ : std::cout;
        if (!csv_) {
            os << rec.dump() << '\n';
            return;
        }
        json flat = json::object();
        flatten(rec, "", flat);
        if (!header_done_) {
            bool first = true;
            for (auto it = flat.begin(); it != flat.end(); ++it) {
                os << (first ? "" : ",") << it.key();
                first = false;
            }
            os << '\n';
            header_done_ = true;
        }
        bool first = true;
        for (auto it = flat.begin(); it != flat.end(); ++it) {
            os << (first ? "" : ",") << cell(it.value());
            first = false;
        }
        os << '\n';
    }

private:
    static void flatten(const json& j, const std::string& prefix, json& out) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object()) flatten(it.value(), prefix, out);
            else out[prefix + it.key()] = it.value();
        }
    }
    static std::string cell(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
        if (v.is_number_float()) return hg::io::fmt(v.get<double>());
        if (v.is_null()) return "";
        return v.dump();
    }

    bool csv_;
    bool header_done_ = false;
    std::unique_ptr<std::ofstream> file_;
};

// ---------------------------------------------------------------- argument helpers

std::vector<std::vector<hg::cplx>> lambda_vectors(const RunConfig& c) {
    if (c.lambda.empty()) throw config_error("--lambda is required");
    std::vector<std::vector<hg::cplx>> out;
    for (const auto& s : c.lambda) {
        const auto v = hg::io::parse_complex_list(s);
        if (int(v.size()) % c.q != 0) throw config_error("--lambda length must be a multiple of q");
        for (std::size_t i = 0; i < v.size(); i += c.q) out.emplace_back(v.begin() + i, v.begin() + i + c.q);
    }
    return out;
}

std::vector<std::vector<double>> real_lambda_vectors(const RunConfig& c) {
    std::vector<std::vector<double>> out;
    for (const auto& v : lambda_vectors(c)) {
        std::vector<double> r;
        for (const auto& z : v) {
            if (z.imag() != 0) throw config_error("this command takes real lambda only");
            r.push_back(z.real());
        }
        out.push_back(r);
    }
    return out;
}

std::vector<hg::ChamberPoint> chamber_points(const RunConfig& c) {
    if (c.t.empty()) throw config_error("--t is required");
    std::vector<hg::ChamberPoint> out;
    for (const auto& s : c.t) {
        const auto v = hg::io::parse_real_list(s);
        if (s.find(':') != std::string::npos && c.q > 1) {
            // grid value s becomes s * (1, (q-1)/q, ..., 1/q)
            for (double x : v) {
                std::vector<double> pt(c.q);
                for (int i = 0; i < c.q; ++i) pt[i] = x * double(c.q - i) / c.q;
                out.emplace_back(pt);
            }
            continue;
        }
        if (int(v.size()) % c.q != 0) throw config_error("--t length must be a multiple of q");
        for (std::size_t i = 0; i < v.size(); i += c.q)
            out.emplace_back(std::vector<double>(v.begin() + i, v.begin() + i + c.q));
    }
    return out;
}

hg::McOptions mc_options(const RunConfig& c) {
    if (c.samples == 0) throw config_error("--samples must be positive");
    if (c.workers < 1) throw config_error("--workers must be positive");
    hg::McOptions o;
    o.samples = c.samples;
    o.seed = c.seed;
    o.workers = c.workers;
    return o;
}

hg::Field field_of(const RunConfig& c) {
    try {
        return hg::parse_field(c.field);
    } catch (const hg::domain_error& e) {
        throw config_error(e.what());
    }
}

std::string join_c(const std::vector<hg::cplx>& v) { return hg::io::join(v, ';'); }
std::string join_r(std::span<const double> v) { return hg::io::join(std::vector<double>(v.begin(), v.end()), ';'); }

json base_record(const RunConfig& c, json inputs) {
    json r;
    r["command"] = c.command;
    r["inputs"] = std::move(inputs);
    return r;
}

json value_record(const RunConfig& c, json inputs, hg::cplx value, double stderr_v, std::uint64_t samples, bool pass) {
    json r = base_record(c, std::move(inputs));
    r["value_re"] = value.real();
    r["value_im"] = value.imag();
    r["stderr"] = stderr_v;
    r["samples"] = samples;
    r["seed"] = c.seed;
    r["pass"] = pass;
    return r;
}

json eval_inputs(const RunConfig& c, const std::vector<hg::cplx>& lam, const hg::ChamberPoint& t, bool with_p = true) {
    json in;
    in["field"] = c.field;
    in["q"] = c.q;
    if (with_p) in["p"] = c.p;
    in["lambda"] = join_c(lam);
    in["t"] = join_r(t.values());
    return in;
}

void write_summary(const RunConfig& c, const json& s) {
    if (c.summary.empty()) {
        std::cerr << s.dump(2) << '\n';
        return;
    }
    std::ofstream f(c.summary);
    if (!f) throw config_error("cannot open summary file " + c.summary);
    f << s.dump(2) << '\n';
}

// ---------------------------------------------------------------- evaluation commands

int cmd_eval(const RunConfig& c, RecordWriter& out) {
    const hg::Field f = field_of(c);
    if (c.q < 1) throw config_error("--q must be positive");
    const auto ts = chamber_points(c);

    if (c.command == "eval-bc" || c.command == "eval-bc-degenerate" || c.command == "eval-a") {
        const auto lams = lambda_vectors(c);
        std::vector<hg::SpectralParam> sp;
        for (const auto& l : lams) sp.emplace_back(l);
        std::vector<hg::McEstimate> est;
        const bool quad = c.command == "eval-bc" && c.method == "quadrature";
        if (c.method != "mc" && c.method != "quadrature") throw config_error("--method must be mc or quadrature");
        if (c.variant != "g" && c.variant != "g-tilde") throw config_error("--variant must be g or g-tilde");
        if (quad) {
            if (f != hg::Field::real || c.q != 1) throw config_error("quadrature needs --field r --q 1");
            const auto rule = hg::rank_one_rule(c.p, c.nodes);
            for (const auto& l : lams)
                for (const auto& t : ts)
                    est.push_back({hg::eval_phi_bc_quadrature_q1(rule, c.p, l[0], t[0]), 0.0, 0, c.seed});
        } else if (c.command == "eval-bc") {
            est = hg::eval_phi_bc(f, c.q, c.p, sp, ts, mc_options(c),
                                  c.variant == "g" ? hg::Variant::g : hg::Variant::g_tilde);
        } else if (c.command == "eval-bc-degenerate") {
            est = hg::eval_phi_bc_degenerate(f, c.q, sp, ts, mc_options(c));
        } else {
            est = hg::eval_psi(f, c.q, sp, ts, mc_options(c));
        }
        for (std::size_t i = 0; i < lams.size(); ++i)
            for (std::size_t j = 0; j < ts.size(); ++j) {
                const auto& e = est[i * ts.size() + j];
                json in = eval_inputs(c, lams[i], ts[j], c.command == "eval-bc");
                if (c.command == "eval-bc-degenerate") in["p"] = 2.0 * c.q - 1;
                out.write(value_record(c, std::move(in), e.value, e.std_error, e.samples, true));
            }
        return 0;
    }

    if (c.command == "eval-bessel-series" || c.command == "eval-bessel-integral") {
        const auto lams = real_lambda_vectors(c);
        const int d = hg::dim(f);
        if (c.command == "eval-bessel-series") {
            bool all_ok = true;
            for (const auto& l : lams)
                for (const auto& t : ts) {
                    const auto r = hg::bessel_phi_tilde_series(c.p, d, l, t, c.degree);
                    std::vector<hg::cplx> lc(l.begin(), l.end());
                    json rec = value_record(c, eval_inputs(c, lc, t), r.value, 0.0, 0, r.converged);
                    rec["truncation_degree"] = r.truncation_degree;
                    rec["tail_bound"] = r.tail_bound;
                    all_ok = all_ok && r.converged;
                    out.write(rec);
                }
            return all_ok ? 0 : kExitAcceptance;
        }
        const auto est = hg::bessel_phi_tilde_integral(f, c.q, c.p, lams, ts, mc_options(c));
        for (std::size_t i = 0; i < lams.size(); ++i)
            for (std::size_t j = 0; j < ts.size(); ++j) {
                const auto& e = est[i * ts.size() + j];
                std::vector<hg::cplx> lc(lams[i].begin(), lams[i].end());
                out.write(value_record(c, eval_inputs(c, lc, ts[j]), e.value, e.std_error, e.samples, true));
            }
        return 0;
    }

    if (c.command == "eval-ho-poly") {
        std::vector<int> parts;
        for (double x : hg::io::parse_real_list(c.mu)) {
            if (x != std::floor(x)) throw config_error("--mu parts must be integers");
            parts.push_back(int(x));
        }
        const hg::Partition mu(parts);
        for (const auto& t : ts) {
            const auto e = hg::eval_ho_polynomial(f, c.q, c.p, mu, t, mc_options(c));
            json in;
            in["field"] = c.field;
            in["q"] = c.q;
            in["p"] = c.p;
            in["mu"] = mu.str();
            in["t"] = join_r(t.values());
            out.write(value_record(c, std::move(in), e.value, e.std_error, e.samples, true));
        }
        return 0;
    }
    throw config_error("unknown evaluation command");
}

int cmd_c_function(const RunConfig& c, RecordWriter& out) {
    hg::MultiplicityBC k;
    if (!c.k.empty()) {
        const auto v = hg::io::parse_real_list(c.k);
        if (v.size() != 3) throw config_error("--k takes k1,k2,k3");
        k = {v[0], v[1], v[2]};
    } else {
        k = hg::multiplicity_p(c.p, hg::dim(field_of(c)), c.q);
    }
    for (const auto& l : lambda_vectors(c)) {
        const auto v = hg::c_function(l, k, c.q);
        json in;
        in["q"] = c.q;
        in["k"] = hg::io::join(std::vector<double>{k.k1, k.k2, k.k3}, ';');
        in["lambda"] = join_c(l);
        json rec = value_record(c, std::move(in), v, 0.0, 0, true);
        out.write(rec);
    }
    return 0;
}

// ---------------------------------------------------------------- experiments

json rate_summary(const RunConfig& c, const hg::RateReport& r, bool pass, const std::string& predicate) {
    json s;
    s["command"] = c.command;
    s["slope"] = r.slope;
    s["slope_halfwidth"] = r.slope_halfwidth;
    s["normalized_ratio"] = r.normalized_ratio();
    s["scale"] = r.scale;
    s["deterministic"] = r.deterministic;
    s["bounded_regime"] = r.bounded_regime;
    s["predicate"] = predicate;
    s["pass"] = pass;
    s["seed"] = c.seed;
    return s;
}

void rate_rows(const RunConfig& c, const hg::RateReport& r, RecordWriter& out, const char* pname, bool pass) {
    for (std::size_t a = 0; a < r.params.size(); ++a) {
        json in;
        in["field"] = c.field;
        in["q"] = c.q;
        in[pname] = r.params[a];
        json rec = value_record(c, std::move(in), r.errors[a], r.std_errors[a], r.deterministic ? 0 : c.samples, pass);
        rec["normalized"] = r.normalized[a];
        out.write(rec);
    }
}

int cmd_experiment(const RunConfig& c, RecordWriter& out) {
    const hg::Field f = field_of(c);
    if (c.command == "rate-p") {
        const auto lams = lambda_vectors(c);
        if (lams.size() != 1) throw config_error("rate-p takes exactly one lambda");
        const auto ts = chamber_points(c);
        const auto ps = hg::io::parse_real_list(c.p_list);
        const auto r = hg::rate_p_experiment(f, c.q, lams[0], ts, ps, mc_options(c));
        const bool pass = r.trivial() || (r.slope_upper() <= -0.45 && r.normalized_ratio() < 10);
        rate_rows(c, r, out, "p", pass);
        write_summary(c, rate_summary(c, r, pass, "slope + band <= -0.45 and normalized max/min < 10"));
        return pass ? 0 : kExitAcceptance;
    }
    if (c.command == "contraction") {
        const auto lams = real_lambda_vectors(c);
        const auto ts = chamber_points(c);
        if (lams.size() != 1 || ts.size() != 1) throw config_error("contraction takes one lambda and one t");
        const auto ns = hg::io::parse_real_list(c.n_list);
        const auto r = hg::contraction_experiment(f, c.q, c.p, lams[0], ts[0], ns, mc_options(c));
        const bool pass = r.trivial() || (r.slope_upper() <= -0.8 && r.normalized_ratio() < 10);
        rate_rows(c, r, out, "n", pass);
        write_summary(c, rate_summary(c, r, pass, "slope + band <= -0.8 and n*error max/min < 10"));
        return pass ? 0 : kExitAcceptance;
    }
    if (c.command == "moment-decay") {
        const auto ps = hg::io::parse_real_list(c.p_list);
        const auto r = hg::moment_decay_experiment(f, c.q, c.n_exponent, ps, mc_options(c));
        const bool pass = r.slope_upper() <= -0.9 * c.n_exponent;
        rate_rows(c, r, out, "p", pass);
        write_summary(c, rate_summary(c, r, pass, "slope + band <= -0.9 n"));
        return pass ? 0 : kExitAcceptance;
    }
    if (c.command == "boundedness") {
        const auto ts = chamber_points(c);
        const auto r = hg::boundedness_sweep(f, c.q, c.p, c.n_lambda, ts, mc_options(c));
        static const char* kinds[] = {"in_hull", "imaginary", "out_of_hull"};
        for (const auto& row : r.rows) {
            json in = eval_inputs(c, row.lambda, row.t);
            in["kind"] = kinds[int(row.kind)];
            out.write(value_record(c, std::move(in), row.estimate.value, row.estimate.std_error,
                                   row.estimate.samples, row.pass));
        }
        const bool pass = r.bounded_ok && r.positive_ok && r.unbounded_seen;
        json s;
        s["command"] = c.command;
        s["bounded"] = r.bounded_ok;
        s["positive"] = r.positive_ok;
        s["out_of_hull_exceeds_one"] = r.unbounded_seen;
        s["pass"] = pass;
        s["seed"] = c.seed;
        write_summary(c, s);
        return pass ? 0 : kExitAcceptance;
    }
    throw config_error("unknown experiment");
}

hg::RootSystemSpec spec_of(const RunConfig& c) {
    if (c.rank < 1) throw config_error("--rank must be positive");
    if (c.family == "a" || c.family == "A") return {hg::Family::A, c.rank, hg::Ambient::effective};
    if (c.family == "b" || c.family == "B") return {hg::Family::B, c.rank, hg::Ambient::effective};
    throw config_error("--family must be a or b");
}

int cmd_weyl(const RunConfig& c, RecordWriter& out) {
    const auto spec = spec_of(c);
    hg::RngStream rng(c.seed, 0x77e1);
    const auto rhos = hg::chamber_rho_samples(spec, c.rho_samples, rng);
    if (c.command == "eps0") {
        const double e = hg::eps0_estimate(spec, rhos, c.resolution);
        json in;
        in["family"] = c.family;
        in["rank"] = c.rank;
        in["resolution"] = c.resolution;
        in["rho_samples"] = int(rhos.size());
        const bool pass = e > 0;
        out.write(value_record(c, std::move(in), e, 0.0, rhos.size(), pass));
        return pass ? 0 : kExitAcceptance;
    }
    bool all = true;
    for (const auto& rho : rhos) {
        const std::vector<hg::Point> one{rho};
        const auto s = hg::scan_shifted_orbit(spec, one, c.eps);
        json rec;
        rec["command"] = c.command;
        rec["family"] = c.family;
        rec["rank"] = c.rank;
        rec["rho"] = join_r(rho);
        rec["eps"] = c.eps;
        rec["witness"] = s.pass ? std::string() : join_r(s.witness);
        rec["seed"] = c.seed;
        rec["pass"] = s.pass;
        all = all && s.pass;
        out.write(rec);
    }
    return all ? 0 : kExitAcceptance;
}

std::string multinomial_str(const hg::Partition& mu, int k) {
    double r = std::lgamma(k + 1.0);
    for (int x : mu.parts()) r -= std::lgamma(x + 1.0);
    return hg::io::fmt(std::round(std::exp(r)));
}

int cmd_jack_table(const RunConfig& c, RecordWriter& out) {
    if (c.max_weight < 0 || c.max_weight > 30) throw config_error("--max-weight must lie in [0, 30]");
    if (c.q < 1 || c.q > 6) throw config_error("--q must lie in [1, 6] for jack-table");
    const double alpha = c.alpha > 0 ? c.alpha : 2.0 / hg::dim(field_of(c));
    const hg::JackTable tab(alpha, c.q, c.max_weight);
    for (int k = 0; k <= c.max_weight; ++k) {
        const auto& sh = tab.shell(k);
        const std::size_t n = sh.parts.size();
        std::vector<double> colsum(n, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) colsum[b] += sh.c_scale[a] * sh.coef[a][b];
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                if (sh.coef[a][b] == 0.0) continue;
                json rec;
                rec["command"] = c.command;
                rec["weight"] = k;
                rec["partition"] = sh.parts[a].str();
                rec["monomial"] = sh.parts[b].str();
                rec["coefficient_P"] = sh.coef[a][b];
                rec["coefficient_C"] = sh.c_scale[a] * sh.coef[a][b];
                rec["alpha"] = alpha;
                rec["trace_sum"] = colsum[b];
                rec["multinomial"] = multinomial_str(sh.parts[b], k);
                out.write(rec);
            }
    }
    return 0;
}

void add_common(CLI::App* s, RunConfig& c) {
    s->add_option("--field", c.field, "Scalar field: r, c or h");
    s->add_option("--q", c.q, "Rank q");
    s->add_option("--p", c.p, "Dimension parameter p");
    s->add_option("--lambda", c.lambda, "Spectral parameter(s), comma list of a+bi, q entries each");
    s->add_option("--t", c.t, "Chamber point(s), comma list or start:stop:count");
    s->add_option("--samples", c.samples, "Monte Carlo sample count");
    s->add_option("--seed", c.seed, "Seed")->envname("HYPERGEO_SEED");
    s->add_option("--format", c.format, "csv or jsonl");
    s->add_option("--output", c.output, "Output file (default stdout)");
    s->add_option("--summary", c.summary, "JSON summary file (default stderr)");
    s->add_option("--workers", c.workers, "Worker threads (does not change results)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypergeometric functions of type BC: evaluation and experiments"};
    app.require_subcommand(1);
    RunConfig c;

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"eval-bc", "phi_lambda^p(t) by Monte Carlo (or quadrature at q=1 over R)"},
        {"eval-bc-degenerate", "phi_lambda^{2q-1}(t) via the sphere-factor sampler"},
        {"eval-a", "type A spherical function psi_lambda(t)"},
        {"eval-bessel-series", "Bessel function J_{pd/2}(lambda^2/2, t^2/2) by series"},
        {"eval-bessel-integral", "Bessel function by Monte Carlo over the matrix ball"},
        {"eval-ho-poly", "Heckman-Opdam polynomial P_mu(k_p; t)"},
        {"c-function", "c(lambda, k) for R = 2 BC_q"},
        {"rate-p", "p -> infinity rate sweep"},
        {"contraction", "Bessel contraction rate sweep"},
        {"boundedness", "boundedness and positivity sweep"},
        {"moment-decay", "decay of R(p) = E[sigma_1^{2n} / Delta(I - w^* w)^{2n}]"},
        {"weyl-scan", "extreme-point scan of (1+eps) y - eps rho"},
        {"eps0", "bisection estimate of the maximal eps"},
        {"jack-table", "Jack polynomial monomial coefficients"},
    };
    for (const auto& s : subs) {
        auto* sc = app.add_subcommand(s.name, s.help);
        add_common(sc, c);
        sc->add_option("--method", c.method, "mc or quadrature");
        sc->add_option("--variant", c.variant, "g or g-tilde");
        sc->add_option("--nodes", c.nodes, "Quadrature nodes");
        sc->add_option("--degree", c.degree, "Series degree cap");
        sc->add_option("--mu", c.mu, "Partition with even parts");
        sc->add_option("--k", c.k, "Multiplicities k1,k2,k3");
        sc->add_option("--p-list", c.p_list, "p values");
        sc->add_option("--n-list", c.n_list, "n values");
        sc->add_option("--n", c.n_exponent, "Moment exponent n");
        sc->add_option("--n-lambda", c.n_lambda, "Random spectral parameters");
        sc->add_option("--family", c.family, "a or b");
        sc->add_option("--rank", c.rank, "Root system rank");
        sc->add_option("--eps", c.eps, "epsilon");
        sc->add_option("--rho-samples", c.rho_samples, "Random interior rho count");
        sc->add_option("--resolution", c.resolution, "Bisection resolution");
        sc->add_option("--alpha", c.alpha, "Jack parameter (default 2/d)");
        sc->add_option("--max-weight", c.max_weight, "Largest partition weight");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        RecordWriter out(c.format, c.output);
        const std::string& cmd = c.command;
        if (cmd.rfind("eval-", 0) == 0) return cmd_eval(c, out);
        if (cmd == "c-function") return cmd_c_function(c, out);
        if (cmd == "weyl-scan" || cmd == "eps0") return cmd_weyl(c, out);
        if (cmd == "jack-table") return cmd_jack_table(c, out);
        return cmd_experiment(c, out);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hg::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    }
}
