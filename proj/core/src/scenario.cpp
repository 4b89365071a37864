#include "tlab/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

namespace tlab {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {
    "density",        "probe-radius", "hilbert-check", "norms",      "molecule-suite",
    "generator-build", "generator-demo", "pair-build",  "annihilate", "approx"};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

std::string ScenarioConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second;
}

std::string ScenarioConfig::require_string(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

double ScenarioConfig::get_real(const std::string& key, double fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not a number: " + it->second);
    }
}

double ScenarioConfig::require_real(const std::string& key) const {
    require_string(key);
    return get_real(key, 0.0);
}

long ScenarioConfig::get_int(const std::string& key, long fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long v = std::stol(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not an integer: " + it->second);
    }
}

bool ScenarioConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: " + it->second);
}

void ScenarioConfig::validate_config() const {
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
        throw ConfigError("unknown command '" + command + "'");
    for (const auto& [key, value] : entries) {
        if (key.rfind("tol.", 0) == 0) {
            if (!(get_real(key, 0.0) > 0.0))
                throw ConfigError("tolerance '" + key + "' must be positive");
        }
        if (key.rfind(".path", key.size() - 5) != std::string::npos ||
            key == "lambda.path" || key == "recipe.path") {
            if (!std::filesystem::exists(value))
                throw ConfigError("referenced file '" + value + "' does not exist (key " + key + ")");
        }
    }
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& source) {
    ScenarioConfig cfg;
    cfg.source_path = source;
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        json j;
        try {
            j = json::parse(body);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config JSON parse error: ") + e.what());
        }
        for (const auto& [key, v] : j.items()) {
            if (v.is_string())
                cfg.entries[key] = v.get<std::string>();
            else if (v.is_boolean())
                cfg.entries[key] = v.get<bool>() ? "true" : "false";
            else if (v.is_number_integer())
                cfg.entries[key] = std::to_string(v.get<long>());
            else if (v.is_number())
                cfg.entries[key] = format_real(v.get<double>());
            else
                throw ConfigError("config key '" + key + "' must be a scalar");
        }
    } else {
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + " is not key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key at config line " + std::to_string(lineno));
            cfg.entries[key] = value;
        }
    }
    auto it = cfg.entries.find("command");
    if (it == cfg.entries.end()) throw ConfigError("config is missing 'command'");
    cfg.command = it->second;
    return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
    return parse_config_text(read_file(path), path);
}

std::string config_hash(const ScenarioConfig& cfg) {
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [key, value] : cfg.entries) {
        mix(key);
        mix("=");
        mix(value);
        mix("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool ScenarioReport::all_pass() const {
    for (const auto& [name, verdict] : verdicts)
        if (verdict == "fail") return false;
    return true;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string report_to_json(const ScenarioReport& report) {
    json j;
    j["command"] = report.command;
    j["config"] = report.config_echo;
    j["config_hash"] = report.hash;
    j["metrics"] = report.metrics;
    j["verdicts"] = report.verdicts;
    j["notes"] = report.notes;
    j["provenance"] = {{"version", report.version}, {"seed", report.seed}};
    j["wall_time"] = report.wall_time;
    return j.dump(2);
}

void save_report(const ScenarioReport& report, const std::string& path) {
    write_file_atomic(path, report_to_json(report) + "\n");
}

namespace {

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_real(row[i]);
        }
        out << "\n";
    }
    write_file_atomic(path, out.str());
}

std::mt19937_64 sub_rng(const ScenarioConfig& cfg, std::uint64_t offset) {
    // all randomness flows from the config seed; modules get fixed offsets
    return std::mt19937_64(cfg.seed() + offset);
}

UniformGrid grid_from_config(const ScenarioConfig& cfg, double def_extent, long def_points) {
    return make_grid(cfg.get_real("grid.half_extent", def_extent),
                     static_cast<std::size_t>(cfg.get_int("grid.points", def_points)));
}

DiscreteSet lambda_from_config(const ScenarioConfig& cfg) {
    const std::string kind = cfg.get_string("lambda.kind", "integers");
    const double T = cfg.get_real("lambda.t", 128.0);
    if (kind == "integers") return arithmetic_set(1.0, T);
    if (kind == "arithmetic") return arithmetic_set(cfg.get_real("lambda.alpha", 1.0), T);
    if (kind == "perturbed")
        return perturbed_integers(cfg.get_real("lambda.gamma", 0.5), T,
                                  static_cast<std::uint64_t>(cfg.get_int("lambda.seed", 7)));
    if (kind == "multiscale")
        return multiscale_cluster(static_cast<int>(cfg.get_int("lambda.levels", 5)));
    if (kind == "file") return load_discrete_set(cfg.require_string("lambda.path"));
    throw ConfigError("unknown lambda.kind '" + kind + "'");
}

void verdict(ScenarioReport& report, const std::string& name, bool pass) {
    report.verdicts[name] = pass ? "pass" : "fail";
}

// real, mean-zero, band-limited synthesis: Hermitian spectrum supported in
// band_lo < |zeta| < band_hi, zero bin empty
SampledFunction synth_bandlimited(const UniformGrid& grid, std::mt19937_64& rng, double band_lo,
                                  double band_hi) {
    const UniformGrid freq = dual_grid(grid);
    SpectralFunction F = make_spectral(freq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t c = freq.center_index();
    for (std::size_t j = 1; c + j < freq.points; ++j) {
        const double z = freq.node(c + j);
        if (z <= band_lo) continue;
        if (z >= band_hi) break;
        const cplx a{gauss(rng), gauss(rng)};
        F.values[c + j] = a * std::exp(-z / 4.0);
        F.values[c - j] = std::conj(F.values[c + j]);
    }
    return fourier_inverse(F);
}

double sup_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const cplx& x : v) m = std::max(m, std::abs(x));
    return m;
}

// ---------------------------------------------------------------- density

void cmd_density(const ScenarioConfig& cfg, const std::string& out, ScenarioReport& report) {
    DiscreteSet lambda = lambda_from_config(cfg);
    std::vector<double> d_grid;
    const double lo = cfg.get_real("density.d_lo", 0.25);
    const double hi = cfg.get_real("density.d_hi", 2.0);
    const double step = cfg.get_real("density.d_step", 0.25);
    if (!(step > 0.0 && lo <= hi)) throw ConfigError("density: bad d grid");
    for (double d = lo; d <= hi + 1e-12; d += step) d_grid.push_back(d);

    DensityEstimate est = bm_density_estimate(lambda, d_grid);
    report.metrics["lower_bound"] = est.lower_bound;
    report.metrics["infinite_flagged"] =
        est.classification == DensityClass::infinite_flagged ? 1.0 : 0.0;
    report.metrics["divergence_partial"] = est.witness.divergence_partial;
    report.metrics["points"] = static_cast<double>(lambda.points.size());

    std::vector<std::vector<double>> rows;
    for (const IntervalSpec& I : est.witness.intervals)
        rows.push_back({I.lo, I.hi, static_cast<double>(count_in_interval(lambda, I))});
    write_csv(out + "/witness_intervals.csv", "lo,hi,count", rows);

    if (cfg.has("expect.classification")) {
        const std::string want = cfg.require_string("expect.classification");
        verdict(report, "density.classification",
                (want == "infinite") == (est.classification == DensityClass::infinite_flagged));
    }
    if (cfg.has("expect.lower_lo"))
        verdict(report, "density.lower_bound",
                est.lower_bound >= cfg.require_real("expect.lower_lo") &&
                    est.lower_bound <= cfg.get_real("expect.lower_hi", 1e9));
}

// ---------------------------------------------------------------- probe-radius

void cmd_probe(const ScenarioConfig& cfg, const RunOptions& opts, const std::string& out,
               ScenarioReport& report) {
    DiscreteSet lambda = lambda_from_config(cfg);
    const double r_lo = cfg.get_real("probe.r_lo", 2.2);
    const double r_hi = cfg.get_real("probe.r_hi", 3.8);
    const double r_step = cfg.get_real("probe.r_step", 0.2);
    if (!(r_step > 0.0 && r_lo <= r_hi)) throw ConfigError("probe: bad r grid");
    std::vector<double> r_grid;
    for (double r = r_lo; r <= r_hi + 1e-12; r += r_step) r_grid.push_back(r);

    const UniformGrid grid = grid_from_config(cfg, 8.0, 1024);
    std::mt19937_64 rng = sub_rng(cfg, 101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<SampledFunction> targets;
    const long n_targets = cfg.get_int("probe.targets", 3);
    for (long t = 0; t < n_targets; ++t) {
        SampledFunction f = make_sampled(grid);
        for (int b = 0; b < 4; ++b) {
            const double c = -2.0 + 4.0 * unit(rng);
            const double w = 0.4 + 0.6 * unit(rng);
            const double a = -1.0 + 2.0 * unit(rng);
            for (std::size_t j = 0; j < grid.points; ++j) {
                const double u = (grid.node(j) - c) / w;
                f.values[j] += a * std::exp(-u * u);
            }
        }
        targets.push_back(std::move(f));
    }

    ProbeConfig pc;
    pc.jobs = opts.jobs;
    pc.residual_threshold = cfg.get_real("tol.residual", 1e-3);
    ProbeResult result = spectral_radius_probe(lambda, targets, r_grid, pc);
    report.metrics["empirical_radius"] = result.empirical_radius;

    std::vector<std::vector<double>> rows;
    for (const ProbePoint& p : result.curve)
        rows.push_back({p.r, static_cast<double>(p.truncation), static_cast<double>(p.target_index),
                        p.residual, p.rank_warning ? 1.0 : 0.0});
    write_csv(out + "/probe_curve.csv", "r,truncation,target_index,residual,rank_warning", rows);

    std::vector<std::vector<double>> knee;
    const std::size_t final_trunc =
        *std::max_element(pc.truncations.begin(), pc.truncations.end());
    for (double r : r_grid) {
        double worst = 0.0;
        for (const ProbePoint& p : result.curve)
            if (p.r == r && (p.truncation == final_trunc ||
                             p.truncation == std::min(final_trunc, lambda.points.size())))
                worst = std::max(worst, p.residual);
        knee.push_back({r, worst});
    }
    write_csv(out + "/knee.csv", "r,final_residual", knee);

    if (cfg.has("expect.radius_lo"))
        verdict(report, "probe.empirical_radius",
                result.empirical_radius >= cfg.require_real("expect.radius_lo") &&
                    result.empirical_radius <= cfg.get_real("expect.radius_hi", 1e9));
}

// ---------------------------------------------------------------- hilbert-check

void cmd_hilbert(const ScenarioConfig& cfg, const std::string& out, ScenarioReport& report) {
    const UniformGrid grid = grid_from_config(cfg, 64.0, 4096);
    std::mt19937_64 rng = sub_rng(cfg, 201);
    const long count = cfg.get_int("hilbert.count", 50);
    const double omega = kPi / grid.spacing;

    double worst = 0.0;
    long warnings = 0;
    for (long i = 0; i < count; ++i) {
        SampledFunction f = synth_bandlimited(grid, rng, 0.3, omega / 4.0);
        HilbertResult h1r = hilbert_transform(f);
        HilbertResult h2r = hilbert_transform(h1r.f);
        if (h1r.zero_bin_warning || h2r.zero_bin_warning) ++warnings;
        const double scale = sup_abs(f.values);
        double err = 0.0;
        for (std::size_t j = 0; j < f.values.size(); ++j)
            err = std::max(err, std::abs(h2r.f.values[j] + f.values[j]));
        worst = std::max(worst, err / scale);
    }
    report.metrics["involution_error"] = worst;
    report.metrics["zero_bin_warnings"] = static_cast<double>(warnings);
    verdict(report, "hilbert.involution", worst < cfg.get_real("tol.involution", 1e-10));

    // closed form 1/(1+x^2) -> x/(1+x^2): transform on a wide grid with the
    // same spacing, compare on the |x| <= window part (periodization of the
    // slowly decaying pair is negligible there)
    const double wide_extent = cfg.get_real("hilbert.wide_extent", 1024.0);
    const long wide_points = cfg.get_int("hilbert.wide_points", 131072);
    const double window = cfg.get_real("hilbert.window", 64.0);
    const UniformGrid wide = make_grid(wide_extent, static_cast<std::size_t>(wide_points));
    SampledFunction f = make_sampled(wide);
    for (std::size_t j = 0; j < wide.points; ++j) {
        const double x = wide.node(j);
        f.values[j] = 1.0 / (1.0 + x * x);
    }
    HilbertResult hf = hilbert_transform(f);
    double closed = 0.0;
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < wide.points; ++j) {
        const double x = wide.node(j);
        if (std::abs(x) > window) continue;
        // closed form under the artifact's conventions: with the e^{+i x zeta}
        // forward transform, the -i sgn(zeta) multiplier sends 1/(1+x^2) to
        // -x/(1+x^2) (classical tables assume the opposite transform sign)
        const double oracle = -x / (1.0 + x * x);
        closed = std::max(closed, std::abs(hf.f.values[j] - oracle));
        if (j % 64 == 0) rows.push_back({x, hf.f.values[j].real(), oracle});
    }
    write_csv(out + "/hilbert_closed_form.csv", "x,numeric,oracle", rows);
    report.metrics["closed_form_error"] = closed;
    report.metrics["closed_form_zero_bin"] = hf.zero_bin_warning ? 1.0 : 0.0;
    verdict(report, "hilbert.closed_form", closed < cfg.get_real("tol.closed_form", 2e-3));
}

// ---------------------------------------------------------------- norms

void cmd_norms(const ScenarioConfig& cfg, const std::string& out, ScenarioReport& report) {
    const UniformGrid grid = grid_from_config(cfg, 32.0, 2048);
    SampledFunction f = make_sampled(grid);
    for (std::size_t j = 0; j < grid.points; ++j) {
        const double x = grid.node(j);
        f.values[j] = x * std::exp(-x * x);
    }
    NormReport h1 = h1_norm(f);
    report.metrics["h1"] = h1.value;
    report.notes.push_back("h1: " + h1.discretization_note);

    SampledFunction h = make_sampled(grid);
    for (std::size_t j = 0; j < grid.points; ++j) h.values[j] = std::tanh(grid.node(j));
    NormReport bmo = bmo_seminorm(h);
    report.metrics["bmo"] = bmo.value;
    report.notes.push_back("bmo: " + bmo.discretization_note);

    PairingResult pairing = bmo_pair(f, h, {1.0, 2.0, 4.0, 8.0});
    report.metrics["pairing"] = pairing.value;
    report.metrics["pairing_imag"] = pairing.final_pairing.imag();
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < pairing.sequence.size(); ++i)
        rows.push_back({static_cast<double>(i), pairing.sequence[i].real(),
                        pairing.sequence[i].imag()});
    write_csv(out + "/pairing_sequence.csv", "index,re,im", rows);

    // convention audit: Parseval ratio for random inputs
    std::mt19937_64 rng = sub_rng(cfg, 301);
    const long count = cfg.get_int("norms.parseval_count", 20);
    double max_dev = 0.0;
    const double omega = kPi / grid.spacing;
    for (long i = 0; i < count; ++i) {
        SampledFunction g = synth_bandlimited(grid, rng, 0.3, omega / 4.0);
        SpectralFunction G = fourier_forward(g);
        double space = 0.0, freq = 0.0;
        for (const cplx& v : g.values) space += std::norm(v);
        for (const cplx& v : G.values) freq += std::norm(v);
        space *= grid.spacing;
        freq *= G.grid.spacing / kTwoPi;
        max_dev = std::max(max_dev, std::abs(space / freq - 1.0));
    }
    report.metrics["parseval_max_dev"] = max_dev;
    verdict(report, "norms.parseval", max_dev < cfg.get_real("tol.parseval", 1e-8));
    if (h1.low_confidence) report.verdicts["norms.h1_confidence"] = "low-confidence";
}

// ---------------------------------------------------------------- molecule-suite

void cmd_molecules(const ScenarioConfig& cfg, const std::string& out, ScenarioReport& report) {
    const UniformGrid grid = grid_from_config(cfg, 32.0, 2048);
    const long count = cfg.get_int("molecules.count", 100);
    const double q = cfg.get_real("molecules.q", 2.0);
    const double a0 = cfg.get_real("molecules.a0", 0.5);
    MoleculeParams params = molecule_params(q, a0);

    std::mt19937_64 rng = sub_rng(cfg, 401);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double max_ratio = 0.0, min_ratio = std::numeric_limits<double>::infinity();
    double homogeneity = 0.0, amgm_margin = std::numeric_limits<double>::infinity();
    double plancherel_dev = 0.0;
    long failures = 0;
    std::vector<std::vector<double>> rows;

    for (long i = 0; i < count; ++i) {
        const double c1 = -4.0 + 8.0 * unit(rng), c2 = -4.0 + 8.0 * unit(rng);
        const double w1 = 0.5 + unit(rng), w2 = 0.5 + unit(rng);
        const double a = 0.2 + 1.8 * unit(rng);
        SampledFunction m = make_sampled(grid);
        cplx s1{0.0, 0.0}, s2{0.0, 0.0};
        std::vector<double> g1(grid.points), g2(grid.points);
        for (std::size_t j = 0; j < grid.points; ++j) {
            const double x = grid.node(j);
            const double u1 = (x - c1) / w1, u2 = (x - c2) / w2;
            g1[j] = std::exp(-u1 * u1);
            g2[j] = std::exp(-u2 * u2);
            s1 += g1[j];
            s2 += g2[j];
        }
        // exact quadrature cancellation: subtract a matched multiple
        const double balance = a * s1.real() / s2.real();
        for (std::size_t j = 0; j < grid.points; ++j)
            m.values[j] = a * g1[j] - balance * g2[j];

        MoleculeReport mol = assess_molecule(m, params);
        if (!mol.is_molecule) ++failures;
        const double h1 = h1_norm(m).value;
        const double ratio = mol.molecular_norm > 0.0 ? h1 / mol.molecular_norm : 0.0;
        max_ratio = std::max(max_ratio, ratio);
        min_ratio = std::min(min_ratio, ratio);
        rows.push_back({static_cast<double>(i), mol.molecular_norm, h1, ratio});

        SampledFunction m2 = m;
        for (cplx& v : m2.values) v *= 2.0;
        MoleculeReport mol2 = assess_molecule(m2, params);
        if (mol.molecular_norm > 0.0)
            homogeneity = std::max(homogeneity,
                                   std::abs(mol2.molecular_norm / (2.0 * mol.molecular_norm) - 1.0));

        // the embedding chain: sqrt(||F|| ||F'||) <= (||F|| + ||F'||)/2 and the
        // Plancherel bridge between the two sides of the chain
        SpectralFunction F = fourier_forward(m);
        double l2 = 0.0, dl2 = 0.0, xl2 = 0.0, sl2 = 0.0;
        SpectralFunction dF = spectral_derivative(F);
        for (std::size_t j = 0; j < grid.points; ++j) {
            sl2 += std::norm(m.values[j]);
            xl2 += std::norm(m.values[j]) * grid.node(j) * grid.node(j);
        }
        for (std::size_t j = 0; j < F.grid.points; ++j) {
            l2 += std::norm(F.values[j]);
            dl2 += std::norm(dF.values[j]);
        }
        sl2 = std::sqrt(sl2 * grid.spacing);
        xl2 = std::sqrt(xl2 * grid.spacing);
        l2 = std::sqrt(l2 * F.grid.spacing);
        dl2 = std::sqrt(dl2 * F.grid.spacing);
        amgm_margin = std::min(amgm_margin, (l2 + dl2) / 2.0 - std::sqrt(l2 * dl2));
        plancherel_dev = std::max(plancherel_dev, std::abs(l2 / (std::sqrt(kTwoPi) * sl2) - 1.0));
        plancherel_dev = std::max(plancherel_dev, std::abs(dl2 / (std::sqrt(kTwoPi) * xl2) - 1.0));
    }
    write_csv(out + "/molecules.csv", "index,molecular_norm,h1,ratio", rows);
    report.metrics["max_ratio"] = max_ratio;
    report.metrics["min_ratio"] = min_ratio;
    report.metrics["homogeneity_error"] = homogeneity;
    report.metrics["amgm_min_margin"] = amgm_margin;
    report.metrics["plancherel_dev"] = plancherel_dev;
    report.metrics["molecule_failures"] = static_cast<double>(failures);
    verdict(report, "molecules.finite_ratio", std::isfinite(max_ratio) && failures == 0);
    verdict(report, "molecules.homogeneity", homogeneity < cfg.get_real("tol.homogeneity", 1e-10));
    verdict(report, "molecules.amgm", amgm_margin > -cfg.get_real("tol.amgm", 1e-12));

    // d0: empirical W0 -> H1 embedding constant over the dense family
    auto d0_over = [&](std::size_t points) {
        const UniformGrid freq = make_grid(16.0, points);
        DenseFamily family =
            build_dense_family(static_cast<int>(cfg.get_int("molecules.family_count", 6)),
                               cfg.seed() + 31);
        double d0 = 0.0;
        for (const FamilyMember& member : family.members) {
            if (member.index == 1) continue;
            EmbeddingReport er = embedding_check(member.sample(freq));
            d0 = std::max(d0, er.ratio);
        }
        return d0;
    };
    const double d0 = d0_over(1024);
    const double d0_fine = d0_over(2048);
    report.metrics["d0_estimate"] = d0;
    report.metrics["d0_estimate_fine"] = d0_fine;
    const double stability = d0 > 0.0 ? std::abs(d0_fine / d0 - 1.0) : 0.0;
    report.metrics["d0_stability"] = stability;
    verdict(report, "molecules.d0_stable", stability < cfg.get_real("tol.d0_stability", 0.2));
}

// ---------------------------------------------------------------- generator-build

void cmd_generator_build(const ScenarioConfig& cfg, const std::string& out,
                         ScenarioReport& report) {
    const int stages = static_cast<int>(cfg.get_int("generator.stages", 4));
    DiscreteSet lambda = multiscale_cluster(static_cast<int>(cfg.get_int("lambda.levels", 4)));
    DenseFamily family = build_dense_family(
        static_cast<int>(cfg.get_int("generator.family_count", stages)), cfg.seed() + 41);
    const UniformGrid freq = grid_from_config(cfg, 16.0, 1024);

    GeneratorRecipe recipe = construct_generator(lambda, family, stages, freq);
    save_recipe(recipe, out + "/recipe.json");
    if (recipe.density_warning) report.notes.push_back("lambda is not infinite-flagged");

    bool errors_ok = true, fits_ok = true, freq_ok = true;
    std::vector<std::vector<double>> rows;
    for (const StageRecord& s : recipe.stages) {
        const double eps = recipe.coefficients.epsilon(s.n);
        errors_ok = errors_ok && s.stage_error < eps;
        fits_ok = fits_ok && s.fit_converged;
        for (double l : s.fit.frequencies)
            freq_ok = freq_ok &&
                      std::binary_search(lambda.points.begin(), lambda.points.end(), l);
        rows.push_back({static_cast<double>(s.n), s.delta_n, s.fit_residual, s.stage_error, eps,
                        s.p_star_norm, s.min_on_support});
        report.metrics["stage_error_" + std::to_string(s.n)] = s.stage_error;
        report.metrics["fit_residual_" + std::to_string(s.n)] = s.fit_residual;
        report.metrics["p_star_" + std::to_string(s.n)] = s.p_star_norm;
    }
    write_csv(out + "/stages.csv",
              "n,delta_n,fit_residual,stage_error,eps_n,p_star_norm,min_on_support", rows);
    verdict(report, "generator.stage_errors", errors_ok);
    verdict(report, "generator.fits_converged", fits_ok);
    verdict(report, "generator.frequencies_in_lambda", freq_ok);

    // F_n properties (1), (2), (4); (3) as <= with equality logged
    bool p1 = true, p2 = true, p3 = true, p4 = true;
    double c_fit = 0.0;
    double max_delta = 0.0, sum_delta = 0.0;
    double prev_norm = 0.0;
    for (int n = 1; n <= stages; ++n) {
        SpectralFunction Fn = partial_sum_F(recipe.coefficients, n, freq);
        const double dn = recipe.coefficients.delta(n);
        max_delta = std::max(max_delta, dn);
        sum_delta += (n == 1 ? dn : 2.0 * dn); // symmetric pair, delta_0 = 0
        if (n == 1) sum_delta += dn;           // delta_{-1}
        for (std::size_t k = 0; k < freq.points; ++k)
            if (std::abs(freq.node(k)) > n + 1.0 && std::abs(Fn.values[k]) > 0.0) p1 = false;
        if (n >= 2) {
            SpectralFunction Fprev = partial_sum_F(recipe.coefficients, n - 1, freq);
            SpectralFunction diff = Fn;
            for (std::size_t k = 0; k < freq.points; ++k) diff.values[k] -= Fprev.values[k];
            p2 = p2 && sobolev_norm_full(diff) < 4.0 * dn;
        }
        const double star = star_norm(Fn);
        if (star > 2.0 * max_delta + 1e-6) p3 = false;
        if (std::abs(star - 2.0 * max_delta) < 0.01 * max_delta)
            report.notes.push_back("property (3) equality observed at stage " + std::to_string(n));
        const double w = sobolev_norm_full(Fn);
        const double ratio = w / sum_delta;
        if (n == 1)
            c_fit = ratio;
        else if (ratio > c_fit * (1.0 + 1e-6) + 1e-12)
            p4 = false;
        prev_norm = w;
        report.metrics["fn_w_norm_" + std::to_string(n)] = w;
    }
    (void)prev_norm;
    report.metrics["prop4_constant"] = c_fit;
    verdict(report, "generator.property1_support", p1);
    verdict(report, "generator.property2_increment", p2);
    verdict(report, "generator.property3_star", p3);
    verdict(report, "generator.property4_bound", p4);

    // finer-grid recomputation of the stage errors
    if (cfg.get_bool("generator.refine_check", true)) {
        const UniformGrid fine = make_grid(freq.half_extent, freq.points * 2);
        SpectralFunction F = recipe.sample_F(fine);
        double max_dev = 0.0;
        for (const StageRecord& s : recipe.stages) {
            SpectralFunction G = family.members[static_cast<std::size_t>(s.n - 1)].sample(fine);
            for (std::size_t k = 0; k < fine.points; ++k)
                G.values[k] -= evaluate_polynomial_at(s.fit, fine.node(k)) * F.values[k];
            const double refined = sobolev_norm_full(G);
            if (s.stage_error > 0.0)
                max_dev = std::max(max_dev, std::abs(refined / s.stage_error - 1.0));
        }
        report.metrics["refine_max_rel_dev"] = max_dev;
        verdict(report, "generator.refine_agreement", max_dev < cfg.get_real("tol.refine", 0.05));
    }
}

// ---------------------------------------------------------------- generator-demo

void cmd_generator_demo(const ScenarioConfig& cfg, const std::string& out,
                        ScenarioReport& report) {
    const int stages = static_cast<int>(cfg.get_int("generator.stages", 6));
    DiscreteSet lambda = multiscale_cluster(static_cast<int>(cfg.get_int("lambda.levels", 4)));
    DenseFamily family = build_dense_family(
        static_cast<int>(cfg.get_int("generator.family_count", stages)), cfg.seed() + 41);
    const UniformGrid freq = grid_from_config(cfg, 16.0, 1024);

    GeneratorRecipe recipe;
    if (cfg.has("recipe.path")) {
        recipe = load_recipe(cfg.require_string("recipe.path"));
    } else {
        recipe = construct_generator(lambda, family, stages, freq);
        save_recipe(recipe, out + "/recipe.json");
    }

    const double eps = cfg.get_real("demo.eps", 0.1);
    const double d0 = cfg.get_real("demo.d0", 3.0);
    const double pert_size = cfg.get_real("demo.perturbation", 0.03);
    const long n_targets = cfg.get_int("demo.targets", 10);
    const UniformGrid sgrid = dual_grid(freq);

    std::mt19937_64 rng = sub_rng(cfg, 501);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double max_err = 0.0;
    bool all_ok = true;
    std::vector<std::vector<double>> rows;
    for (long t = 0; t < n_targets; ++t) {
        // a family member plus a small H1 perturbation: still within the
        // eps/2 reach of the family
        const int N = stages - static_cast<int>(t % 2);
        SampledFunction target = fourier_inverse(
            family.members[static_cast<std::size_t>(N - 1)].sample(freq));
        SampledFunction pert = make_sampled(sgrid);
        const double c = -2.0 + 4.0 * unit(rng);
        const double w = 0.5 + unit(rng);
        for (std::size_t j = 0; j < sgrid.points; ++j) {
            const double x = sgrid.node(j) - c;
            pert.values[j] = x * std::exp(-x * x / w);
        }
        const double pn = h1_norm(pert).value;
        for (std::size_t j = 0; j < sgrid.points; ++j)
            target.values[j] += pert.values[j] * (pert_size / pn);

        CompletenessReport cr = completeness_experiment(recipe, family, target, eps, d0);
        all_ok = all_ok && cr.ok;
        max_err = std::max(max_err, cr.achieved_error_h1);
        if (!cr.failure.empty()) report.notes.push_back("target " + std::to_string(t) + ": " + cr.failure);
        rows.push_back({static_cast<double>(t), static_cast<double>(cr.stage_used),
                        cr.member_distance, cr.achieved_error_h1});
    }
    write_csv(out + "/completeness.csv", "target,stage_used,member_distance,achieved_error_h1",
              rows);
    report.metrics["max_achieved_error"] = max_err;
    verdict(report, "demo.completeness", all_ok && max_err < eps);
}

// ---------------------------------------------------------------- pair-build

void cmd_pair(const ScenarioConfig& cfg, const std::string& out, ScenarioReport& report) {
    const IntervalSpec I1{cfg.get_real("pair.i1_lo", -3.3), cfg.get_real("pair.i1_hi", 0.1)};
    const IntervalSpec I2{cfg.get_real("pair.i2_lo", -0.1), cfg.get_real("pair.i2_hi", 3.3)};
    const int range_n = static_cast<int>(cfg.get_int("pair.range", 6));
    const UniformGrid freq = grid_from_config(cfg, 64.0, 4096);

    PairResult pair = pair_generators(I1, I2, freq, range_n);
    save_pair(pair.recipe_1, out + "/pair_recipe_1.json");
    save_pair(pair.recipe_2, out + "/pair_recipe_2.json");
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < freq.points; ++k)
            rows.push_back({freq.node(k), pair.f1_spec.values[k].real(),
                            pair.f2_spec.values[k].real()});
        write_csv(out + "/pair_spectra.csv", "t,f1,f2", rows);
    }

    auto check_recipe = [&](const PairRecipe& r, const SpectralFunction& F, const std::string& tag) {
        // zero set: (I + 2 pi k) within range, plus the origin
        double on_i = 0.0;
        for (std::size_t j = 0; j < freq.points; ++j) {
            const double t = freq.node(j);
            for (int k = -range_n; k <= range_n; ++k) {
                const double s = t - kTwoPi * k;
                if (s >= r.interval_i.lo && s <= r.interval_i.hi)
                    on_i = std::max(on_i, std::abs(F.values[j]));
            }
        }
        report.metrics[tag + "_max_on_zero_set"] = on_i;
        verdict(report, "pair." + tag + "_zero_set", on_i < cfg.get_real("tol.zero_set", 1e-12));
        verdict(report, "pair." + tag + "_origin", r.evaluate(0.0) == 0.0);

        // positivity on J-cells away from the origin
        bool positive = true;
        for (int n = -range_n; n <= range_n; ++n) {
            const double margin = 0.05 * r.interval_j.length();
            for (double t = r.interval_j.lo + margin; t < r.interval_j.hi - margin; t += 0.01) {
                const double abs_t = t + kTwoPi * n;
                if (std::abs(abs_t) < 0.05) continue;
                if (std::abs(abs_t) > freq.half_extent) continue;
                if (!(r.evaluate(abs_t) > 0.0)) positive = false;
            }
        }
        verdict(report, "pair." + tag + "_positive", positive);

        // decay envelope per requested rate
        for (double b : {0.1, 0.3}) {
            double cb = 0.0;
            for (std::size_t j = 0; j < freq.points; ++j)
                cb = std::max(cb, std::abs(F.values[j]) * std::exp(b * std::abs(freq.node(j))));
            std::ostringstream key;
            key << tag << "_envelope_b" << b;
            report.metrics[key.str()] = cb;
            std::ostringstream vkey;
            vkey << "pair." << tag << "_decay_b" << b;
            verdict(report, vkey.str(), std::isfinite(cb) && cb < 1e6);
        }

        // 2 pi periodicity up to the e^{-1} envelope in the right tail
        const double probe_t = r.interval_j.lo + 0.5 * r.interval_j.length() +
                               kTwoPi * (range_n - 2);
        const double ratio = r.evaluate(probe_t + kTwoPi) / r.evaluate(probe_t);
        report.metrics[tag + "_tail_ratio"] = ratio;
        verdict(report, "pair." + tag + "_tail_envelope",
                std::abs(ratio - std::exp(-1.0)) < 0.05 * std::exp(-1.0));
    };
    check_recipe(pair.recipe_1, pair.f1_spec, "f1");
    check_recipe(pair.recipe_2, pair.f2_spec, "f2");

    // the analytic continuation probe: shift to Im z = y and take the H1 norm
    const double y = cfg.get_real("pair.shift", 0.5);
    SampledFunction shifted = complex_shift(pair.f1_spec, y);
    const double shifted_h1 = h1_norm(shifted).value;
    report.metrics["f1_shifted_h1"] = shifted_h1;
    verdict(report, "pair.shift_finite", std::isfinite(shifted_h1));

    const IntervalSpec& a = I1.lo <= I2.lo ? I1 : I2;
    const IntervalSpec& b = I1.lo <= I2.lo ? I2 : I1;
    verdict(report, "pair.coverage", a.lo <= -kPi && b.hi >= kPi && b.lo <= a.hi);
}

// ---------------------------------------------------------------- annihilate

void cmd_annihilate(const ScenarioConfig& cfg, const std::string& out, ScenarioReport& report) {
    const double delta = cfg.get_real("annihilate.delta", 0.5);
    const UniformGrid grid = grid_from_config(cfg, 128.0, 2048);
    SampledFunction g = vanishing_on_integers(delta, grid);
    SampledFunction f = make_sampled(grid);
    for (std::size_t j = 0; j < grid.points; ++j) {
        const double x = grid.node(j);
        f.values[j] = std::exp(-x * x / 2.0);
    }

    const double lambda_window = cfg.get_real("annihilate.window", 20.0);
    std::vector<double> lambdas;
    for (double n = -lambda_window; n <= lambda_window; n += 1.0) lambdas.push_back(n);
    lambdas.push_back(0.5);
    AnnihilatorWitness witness = build_annihilator(f, g, lambdas);
    report.metrics["k_sup"] = witness.k_sup;

    const double f1 = lp_norm(f, 1.0);
    double max_integer = 0.0;
    for (const auto& [l, r] : witness.residuals) {
        if (l == 0.5) continue;
        max_integer = std::max(max_integer, std::abs(r) / (witness.k_sup * f1));
    }
    report.metrics["max_integer_residual"] = max_integer;
    verdict(report, "annihilate.integers", max_integer < cfg.get_real("tol.integer_residual", 1e-6));

    const double half_oracle = std::abs(vanishing_on_integers_at(delta, 0.5));
    const double fitted_constant = std::abs(witness.residuals.at(0.5)) / half_oracle;
    report.metrics["residual_at_half"] = std::abs(witness.residuals.at(0.5));
    report.metrics["fitted_constant"] = fitted_constant;
    report.metrics["pairing_constant"] = kPairingConstant;
    verdict(report, "annihilate.half_oracle",
            std::abs(fitted_constant / kPairingConstant - 1.0) < cfg.get_real("tol.oracle", 0.05));

    // full scan over the integer window plus the perturbed-integers cross-check
    DiscreteSet integers = arithmetic_set(1.0, lambda_window);
    ResidualTable table = annihilation_scan(witness.k, f, integers);
    std::vector<std::vector<double>> rows;
    for (const ResidualRow& row : table.rows)
        rows.push_back({row.lambda, row.residual.real(), row.residual.imag(), row.abs_residual,
                        row.normalized});
    write_csv(out + "/residuals.csv", "lambda,re_residual,im_residual,abs_residual,normalized",
              rows);
    if (!table.note.empty()) report.notes.push_back(table.note);

    DiscreteSet perturbed = perturbed_integers(cfg.get_real("lambda.gamma", 0.5), 10.0,
                                               static_cast<std::uint64_t>(cfg.get_int("lambda.seed", 7)));
    ResidualTable ptable = annihilation_scan(witness.k, f, perturbed);
    double worst_oracle_dev = 0.0;
    std::vector<std::vector<double>> prows;
    for (const ResidualRow& row : ptable.rows) {
        if (row.excluded) continue;
        const double oracle = kPairingConstant * std::abs(vanishing_on_integers_at(delta, row.lambda));
        if (oracle > 1e-8)
            worst_oracle_dev = std::max(worst_oracle_dev, std::abs(row.abs_residual / oracle - 1.0));
        prows.push_back({row.lambda, row.abs_residual, oracle});
    }
    write_csv(out + "/perturbed_residuals.csv", "lambda,abs_residual,oracle", prows);
    report.metrics["perturbed_oracle_dev"] = worst_oracle_dev;
    verdict(report, "annihilate.perturbed_oracle",
            worst_oracle_dev < cfg.get_real("tol.perturbed_oracle", 0.1));

    // spatial cross-check of the spectral formula at one off-lattice point
    const cplx spatial = annihilation_spatial(witness.k, f, 0.5);
    const cplx spectral = witness.residuals.at(0.5);
    const double cross_dev = std::abs(spatial - spectral) / std::abs(spectral);
    report.metrics["spatial_cross_dev"] = cross_dev;
    verdict(report, "annihilate.spatial_cross", cross_dev < cfg.get_real("tol.cross", 1e-6));
}

// ---------------------------------------------------------------- approx

void cmd_approx(const ScenarioConfig& cfg, const std::string& out, ScenarioReport& report) {
    const UniformGrid freq = grid_from_config(cfg, 8.0, 512);
    DiscreteSet lambda = arithmetic_set(cfg.get_real("approx.alpha", 0.25),
                                        cfg.get_real("approx.t", 30.0));
    SpectralFunction target = sample_tent(freq);
    const IntervalSpec I{cfg.get_real("approx.i_lo", -2.0), cfg.get_real("approx.i_hi", 2.0)};

    std::vector<std::vector<double>> rows;
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (std::size_t terms : {15, 30, 60, 120}) {
        FitOptions opts;
        opts.max_terms = terms;
        FitResult fit = fit_polynomial(target, lambda, I, opts);
        rows.push_back({static_cast<double>(terms), fit.residual_w});
        report.metrics["residual_m" + std::to_string(terms)] = fit.residual_w;
        if (fit.residual_w > prev * (1.0 + 1e-9)) monotone = false;
        prev = fit.residual_w;
    }
    write_csv(out + "/approx_residuals.csv", "max_terms,residual_w", rows);
    verdict(report, "approx.monotone", monotone);

    // exact recovery when the target is one exponential from the set
    SpectralFunction exact = make_spectral(freq);
    const double l0 = 1.0;
    for (std::size_t k = 0; k < freq.points; ++k)
        exact.values[k] = std::exp(cplx{0.0, l0 * freq.node(k)});
    FitOptions opts;
    opts.max_terms = 40;
    FitResult fit = fit_polynomial(exact, lambda, I, opts);
    report.metrics["exact_recovery_residual"] = fit.residual_w;
    verdict(report, "approx.exact_recovery", fit.residual_w < cfg.get_real("tol.exact", 1e-8));
}

} // namespace

ScenarioReport run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
    cfg.validate_config();
    const std::string out = opts.out_override.empty() ? cfg.output_dir() : opts.out_override;
    std::filesystem::create_directories(out);

    ScenarioReport report;
    report.command = cfg.command;
    report.config_echo = cfg.entries;
    report.hash = config_hash(cfg);
    report.seed = cfg.seed();

    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.command == "density")
        cmd_density(cfg, out, report);
    else if (cfg.command == "probe-radius")
        cmd_probe(cfg, opts, out, report);
    else if (cfg.command == "hilbert-check")
        cmd_hilbert(cfg, out, report);
    else if (cfg.command == "norms")
        cmd_norms(cfg, out, report);
    else if (cfg.command == "molecule-suite")
        cmd_molecules(cfg, out, report);
    else if (cfg.command == "generator-build")
        cmd_generator_build(cfg, out, report);
    else if (cfg.command == "generator-demo")
        cmd_generator_demo(cfg, out, report);
    else if (cfg.command == "pair-build")
        cmd_pair(cfg, out, report);
    else if (cfg.command == "annihilate")
        cmd_annihilate(cfg, out, report);
    else if (cfg.command == "approx")
        cmd_approx(cfg, out, report);
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    save_report(report, out + "/report.json");
    return report;
}

ScenarioReport replay_report(const std::string& report_path, const RunOptions& opts) {
    json j;
    try {
        j = json::parse(read_file(report_path));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("report parse error: ") + e.what());
    }
    ScenarioConfig cfg;
    for (const auto& [key, v] : j.at("config").items()) cfg.entries[key] = v.get<std::string>();
    auto it = cfg.entries.find("command");
    if (it == cfg.entries.end()) throw ConfigError("replay: embedded config has no command");
    cfg.command = it->second;

    if (config_hash(cfg) != j.at("config_hash").get<std::string>())
        throw ConfigError("replay: config hash mismatch (report edited after the run)");

    RunOptions ropts = opts;
    if (ropts.out_override.empty())
        ropts.out_override = cfg.output_dir() + "_replay";
    ScenarioReport rerun = run_scenario(cfg, ropts);

    const auto& metrics = j.at("metrics");
    for (const auto& [name, v] : metrics.items()) {
        const double before = v.get<double>();
        auto mi = rerun.metrics.find(name);
        if (mi == rerun.metrics.end())
            throw NumericalHazard("replay: metric '" + name + "' missing from the rerun");
        const double scale = std::max(1.0, std::abs(before));
        if (std::abs(mi->second - before) > 1e-12 * scale)
            throw NumericalHazard("replay: metric '" + name + "' drifted: " +
                                  format_real(before) + " -> " + format_real(mi->second));
    }
    rerun.notes.push_back("replay of " + report_path + ": metrics identical within 1e-12");
    return rerun;
}

} // namespace tlab
