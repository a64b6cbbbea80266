// ccr-cos: exposure metrics for IR/FX books by Fourier-cosine expansion,
// with a Monte Carlo baseline.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccr/cos_engine.hpp"
#include "ccr/io.hpp"
#include "ccr/mc_engine.hpp"
#include "ccr/parallel.hpp"
#include "ccr/portfolio.hpp"

namespace {

using namespace ccr;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double thread_cpu_seconds() {
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

double process_cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

struct Options {
    std::string portfolio;
    std::string model;
    std::string settings;
    std::string level = "netting";
    std::string partition;
    std::optional<double> alpha;
    std::optional<int> K, J, J_mom, dates;
    std::optional<double> tol, L;
    std::int64_t nsim = 500'000;
    std::vector<std::int64_t> nsims;
    std::uint64_t seed = 20240607;
    int threads = 0;
    std::string reference;
    std::string out;

    // gen-portfolio
    int trades = 100;
    std::uint64_t gen_seed = 42;

    // converge
    std::string sweep = "K";
    std::vector<int> values;
    std::optional<double> date;
    int ref_K = 150;
    int ref_J = 130;

    bool mc_sens = false;
};

struct Inputs {
    ModelParams model;
    Portfolio portfolio;
    RunSettings settings;
    json files = json::object();
};

Inputs load(const Options& o, bool need_portfolio) {
    Inputs in;
    if (!o.model.empty()) {
        std::string text = read_file(o.model);
        in.model = model_from_json(text, o.model);
        in.files["model"] = {{"path", o.model}, {"fnv1a64", fnv1a64(text)}};
    }
    if (!o.settings.empty()) {
        std::string text = read_file(o.settings);
        in.settings = settings_from_json(text, o.settings);
        in.files["settings"] = {{"path", o.settings}, {"fnv1a64", fnv1a64(text)}};
    }
    CosSettings& s = in.settings.cos;
    if (o.K) s.K = *o.K;
    if (o.J) s.J = *o.J;
    if (o.J_mom) s.J_mom = *o.J_mom;
    if (o.tol) s.tol = *o.tol;
    if (o.L) s.L = *o.L;
    if (o.alpha) s.alpha = *o.alpha;
    if (o.dates) in.settings.dates = *o.dates;
    s.validate();
    if (in.settings.dates < 1) throw std::invalid_argument("--dates must be >= 1");

    if (need_portfolio) {
        if (o.portfolio.empty()) throw std::invalid_argument("--portfolio is required");
        std::string text = read_file(o.portfolio);
        in.portfolio = portfolio_from_json(text, o.portfolio);
        if (in.portfolio.trades.empty()) throw InputError(o.portfolio + ":1: portfolio has no trades");
        in.files["portfolio"] = {{"path", o.portfolio}, {"fnv1a64", fnv1a64(text)}};
        if (!o.partition.empty())
            in.portfolio = partition_counterparty(std::move(in.portfolio), parse_partition_mode(o.partition));
    }
    return in;
}

std::vector<double> exposure_dates(double t_max, int n) {
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = n == 1 ? t_max : t_max * i / (n - 1);
    return d;
}

json settings_json(const RunSettings& s) { return json::parse(settings_to_json(s)); }

struct Run {
    std::string command;
    std::string argv;
    std::chrono::steady_clock::time_point wall0 = std::chrono::steady_clock::now();
    double cpu0 = process_cpu_seconds();
    json manifest = json::object();
};

void emit(const Options& o, Run& run, const std::string& body) {
    if (o.out.empty()) {
        std::cout << body;
        return;
    }
    write_file(o.out, body);
    run.manifest["tool"] = "ccr-cos";
    run.manifest["version"] = kVersion;
    run.manifest["command"] = run.command;
    run.manifest["argv"] = run.argv;
    run.manifest["output"] = {{"path", o.out}, {"fnv1a64", fnv1a64(body)}};
    run.manifest["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - run.wall0).count();
    run.manifest["cpu_seconds"] = process_cpu_seconds() - run.cpu0;
    write_file(o.out + ".manifest.json", run.manifest.dump(2) + "\n");
}

std::string netting_label(const std::string& id) { return "netting/" + id; }

// Time-averaged |difference| as a percentage of total notional, over the
// rows of `rows` that have a reference row with the same (t, level).
json reference_errors(const std::vector<ResultRow>& rows, const std::string& ref_path, double notional) {
    std::string text = read_file(ref_path);
    std::vector<ResultRow> ref = read_results_csv(text, ref_path);
    auto metric = [&](auto field) {
        double sum = 0.0;
        int n = 0;
        for (const ResultRow& r : rows) {
            auto it = std::find_if(ref.begin(), ref.end(), [&](const ResultRow& q) {
                return q.level == r.level && std::abs(q.t - r.t) <= 1e-9 * std::max(1.0, std::abs(r.t));
            });
            if (it == ref.end()) continue;
            double a = field(r), b = field(*it);
            if (std::isnan(a) || std::isnan(b)) continue;
            sum += std::abs(a - b);
            ++n;
        }
        return n == 0 ? json(nullptr) : json(sum / n / notional * 100.0);
    };
    json j = {{"path", ref_path},
              {"fnv1a64", fnv1a64(text)},
              {"pfe_error_pct_of_notional", metric([](const ResultRow& r) { return r.pfe; })},
              {"ee_error_pct_of_notional", metric([](const ResultRow& r) { return r.ee; })},
              {"dEE_dxd_error_pct_of_notional", metric([](const ResultRow& r) { return r.dEE_dxd; })},
              {"dEE_dxf_error_pct_of_notional", metric([](const ResultRow& r) { return r.dEE_dxf; })},
              {"dEE_dX_error_pct_of_notional", metric([](const ResultRow& r) { return r.dEE_dX; })}};
    if (j["pfe_error_pct_of_notional"].is_null() && j["ee_error_pct_of_notional"].is_null())
        throw InputError(ref_path + ":1: no rows match the computed (t, level) pairs");
    return j;
}

std::string csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    write_results_csv(os, rows);
    return os.str();
}

// ---------------------------------------------------------------- COS runs

enum class Metric { pfe, ee, sens };

std::vector<ResultRow> cos_rows(const Inputs& in, const std::string& level, Metric metric, int threads,
                                PricingCounter* counter = nullptr) {
    const CosEngine engine(in.model, in.settings.cos);
    const std::vector<double> dates = exposure_dates(in.portfolio.max_maturity(), in.settings.dates);
    const bool counterparty = level == "counterparty";
    std::vector<std::vector<ResultRow>> per_date(dates.size());

    parallel_for(dates.size(), threads, [&](std::size_t d) {
        const double t = dates[d];
        const double c0 = thread_cpu_seconds();
        std::vector<ResultRow> rows;
        if (metric == Metric::sens) {
            SensitivityResult s = engine.ee_sensitivities(in.portfolio, t);
            auto ee = engine.netting_ee(in.portfolio, t);
            double ee_sum = 0.0;
            for (std::size_t n = 0; n < s.netting.size(); ++n) {
                const EeSensitivity& e = s.netting[n];
                rows.push_back({t, netting_label(e.netting_set), kNaN, ee[n], e.dEE_dxd, e.dEE_dxf, e.dEE_dX, 0.0,
                                "COS"});
                ee_sum += ee[n];
            }
            if (counterparty)
                rows.push_back({t, "counterparty", kNaN, ee_sum, s.counterparty.dEE_dxd, s.counterparty.dEE_dxf,
                                s.counterparty.dEE_dX, 0.0, "COS"});
        } else if (counterparty) {
            CounterpartyMetrics m = engine.counterparty_metrics(in.portfolio, t, counter);
            rows.push_back({t, "counterparty", metric == Metric::pfe ? m.pfe : kNaN, m.ee, kNaN, kNaN, kNaN, 0.0,
                            "COS"});
        } else {
            for (const NettingSetMetrics& m : engine.netting_metrics(in.portfolio, t, counter))
                rows.push_back({t, netting_label(m.netting_set), metric == Metric::pfe ? m.pfe : kNaN, m.ee, kNaN,
                                kNaN, kNaN, 0.0, "COS"});
        }
        const double cpu = thread_cpu_seconds() - c0;
        for (ResultRow& r : rows) r.cpu_seconds = cpu;
        per_date[d] = std::move(rows);
    });

    std::vector<ResultRow> out;
    for (auto& v : per_date) out.insert(out.end(), v.begin(), v.end());
    return out;
}

int cmd_cos(const Options& o, Run& run, Metric metric) {
    if (o.level != "netting" && o.level != "counterparty")
        throw std::invalid_argument("--level must be netting or counterparty");
    Inputs in = load(o, true);
    const int threads = resolve_threads(o.threads);
    std::vector<ResultRow> rows = cos_rows(in, o.level, metric, threads);
    run.manifest["settings"] = settings_json(in.settings);
    run.manifest["model"] = json::parse(model_to_json(in.model));
    run.manifest["inputs"] = in.files;
    run.manifest["level"] = o.level;
    run.manifest["threads"] = threads;
    run.manifest["total_notional"] = in.portfolio.total_notional(in.model.X0);
    if (!o.reference.empty()) {
        json err = reference_errors(rows, o.reference, in.portfolio.total_notional(in.model.X0));
        run.manifest["reference"] = err;
        std::cerr << "time-averaged error (% of total notional):";
        for (const char* k : {"pfe", "ee", "dEE_dxd", "dEE_dxf", "dEE_dX"}) {
            const json& v = err[std::string(k) + "_error_pct_of_notional"];
            if (!v.is_null()) std::cerr << ' ' << k << '=' << v.get<double>();
        }
        std::cerr << '\n';
    }
    emit(o, run, csv(rows));
    return 0;
}

// ---------------------------------------------------------------- MC runs

std::vector<ResultRow> mc_rows(const Inputs& in, const std::string& level, const McConfig& cfg, bool sens) {
    const std::vector<double> dates = exposure_dates(in.portfolio.max_maturity(), in.settings.dates);
    const double alpha = in.settings.cos.alpha;
    std::vector<ResultRow> out;
    for (double t : dates) {
        const double c0 = process_cpu_seconds();
        ExposurePaths paths = simulate_exposures(in.portfolio, in.model, t, cfg);
        std::vector<ResultRow> rows;
        for (std::size_t s = 0; s < paths.netting_sets.size(); ++s) {
            McResult r = estimate_metrics(paths.netting_exposure(s), alpha);
            rows.push_back({t, netting_label(paths.netting_sets[s]), r.pfe_hat, r.ee_hat, kNaN, kNaN, kNaN, 0.0, "MC"});
        }
        if (level == "counterparty") {
            McResult r = estimate_metrics(paths.counterparty_exposure(), alpha);
            rows.push_back({t, "counterparty", r.pfe_hat, r.ee_hat, kNaN, kNaN, kNaN, 0.0, "MC"});
        }
        if (sens) {
            McSensitivityResult s = mc_ee_sensitivities(in.portfolio, in.model, t, cfg);
            for (std::size_t n = 0; n < s.netting.size(); ++n) {
                rows[n].dEE_dxd = s.netting[n].value.dEE_dxd;
                rows[n].dEE_dxf = s.netting[n].value.dEE_dxf;
                rows[n].dEE_dX = s.netting[n].value.dEE_dX;
            }
            if (level == "counterparty") {
                rows.back().dEE_dxd = s.counterparty.value.dEE_dxd;
                rows.back().dEE_dxf = s.counterparty.value.dEE_dxf;
                rows.back().dEE_dX = s.counterparty.value.dEE_dX;
            }
        }
        const double cpu = process_cpu_seconds() - c0;
        for (ResultRow& r : rows) r.cpu_seconds = cpu;
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

McConfig mc_config(const Options& o, std::int64_t nsim) {
    McConfig cfg;
    cfg.n_sim = nsim;
    cfg.seed = o.seed;
    cfg.threads = resolve_threads(o.threads);
    cfg.validate();
    return cfg;
}

int cmd_mc(const Options& o, Run& run) {
    if (o.level != "netting" && o.level != "counterparty")
        throw std::invalid_argument("--level must be netting or counterparty");
    Inputs in = load(o, true);
    McConfig cfg = mc_config(o, o.nsim);
    std::vector<ResultRow> rows = mc_rows(in, o.level, cfg, o.mc_sens);
    run.manifest["settings"] = settings_json(in.settings);
    run.manifest["model"] = json::parse(model_to_json(in.model));
    run.manifest["inputs"] = in.files;
    run.manifest["mc"] = {{"n_sim", cfg.n_sim}, {"seed", cfg.seed}, {"batch", cfg.batch}, {"threads", cfg.threads}};
    if (!o.reference.empty()) {
        json err = reference_errors(rows, o.reference, in.portfolio.total_notional(in.model.X0));
        run.manifest["reference"] = err;
        if (!err["pfe_error_pct_of_notional"].is_null())
            std::cerr << "time-averaged error (% of total notional): pfe="
                      << err["pfe_error_pct_of_notional"].get<double>() << '\n';
    }
    emit(o, run, csv(rows));
    return 0;
}

// ---------------------------------------------------------------- converge

double level_pfe(const CosEngine& e, const Portfolio& pf, double t, const std::string& level) {
    if (level == "counterparty") return e.counterparty_metrics(pf, t).pfe;
    auto m = e.netting_metrics(pf, t);
    if (m.size() != 1) throw std::invalid_argument("netting-level sweeps need a single netting set; use --partition");
    return m.front().pfe;
}

// Least-squares slope of y on x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_converge(const Options& o, Run& run) {
    if (o.sweep != "K" && o.sweep != "J") throw std::invalid_argument("--sweep must be K or J");
    Inputs in = load(o, true);
    const double t = o.date.value_or(0.5 * in.portfolio.max_maturity());
    std::vector<int> values = o.values;
    if (values.empty()) {
        if (o.sweep == "K")
            for (int k = 4; k <= 128; k += 4) values.push_back(k);
        else
            for (int j = 10; j <= 60; j += 5) values.push_back(j);
    }

    CosSettings ref = in.settings.cos;
    ref.K = o.ref_K;
    ref.J = o.ref_J;
    const double ref_pfe = level_pfe(CosEngine(in.model, ref), in.portfolio, t, o.level);

    // Sweeps hold the other resolution at its reference value.
    std::vector<double> pfes(values.size());
    parallel_for(values.size(), resolve_threads(o.threads), [&](std::size_t i) {
        CosSettings s = ref;
        (o.sweep == "K" ? s.K : s.J) = values[i];
        pfes[i] = level_pfe(CosEngine(in.model, s), in.portfolio, t, o.level);
    });

    std::ostringstream os;
    os << "sweep,value,pfe,reference_pfe,rel_error\n";
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double err = std::abs(pfes[i] - ref_pfe) / ref_pfe;
        os << o.sweep << ',' << values[i] << ',' << format_number(pfes[i]) << ',' << format_number(ref_pfe)
           << ',' << format_number(err) << '\n';
        if (err > 0.0) {
            const bool loglog = o.level == "counterparty";
            xs.push_back(loglog ? std::log(values[i]) : values[i]);
            ys.push_back(std::log10(err));
        }
    }
    json fit = nullptr;
    if (xs.size() >= 2) {
        const double slope = fit_slope(xs, ys);
        const char* kind = o.level == "counterparty" ? "loglog" : "semilog";
        // log-log slopes are reported for natural logs of K on both axes.
        const double reported = o.level == "counterparty" ? slope * std::log(10.0) : slope;
        fit = {{"kind", kind}, {"slope", reported}};
        std::cerr << "fitted " << kind << " slope: " << reported
                  << (o.level == "counterparty" ? " (log err vs log " : " (log10 err per unit ") << o.sweep << ")\n";
    }
    run.manifest["settings"] = settings_json(in.settings);
    run.manifest["reference_settings"] = {{"K", ref.K}, {"J", ref.J}, {"TOL", ref.tol}};
    run.manifest["inputs"] = in.files;
    run.manifest["date"] = t;
    run.manifest["level"] = o.level;
    run.manifest["fit"] = fit;
    emit(o, run, os.str());
    return 0;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const Options& o, Run& run) {
    if (o.level != "netting" && o.level != "counterparty")
        throw std::invalid_argument("--level must be netting or counterparty");
    Inputs in = load(o, true);
    const double notional = in.portfolio.total_notional(in.model.X0);
    const int threads = resolve_threads(o.threads);

    Inputs ref_in = in;
    ref_in.settings.cos.K = o.ref_K;
    ref_in.settings.cos.J = o.ref_J;
    std::vector<ResultRow> ref = cos_rows(ref_in, o.level, Metric::pfe, threads);

    auto error_pct = [&](const std::vector<ResultRow>& rows) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) sum += std::abs(rows[i].pfe - ref[i].pfe);
        return sum / static_cast<double>(rows.size()) / notional * 100.0;
    };
    auto level_rows = [&](std::vector<ResultRow> rows) {
        // MC rows carry netting sets as well; keep the ones matching ref.
        std::vector<ResultRow> out;
        for (ResultRow& r : rows)
            if ((o.level == "counterparty") == (r.level == "counterparty")) out.push_back(std::move(r));
        return out;
    };

    std::ostringstream os;
    os << "method,n_sim,K,J,cpu_seconds,pfe_error_pct_of_notional\n";
    const double c0 = process_cpu_seconds();
    std::vector<ResultRow> cos = cos_rows(in, o.level, Metric::pfe, 1);
    const double cos_cpu = process_cpu_seconds() - c0;
    os << "COS,," << in.settings.cos.K << ',' << in.settings.cos.J << ',' << format_number(cos_cpu) << ','
       << format_number(error_pct(cos)) << '\n';

    std::vector<std::int64_t> nsims = o.nsims.empty() ? std::vector<std::int64_t>{500'000, 1'000'000, 2'000'000}
                                                      : o.nsims;
    json mc = json::array();
    for (std::int64_t n : nsims) {
        McConfig cfg = mc_config(o, n);
        const double m0 = process_cpu_seconds();
        std::vector<ResultRow> rows = level_rows(mc_rows(in, o.level, cfg, false));
        const double cpu = process_cpu_seconds() - m0;
        os << "MC," << n << ",,," << format_number(cpu) << ',' << format_number(error_pct(rows)) << '\n';
        mc.push_back({{"n_sim", n}, {"seed", cfg.seed}});
    }
    run.manifest["settings"] = settings_json(in.settings);
    run.manifest["reference_settings"] = {{"K", o.ref_K}, {"J", o.ref_J}};
    run.manifest["inputs"] = in.files;
    run.manifest["mc"] = mc;
    run.manifest["total_notional"] = notional;
    emit(o, run, os.str());
    return 0;
}

// ---------------------------------------------------------------- gen

int cmd_gen(const Options& o, Run& run) {
    Inputs in = load(o, false);
    GeneratorSpec spec;
    spec.n_trades = o.trades;
    spec.seed = o.gen_seed;
    Portfolio pf = generate_portfolio(spec, in.model);
    if (!o.partition.empty()) pf = partition_counterparty(std::move(pf), parse_partition_mode(o.partition));
    run.manifest["generator"] = {{"n_trades", spec.n_trades}, {"seed", spec.seed}};
    run.manifest["total_notional"] = pf.total_notional(in.model.X0);
    run.manifest["t_max"] = pf.max_maturity();
    emit(o, run, portfolio_to_json(pf));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Counterparty exposure (PFE, EE, EE sensitivities) by Fourier-cosine expansion"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* c, bool portfolio) {
        if (portfolio) c->add_option("--portfolio", o.portfolio, "Portfolio JSON")->required();
        c->add_option("--model", o.model, "Model JSON (default: USD/JPY reference parameters)");
        c->add_option("--settings", o.settings, "Settings JSON {K,J,J_mom,TOL,L,alpha,filter_p,dates}");
        c->add_option("--partition", o.partition, "single_netting_set | by_contract_type");
        c->add_option("--threads", o.threads, "Worker threads (default: CCR_COS_THREADS or hardware)");
        c->add_option("--out", o.out, "Output file (default: stdout); a .manifest.json is written next to it");
    };
    auto cos_flags = [&](CLI::App* c) {
        c->add_option("--level", o.level, "netting | counterparty");
        c->add_option("--alpha", o.alpha, "PFE quantile level");
        c->add_option("--terms", o.K, "Expansion terms K");
        c->add_option("--quad", o.J, "Quadrature points J per state variable");
        c->add_option("--quad-mom", o.J_mom, "Quadrature points for the moment pass");
        c->add_option("--tol", o.tol, "Integration range tail tolerance");
        c->add_option("--L", o.L, "Support width multiplier");
        c->add_option("--dates", o.dates, "Number of equidistant exposure dates on [0, T_max]");
        c->add_option("--reference", o.reference, "Results CSV to compare against");
    };
    auto mc_flags = [&](CLI::App* c) {
        c->add_option("--seed", o.seed, "Monte Carlo seed");
    };

    auto* gen = app.add_subcommand("gen-portfolio", "Generate a seeded random portfolio");
    common(gen, false);
    gen->add_option("--trades", o.trades, "Number of trades")->check(CLI::PositiveNumber);
    gen->add_option("--seed", o.gen_seed, "Generator seed");

    auto* pfe_cmd = app.add_subcommand("pfe", "PFE and EE by the COS method");
    auto* ee_cmd = app.add_subcommand("ee", "EE by the COS method");
    auto* sens_cmd = app.add_subcommand("sens", "EE sensitivities by shock-and-revalue");
    for (auto* c : {pfe_cmd, ee_cmd, sens_cmd}) {
        common(c, true);
        cos_flags(c);
    }

    auto* mc = app.add_subcommand("mc", "Monte Carlo PFE and EE");
    common(mc, true);
    cos_flags(mc);
    mc_flags(mc);
    mc->add_option("--nsim", o.nsim, "Paths per exposure date")->check(CLI::Range(std::int64_t{1000}, std::int64_t{1} << 40));
    mc->add_flag("--sens", o.mc_sens, "Add common-random-number EE sensitivities");

    auto* conv = app.add_subcommand("converge", "PFE error against a high-resolution reference over K or J");
    common(conv, true);
    cos_flags(conv);
    conv->add_option("--sweep", o.sweep, "K | J");
    conv->add_option("--values", o.values, "Sweep points")->delimiter(',');
    conv->add_option("--date", o.date, "Exposure date (default: T_max / 2)");
    conv->add_option("--ref-terms", o.ref_K, "Reference K");
    conv->add_option("--ref-quad", o.ref_J, "Reference J");

    auto* cmp = app.add_subcommand("compare", "CPU time and accuracy of COS and MC against a reference");
    common(cmp, true);
    cos_flags(cmp);
    mc_flags(cmp);
    cmp->add_option("--nsim", o.nsims, "Monte Carlo path counts")->delimiter(',');
    cmp->add_option("--ref-terms", o.ref_K, "Reference K");
    cmp->add_option("--ref-quad", o.ref_J, "Reference J");

    CLI11_PARSE(app, argc, argv);

    Run run;
    for (int i = 1; i < argc; ++i) run.argv += (i > 1 ? " " : "") + std::string(argv[i]);
    try {
        if (*gen) return run.command = "gen-portfolio", cmd_gen(o, run);
        if (*pfe_cmd) return run.command = "pfe", cmd_cos(o, run, Metric::pfe);
        if (*ee_cmd) return run.command = "ee", cmd_cos(o, run, Metric::ee);
        if (*sens_cmd) return run.command = "sens", cmd_cos(o, run, Metric::sens);
        if (*mc) return run.command = "mc", cmd_mc(o, run);
        if (*conv) return run.command = "converge", cmd_converge(o, run);
        if (*cmp) return run.command = "compare", cmd_compare(o, run);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
