#include "symsing/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "symsing/errors.hpp"
#include "symsing/experiments.hpp"
#include "symsing/structure.hpp"

namespace symsing {

namespace {

using nlohmann::json;

json entries_json(const ResidueVector& x) {
    json arr = json::array();
    for (auto e : x.entries()) arr.push_back(e);
    return arr;
}

json histogram_json(const std::map<std::size_t, std::uint64_t>& histogram) {
    json obj = json::object();
    for (auto [k, c] : histogram) obj[std::to_string(k)] = c;
    return obj;
}

Cell optional_fraction(const std::optional<ExactFraction>& f) {
    if (f) return *f;
    return std::monostate{};
}

std::size_t single_n(const ExperimentConfig& config) {
    if (config.n.size() != 1) throw std::invalid_argument(to_string(config.subcommand) + " needs exactly one --n");
    if (config.n.front() == 0 || config.n.front() > SignMatrix::max_dim) {
        throw std::invalid_argument("--n must be in [1, 64]");
    }
    return static_cast<std::size_t>(config.n.front());
}

Modulus resolve_modulus(const ExperimentConfig& config, std::uint64_t n) {
    return config.q ? Modulus(*config.q) : next_valid_modulus(n, config.C, config.log_base);
}

double resolve_tau(const ExperimentConfig& config, std::uint64_t n) {
    return config.tau ? *config.tau : default_tau(n, config.log_base);
}

void add_kernel_columns(ResultTable& table, std::vector<Cell>& row, const KernelStats& stats) {
    table.columns.insert(table.columns.end(),
                         {"E_K", "E_K_stderr", "p_prime_hat", "stderr", "markov_bound", "nullity_histogram"});
    row.insert(row.end(), {stats.E_K, stats.E_K_stderr, stats.p_prime_hat, stats.p_stderr, stats.markov_bound,
                           histogram_json(stats.nullity_histogram)});
}

Report exact_p_report(const ExperimentConfig& config, Report report) {
    const auto n = single_n(config);
    const auto q = resolve_modulus(config, n);
    report.config["q"] = q.value();
    const auto r = run_exact_p(n, q, config.threads);
    report.results.columns = {"n", "q", "matrices", "p_rational", "p_mod_q", "chain_exceptions"};
    report.results.rows.push_back({std::uint64_t{n}, std::uint64_t{q.value()}, r.p_rational.denominator,
                                   r.p_rational, r.p_mod_q, r.chain_exceptions});
    if (r.chain_exceptions > 0) {
        report.violations.push_back({{"kind", "chain"}, {"n", n}, {"q", q.value()}, {"count", r.chain_exceptions}});
    }
    return report;
}

Report mc_p_report(const ExperimentConfig& config, Report report) {
    const auto n = single_n(config);
    const auto q = resolve_modulus(config, n);
    report.config["q"] = q.value();
    const auto stats = run_mc_p(n, q, config.samples, config.seed, config.threads);
    report.results.columns = {"n", "q", "samples", "seed"};
    std::vector<Cell> row{std::uint64_t{n}, std::uint64_t{q.value()}, stats.samples, config.seed};
    add_kernel_columns(report.results, row, stats);
    report.results.rows.push_back(std::move(row));
    return report;
}

Report ek_report(const ExperimentConfig& config, Report report) {
    const auto n = single_n(config);
    const auto q = resolve_modulus(config, n);
    const bool exact = config.ek_mode == EkMode::exact || (config.ek_mode == EkMode::automatic && n <= 5);
    report.config["q"] = q.value();
    report.config["mode"] = exact ? "exact" : "mc";
    const auto stats = run_expected_kernel(n, q, exact ? KernelMode::exact : KernelMode::monte_carlo,
                                           config.samples, config.seed, config.threads);
    report.results.columns = {"n", "q", "mode", "samples", "E_K_exact", "E_K_kernel_route", "E_K_vector_route",
                              "double_counting_holds"};
    std::vector<Cell> row{std::uint64_t{n},
                          std::uint64_t{q.value()},
                          std::string(exact ? "exact" : "mc"),
                          stats.samples,
                          optional_fraction(stats.E_K_exact),
                          optional_fraction(stats.E_K_kernel_route),
                          optional_fraction(stats.E_K_vector_route),
                          stats.double_counting_holds()};
    add_kernel_columns(report.results, row, stats);
    report.results.rows.push_back(std::move(row));
    if (!stats.double_counting_holds()) {
        report.violations.push_back({{"kind", "double-counting"}, {"n", n}, {"q", q.value()}});
    }
    return report;
}

Report markov_report(const ExperimentConfig& config, Report report) {
    const auto n = single_n(config);
    std::optional<Modulus> explicit_q;
    if (config.q) explicit_q = Modulus(*config.q);
    const auto r = run_markov_report(n, config.C, explicit_q, config.samples, config.seed, config.threads,
                                     config.log_base);
    report.config["q"] = r.q.value();
    report.results.columns = {"n", "c", "q", "samples", "seed"};
    std::vector<Cell> row{std::uint64_t{n}, config.C, std::uint64_t{r.q.value()}, r.stats.samples, config.seed};
    add_kernel_columns(report.results, row, r.stats);
    report.results.columns.push_back("consistent");
    row.emplace_back(r.consistent);
    report.results.rows.push_back(std::move(row));
    if (!r.consistent) {
        report.violations.push_back({{"kind", "markov"},
                                     {"p_prime_hat", r.stats.p_prime_hat},
                                     {"markov_bound", r.stats.markov_bound},
                                     {"stderr", r.stats.p_stderr}});
    }
    return report;
}

Report verify_lemma_report(const ExperimentConfig& config, Report report) {
    const auto n = single_n(config);
    const auto q = resolve_modulus(config, n);
    const double tau = resolve_tau(config, n);
    report.config["q"] = q.value();
    report.config["tau"] = tau;
    report.config["exhaustive"] = config.exhaustive;
    const auto r = run_verify_lemma(n, q, config.trials, tau, config.seed, config.exhaustive, config.threads);
    report.results.columns = {"n",           "q",           "tau",          "cases",
                              "equality_ok", "bound_ok",    "max_abs_diff", "max_rel_deviation",
                              "max_error",   "max_imaginary_residual"};
    report.results.rows.push_back({std::uint64_t{n}, std::uint64_t{q.value()}, tau, r.cases, r.equality_ok, r.bound_ok,
                                   r.max_abs_diff, r.max_rel_deviation, r.max_error, r.max_imaginary_residual});
    for (const auto& c : r.violations) {
        report.violations.push_back({{"kind", !c.equality_ok ? "fourier-equality" : "deviation-bound"},
                                     {"q", q.value()},
                                     {"n", n},
                                     {"a", entries_json(c.a)},
                                     {"v", entries_json(c.v)},
                                     {"pr_exact", json::array({c.pr_exact.numerator, c.pr_exact.denominator})},
                                     {"pr_fourier", c.pr_fourier},
                                     {"error", c.error}});
    }
    return report;
}

Report verify_props_report(const ExperimentConfig& config, Report report) {
    if (config.n.size() != 1 || config.n.front() == 0) throw std::invalid_argument("verify-props needs one --n >= 1");
    const auto n = static_cast<std::size_t>(config.n.front());
    const auto q = resolve_modulus(config, n);
    const double tau = resolve_tau(config, n);
    report.config["q"] = q.value();
    report.config["tau"] = tau;
    report.config["nonzero"] = config.nonzero;
    const auto r = run_verify_props(n, q, config.trials, tau, config.seed, config.nonzero, config.threads);
    report.results.columns = {"n",           "q",           "tau",          "trials",          "hypotheses_met",
                              "small_support", "large_support", "claims_asserted", "claims_met",
                              "quadratic_shortfalls", "inner_applicable", "inner_holds", "triangle_free",
                              "mantel_holds", "violations"};
    report.results.rows.push_back({std::uint64_t{n}, std::uint64_t{q.value()}, tau, r.trials, r.hypotheses_met,
                                   r.small_support, r.large_support, r.claims_asserted, r.claims_met,
                                   r.quadratic_shortfalls, r.inner_applicable, r.inner_holds, r.triangle_free,
                                   r.mantel_holds, std::uint64_t{r.violations.size()}});
    for (const auto& v : r.violations) {
        report.violations.push_back({{"kind", v.kind},
                                     {"q", q.value()},
                                     {"n", n},
                                     {"a", entries_json(v.a)},
                                     {"l", entries_json(v.l)},
                                     {"N", v.N},
                                     {"bound", v.bound},
                                     {"regime", to_string(v.regime)}});
    }
    return report;
}

Report error_bound_report(const ExperimentConfig& config, Report report) {
    std::vector<std::uint64_t> grid = config.n;
    if (grid.empty()) grid = {10'000, 100'000, 1'000'000, 10'000'000};
    report.config["n"] = grid;
    std::optional<Modulus> explicit_q;
    if (config.q) explicit_q = Modulus(*config.q);
    const auto table = run_error_bound_table(grid, config.C, explicit_q, config.tau, config.log_base);
    report.results.columns = {"n",      "q",      "tau",       "s2_lower",       "log_S1",
                              "log_S2", "log_total", "log_structured", "decreasing"};
    for (const auto& row : table.rows) {
        report.results.rows.push_back({row.n, std::uint64_t{row.q}, row.tau, row.bound.s2_lower, row.bound.log_S1,
                                       row.bound.log_S2, row.bound.log_total, row.log_structured, row.decreasing});
    }
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (table.rows[i].decreasing) continue;
        report.violations.push_back({{"kind", "not-decreasing"},
                                     {"n", table.rows[i].n},
                                     {"log_total", table.rows[i].bound.log_total},
                                     {"previous_n", table.rows[i - 1].n},
                                     {"previous_log_total", table.rows[i - 1].bound.log_total}});
    }
    return report;
}

}  // namespace

std::string to_string(Subcommand sub) {
    switch (sub) {
        case Subcommand::exact_p: return "exact-p";
        case Subcommand::mc_p: return "mc-p";
        case Subcommand::ek: return "ek";
        case Subcommand::markov: return "markov";
        case Subcommand::verify_lemma: return "verify-lemma";
        case Subcommand::verify_props: return "verify-props";
        case Subcommand::error_bound: return "error-bound";
    }
    return "unknown";
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SYMSING_SEED"); env != nullptr && *env != '\0') {
        return std::stoull(env, nullptr, 0);
    }
    return kDefaultSeed;
}

Report run_experiment(const ExperimentConfig& config) {
    if (config.samples == 0) throw std::invalid_argument("--samples must be >= 1");
    Report report;
    report.config = {{"subcommand", to_string(config.subcommand)},
                     {"n", config.n.size() == 1 ? json(config.n.front()) : json(config.n)},
                     {"c", config.C},
                     {"samples", config.samples},
                     {"trials", config.trials},
                     {"seed", config.seed},
                     {"log_base", config.log_base == LogBase::natural ? "e" : "2"}};
    if (config.tau) report.config["tau"] = *config.tau;
    switch (config.subcommand) {
        case Subcommand::exact_p: return exact_p_report(config, std::move(report));
        case Subcommand::mc_p: return mc_p_report(config, std::move(report));
        case Subcommand::ek: return ek_report(config, std::move(report));
        case Subcommand::markov: return markov_report(config, std::move(report));
        case Subcommand::verify_lemma: return verify_lemma_report(config, std::move(report));
        case Subcommand::verify_props: return verify_props_report(config, std::move(report));
        case Subcommand::error_bound: return error_bound_report(config, std::move(report));
    }
    return report;
}

std::string render(const Report& report, OutputFormat format) {
    return format == OutputFormat::json ? render_json(report) : render_csv(report.results);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random symmetric sign matrix singularity laboratory", "symsing"};
    app.require_subcommand(1);

    ExperimentConfig config;
    std::string seed_text;
    std::string format_text = "csv";
    std::string mode_text = "auto";
    std::string log_base_text = "e";
    std::optional<std::string> out_path;

    const std::vector<std::pair<Subcommand, std::string>> commands = {
        {Subcommand::exact_p, "Exact p(n) and p'(n) by full enumeration"},
        {Subcommand::mc_p, "Monte-Carlo estimate of p'(n) = Pr[singular mod q]"},
        {Subcommand::ek, "Expected kernel size E[K] (exact or Monte-Carlo)"},
        {Subcommand::markov, "E[K] and the Markov bound Pr[K >= q] <= E[K]/q"},
        {Subcommand::verify_lemma, "Fourier identity and deviation bound for Pr[M.a = v]"},
        {Subcommand::verify_props, "Randomized pair-count and auxiliary-graph checks"},
        {Subcommand::error_bound, "Log-space table of the analytic Error bound"},
    };
    for (const auto& [sub, description] : commands) {
        auto* cmd = app.add_subcommand(to_string(sub), description);
        cmd->callback([&config, sub = sub] { config.subcommand = sub; });
        cmd->add_option("--n", config.n, "Dimension (error-bound: one or more grid values)")
            ->expected(1, 1 << 20);
        cmd->add_option("--q", config.q, "Explicit odd prime modulus (overrides --c)");
        cmd->add_option("--c", config.C, "Exponent C in q ~ n^{1/2} / log^C n")->check(CLI::NonNegativeNumber);
        cmd->add_option("--tau", config.tau, "Level-set threshold (default n / log^2 n)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--samples", config.samples, "Monte-Carlo sample count")->check(CLI::PositiveNumber);
        cmd->add_option("--trials", config.trials, "Randomized trial count");
        cmd->add_option("--seed", seed_text, "64-bit seed (decimal or 0x hex)");
        cmd->add_option("--threads", config.threads, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--format", format_text, "Output format")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_path, "Write output to this file instead of stdout");
        cmd->add_option("--log-base", log_base_text, "Logarithm base for thresholds")
            ->check(CLI::IsMember({"e", "2"}));
        if (sub == Subcommand::ek) {
            cmd->add_option("--mode", mode_text, "exact | mc | auto (exact for n <= 5)")
                ->check(CLI::IsMember({"auto", "exact", "mc"}));
        }
        if (sub == Subcommand::verify_props) {
            cmd->add_flag("--nonzero", config.nonzero, "Draw a and l with all entries nonzero");
        }
        if (sub == Subcommand::verify_lemma) {
            cmd->add_flag("--exhaustive", config.exhaustive, "Test every (a, v) with a outside the structured family");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        config.seed = seed_text.empty() ? default_seed() : std::stoull(seed_text, nullptr, 0);
        config.format = format_text == "json" ? OutputFormat::json : OutputFormat::csv;
        config.ek_mode = mode_text == "exact" ? EkMode::exact : mode_text == "mc" ? EkMode::mc : EkMode::automatic;
        config.log_base = log_base_text == "2" ? LogBase::binary : LogBase::natural;
        config.out = out_path;
        if (config.n.empty() && config.subcommand != Subcommand::error_bound) {
            throw std::invalid_argument("--n is required");
        }

        const Report report = run_experiment(config);
        const std::string text = render(report, config.format);
        if (config.out) {
            std::ofstream file(*config.out, std::ios::binary | std::ios::trunc);
            if (!file) throw std::invalid_argument("cannot open output file " + *config.out);
            file << text;
        } else {
            out << text;
        }
        if (!report.violations.empty()) {
            if (config.format == OutputFormat::csv) {
                for (const auto& v : report.violations) err << "violation: " << v.dump() << '\n';
            }
            return kExitViolation;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace symsing
