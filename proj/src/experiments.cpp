#include "pco/experiments.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "pco/concentration.hpp"
#include "pco/csv.hpp"
#include "pco/risk.hpp"
#include "pco/wavelet.hpp"

namespace pco {

namespace {

using csv::format_double;

csv::Meta base_meta(const ExperimentConfig& cfg) {
    csv::Meta meta{{"config", csv::hash_hex(cfg.fingerprint())},
                   {"seed", std::to_string(cfg.seed)},
                   {"command", cfg.command}};
    if (!cfg.io.tag.empty()) meta.emplace_back("tag", cfg.io.tag);
    return meta;
}

void stamp(csv::Table& t, const csv::Meta& meta) {
    for (const auto& [k, v] : meta) t.meta(k, v);
}

PenaltySpec penalty_spec_for(const ExperimentConfig& cfg, std::size_t N,
                             const MomentsTable& table) {
    PenaltySpec spec = PenaltySpec::standard(cfg.penalty.p, N, cfg.noise_kind(), table);
    if (cfg.penalty.q) spec.q = *cfg.penalty.q;
    if (cfg.penalty.a) spec.strategy.a = *cfg.penalty.a;
    if (cfg.penalty.K_I) spec.strategy.K_I = *cfg.penalty.K_I;
    if (cfg.penalty.K_S) spec.strategy.K_S = *cfg.penalty.K_S;
    spec.validate();
    return spec;
}

} // namespace

MomentsTable load_moments(const ExperimentConfig& cfg) {
    MomentsTable table = MomentsTable::builtin();
    if (!cfg.moments_file.empty()) table.merge(MomentsTable::load_csv(cfg.moments_file));
    return table;
}

int run_simulate(const ExperimentConfig& cfg, std::ostream& out) {
    const int J = cfg.top_level_or(7);
    const BesovBall ball = cfg.ball();
    const SignalSequence theta =
        generate_signal(cfg.signal_shape(), ball, J, cfg.signal_seed());
    const std::size_t N = coordinate_count(J);
    const ObservationSet obs =
        observe(theta, cfg.noise.epsilon, {cfg.noise_kind(), cfg.seed}, N);

    csv::Meta meta = base_meta(cfg);
    meta.emplace_back("signal", cfg.signal.kind);
    const std::string signal_path = cfg.io.output_prefix + "_signal.csv";
    csv::write_coeffs(signal_path, theta, meta);

    meta.emplace_back("epsilon", format_double(cfg.noise.epsilon));
    meta.emplace_back("noise", cfg.noise.kind);
    const std::string obs_path = cfg.io.output_prefix + "_observations.csv";
    csv::write_coeffs(obs_path, obs.y, meta);

    out << "simulate: kind=" << cfg.signal.kind << " N=" << N
        << " epsilon=" << format_double(cfg.noise.epsilon) << " noise=" << cfg.noise.kind
        << " -> " << signal_path << ' ' << obs_path << '\n';
    return 0;
}

int run_estimate(const ExperimentConfig& cfg, std::ostream& out) {
    csv::Meta file_meta;
    SignalSequence y = csv::read_coeffs(cfg.io.input, &file_meta);
    if (y.max_level() < 0)
        throw config_error("'" + cfg.io.input + "': observations need at least level j = 0");
    double epsilon = cfg.noise.epsilon;
    if (const std::string s = csv::meta_value(file_meta, "epsilon"); !s.empty())
        epsilon = std::stod(s);

    ObservationSet obs;
    obs.top_level = y.max_level();
    obs.count = y.size();
    obs.epsilon = epsilon;
    obs.y = std::move(y);

    const MomentsTable table = load_moments(cfg);
    const PenaltySpec spec = penalty_spec_for(cfg, obs.count, table);
    const WeightScheme w = cfg.weight_scheme();
    const std::vector<StrategyTag> tags = cfg.strategy_tags();

    out << "estimate: crit table\n";
    for (const auto& tag : tags) {
        const SelectionResult r = argmin_overall(obs, spec, w, {tag});
        out << "  strategy=" << strategy_tag_name(tag)
            << " crit=" << format_double(r.crit_value) << " size=" << r.model.total_size();
        if (r.L) out << " L=" << *r.L;
        out << '\n';
    }

    const SelectionResult sel = argmin_overall(obs, spec, w, tags);
    const SignalSequence estimate = pco_estimate(obs, sel);

    csv::Meta meta = base_meta(cfg);
    meta.emplace_back("epsilon", format_double(epsilon));
    meta.emplace_back("strategy", strategy_tag_name(sel.strategy));
    meta.emplace_back("input", cfg.io.input);

    const std::string model_path = cfg.io.output_prefix + "_model.csv";
    csv::Table model_table({"j", "k"});
    for (int j = -1; j <= sel.model.top_level(); ++j)
        for (int k : sel.model.level(j))
            model_table.row({std::to_string(j), std::to_string(k)});
    stamp(model_table, meta);
    model_table.save(model_path);

    const std::string theta_path = cfg.io.output_prefix + "_theta.csv";
    csv::write_coeffs(theta_path, estimate, meta);

    out << "estimate: strategy=" << strategy_tag_name(sel.strategy)
        << " size=" << sel.model.total_size() << " crit=" << format_double(sel.crit_value)
        << " -> " << model_path << ' ' << theta_path << '\n';
    return 0;
}

int run_rates(const ExperimentConfig& cfg, std::ostream& out) {
    const MomentsTable table = load_moments(cfg);
    const RateFit fit =
        rate_fit(cfg.ball(), cfg.penalty.p, cfg.sweep.epsilons, cfg.strategy_tags(),
                 cfg.signal_shape(), cfg.noise_kind(), cfg.sweep.replicates, cfg.seed, table,
                 cfg.weight_scheme().kind, cfg.exec_mode());

    const std::string path = cfg.io.output_prefix + "_rates.csv";
    csv::Table t({"epsilon", "N", "mc_risk", "stderr", "oracle_risk"});
    for (std::size_t i = 0; i < fit.epsilons.size(); ++i)
        t.row({format_double(fit.epsilons[i]), std::to_string(fit.Ns[i]),
               format_double(fit.risks[i]), format_double(fit.stderrs[i]),
               format_double(fit.oracle_risks[i])});
    csv::Meta meta = base_meta(cfg);
    meta.emplace_back("slope", format_double(fit.slope));
    meta.emplace_back("theory", format_double(fit.theory));
    meta.emplace_back("regime", regime_name(fit.regime));
    stamp(t, meta);
    t.save(path);

    out << "rates: {\"slope\": " << format_double(fit.slope)
        << ", \"theory\": " << format_double(fit.theory) << ", \"regime\": \""
        << regime_name(fit.regime) << "\", \"points\": " << fit.epsilons.size()
        << ", \"output\": \"" << path << "\"}\n";
    return 0;
}

int run_concentration(const ExperimentConfig& cfg, std::ostream& out) {
    const MomentsTable table = load_moments(cfg);
    const double p = cfg.penalty.p;
    const NoiseKind kind = cfg.noise_kind();
    const NoiseMoments m = default_moments(p, kind, table);

    const std::string path = cfg.io.output_prefix + "_concentration.csv";
    csv::Table t({"distribution", "p", "D", "x", "exceedance", "bound", "tolerance", "pass"});
    bool all_pass = true;
    for (std::size_t D : cfg.sweep.dims) {
        const TailCheckReport rep = tail_check({kind, cfg.seed}, p, D, m, cfg.sweep.x_grid,
                                               cfg.sweep.replicates, cfg.exec_mode());
        all_pass = all_pass && rep.pass;
        for (std::size_t i = 0; i < rep.x_grid.size(); ++i) {
            const double bound = rep.bound[i];
            const double tol =
                bound + 3.0 * std::sqrt(bound * (1.0 - bound) /
                                        static_cast<double>(rep.replicates));
            const bool point_pass = rep.empirical_exceedance[i] <= tol;
            t.row({cfg.noise.kind, format_double(p), std::to_string(D),
                   format_double(rep.x_grid[i]), format_double(rep.empirical_exceedance[i]),
                   format_double(bound), format_double(tol), point_pass ? "1" : "0"});
        }
    }
    csv::Meta meta = base_meta(cfg);
    meta.emplace_back("replicates", std::to_string(cfg.sweep.replicates));
    meta.emplace_back("pass", all_pass ? "1" : "0");
    stamp(t, meta);
    t.save(path);

    out << "concentration: distribution=" << cfg.noise.kind << " p=" << format_double(p)
        << " pass=" << (all_pass ? "true" : "false") << " -> " << path << '\n';
    return 0;
}

int run_regress(const ExperimentConfig& cfg, std::ostream& out) {
    RegressionSample sample;
    sample.sigma = cfg.noise.sigma;
    std::function<double(double)> truth; // empty when regressing a file
    if (!cfg.io.input.empty()) {
        sample.x = csv::read_samples(cfg.io.input);
    } else {
        truth = named_test_function(cfg.signal.kind);
        const std::size_t n = cfg.signal.n;
        sample.x.resize(n);
        auto gen = rng::stream(cfg.seed, rng::EXP_REGRESS, 0);
        const NoiseKind kind = cfg.noise_kind();
        for (std::size_t i = 1; i <= n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n);
            const double eta = sample.sigma > 0.0 ? draw_noise(kind, gen) : 0.0;
            sample.x[i - 1] = truth(t) + sample.sigma * eta;
        }
    }
    sample.validate();

    const WaveletBasis basis = basis_from_name(cfg.signal.basis);
    const int J = cfg.top_level_or(default_top_level(sample.n()));
    if (J < 0 || coordinate_count(J) > sample.n())
        throw config_error("signal.top_level " + std::to_string(J) + " does not fit " +
                           std::to_string(sample.n()) + " samples");
    const MomentsTable table = load_moments(cfg);
    const PenaltySpec spec = penalty_spec_for(cfg, coordinate_count(J), table);

    const auto [estimate, sel] = pco_regress(sample, basis, J, spec);
    const std::vector<double> f_hat = reconstruct(estimate, basis, sample.n());

    csv::Meta meta = base_meta(cfg);
    meta.emplace_back("sigma", format_double(sample.sigma));
    meta.emplace_back("basis", basis_name(basis));
    meta.emplace_back("J", std::to_string(J));
    meta.emplace_back("strategy", strategy_tag_name(sel.strategy));

    const std::string fhat_path = cfg.io.output_prefix + "_fhat.csv";
    csv::Table t({"i", "t", "f_hat"});
    const double n = static_cast<double>(sample.n());
    for (std::size_t i = 1; i <= sample.n(); ++i)
        t.row({std::to_string(i), format_double(static_cast<double>(i) / n),
               format_double(f_hat[i - 1])});
    stamp(t, meta);
    t.save(fhat_path);

    const std::string theta_path = cfg.io.output_prefix + "_theta.csv";
    csv::write_coeffs(theta_path, estimate, meta);

    out << "regress: basis=" << basis_name(basis) << " n=" << sample.n() << " J=" << J
        << " strategy=" << strategy_tag_name(sel.strategy)
        << " size=" << sel.model.total_size();
    if (truth) {
        const FunctionRisk risk = lp_function_risk(f_hat, truth, cfg.penalty.p);
        out << " lp_risk=" << format_double(risk.lp_pow)
            << " besov_bridge=" << format_double(risk.besov_bridge);
    }
    out << " -> " << fhat_path << ' ' << theta_path << '\n';
    return 0;
}

int run_calibrate(const ExperimentConfig& cfg, std::ostream& out) {
    const double p = cfg.penalty.p;
    const NoiseKind kind = cfg.noise_kind();
    const CalibrationResult res =
        calibrate_constants({kind, cfg.seed}, p, cfg.sweep.dims, cfg.sweep.x_grid,
                            cfg.sweep.replicates, cfg.sweep.confidence, 0.05, 20.0,
                            cfg.exec_mode());
    const NoiseMoments m = res.moments();

    const std::string moments_path = cfg.io.output_prefix + "_moments.csv";
    MomentsTable table;
    table.insert(kind, m, cfg.io.tag);
    table.save_csv(moments_path);
    {
        std::ofstream f(moments_path, std::ios::app | std::ios::binary);
        f << "# config=" << csv::hash_hex(cfg.fingerprint()) << " seed=" << cfg.seed << '\n';
    }

    const std::string cons_path = cfg.io.output_prefix + "_constraints.csv";
    csv::Table t({"D", "x", "quantile"});
    for (const auto& c : res.constraints)
        t.row({std::to_string(c.D), format_double(c.x), format_double(c.quantile)});
    csv::Meta meta = base_meta(cfg);
    meta.emplace_back("c1", format_double(res.c1));
    meta.emplace_back("c2", format_double(res.c2));
    meta.emplace_back("confidence", format_double(res.confidence));
    stamp(t, meta);
    t.save(cons_path);

    out << "calibrate: distribution=" << cfg.noise.kind << " p=" << format_double(p)
        << " sigma_p=" << format_double(m.sigma_p) << " c1=" << format_double(res.c1)
        << " c2=" << format_double(res.c2) << " kappa_p=" << format_double(m.kappa_p)
        << " -> " << moments_path << ' ' << cons_path << '\n';
    return 0;
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    if (cfg.command == "simulate") return run_simulate(cfg, out);
    if (cfg.command == "estimate") return run_estimate(cfg, out);
    if (cfg.command == "rates") return run_rates(cfg, out);
    if (cfg.command == "concentration") return run_concentration(cfg, out);
    if (cfg.command == "regress") return run_regress(cfg, out);
    if (cfg.command == "calibrate") return run_calibrate(cfg, out);
    throw config_error("unknown command '" + cfg.command + "'");
}

} // namespace pco
