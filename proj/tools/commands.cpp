#include "commands.hpp"

#include <cmath>
#include <random>

#include "seqstat/error.hpp"
#include "seqstat/moments.hpp"
#include "seqstat/parallel.hpp"
#include "seqstat/teststat.hpp"
#include "seqstat/vandermonde.hpp"

namespace seqstat::cli {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) {
        throw UsageError(msg);
    }
}

std::string table(const CsvSchema& schema, const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
        out += (i ? "," : "") + csv_field(schema.columns[i]);
    }
    out += "\r\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            out += (i ? "," : "") + csv_field(r[i]);
        }
        out += "\r\n";
    }
    return out;
}

void emit(RunResult& res, const std::string& dir, const std::string& name, const std::string& bytes,
          const CsvSchema* schema = nullptr) {
    write_file(join_path(dir, name), bytes);
    res.files.push_back(name);
    res.schemas.push_back(schema ? schema->tag() : "");
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

TestFunction parse_f(const std::string& desc) {
    return TestFunction::parse(desc);
}

}

SequenceSpec SequenceOptions::spec(double N) const {
    Precision p;
    if (precision == "double") {
        p = Precision::Double;
    } else if (precision == "compensated") {
        p = Precision::Compensated;
    } else {
        throw UsageError("--precision must be double or compensated");
    }
    SequenceSpec s;
    if (family == "logpow") {
        s = SequenceSpec::log_power(alpha, A, p);
    } else if (family == "monomial") {
        s = SequenceSpec::monomial(alpha, theta, p);
    } else if (family == "logbase") {
        s = SequenceSpec::log_base(base, p);
    } else if (family == "equi") {
        s = SequenceSpec::equispaced(period > 0.0 ? period : N);
    } else {
        throw UsageError("--family must be one of logpow, monomial, logbase, equi");
    }
    try {
        s.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return s;
}

json SequenceOptions::to_json() const {
    return {{"family", family}, {"alpha", alpha},   {"A", A},
            {"theta", theta},   {"base", base},     {"period", period},
            {"precision", precision}};
}

json to_json(const GenConfig& c) {
    return {{"sequence", c.seq.to_json()}, {"N", c.N}};
}

json to_json(const GapsConfig& c) {
    return {{"sequence", c.seq.to_json()}, {"N", c.N}, {"bins", c.bins}, {"smax", c.smax}, {"svg", c.svg}};
}

json to_json(const CorrConfig& c) {
    return {{"sequence", c.seq.to_json()}, {"N", c.N}, {"m", c.m}, {"f", c.f}, {"brute_force_check", c.brute_force}};
}

json to_json(const MomentConfig& c) {
    return {{"sequence", c.seq.to_json()}, {"N", c.N}, {"m", c.m}, {"f", c.f}};
}

json to_json(const ExpsumConfig& c) {
    return {{"sequence", c.seq.to_json()}, {"q", c.q},   {"u", c.u},           {"logN", c.logN},
            {"N", c.N},                    {"grid", c.grid}, {"p", c.p},       {"refine", c.refine},
            {"budget", c.budget},          {"f", c.f}};
}

json to_json(const VdmConfig& c) {
    return {{"A", c.A}, {"samples", c.samples}, {"seed", c.seed}, {"dnorm_samples", c.dnorm_samples}};
}

json to_json(const PlotConfig& c) {
    return {{"input", c.input}, {"output", c.output}};
}

RunResult cmd_gen(const GenConfig& c, const std::string& dir) {
    require(c.N >= 1 && c.N <= kDoubleModeCap, "gen: N must be in [1, 1e7]");
    SequenceSpec spec = c.seq.spec(static_cast<double>(c.N));
    std::vector<std::vector<std::string>> rows(c.N);
    parallel_for(c.N, 4096, [&](std::size_t i) {
        OmegaValue v = eval_omega_ext(spec, static_cast<double>(i + 1));
        rows[i] = {std::to_string(i + 1), csv_number(v.value), csv_number(v.frac)};
    });
    RunResult res;
    emit(res, dir, "gen.csv", table(gen_schema(), rows), &gen_schema());
    res.summary = {{"sequence", spec.describe()}, {"N", c.N}};
    return res;
}

RunResult cmd_gaps(const GapsConfig& c, const std::string& dir) {
    require(c.N >= 2, "gaps: N must be at least 2");
    require(c.bins >= 1 && c.bins <= 100000, "gaps: bins must be in [1, 1e5]");
    require(c.smax > 0.0, "gaps: smax must be positive");
    SequenceSpec spec = c.seq.spec(static_cast<double>(c.N));
    OrderedSample sample = ordered_points(spec, c.N);
    GapHistogram h = gap_histogram(sample, c.bins, c.smax);
    std::vector<std::vector<std::string>> rows;
    double mass = 0.0;
    for (int i = 0; i < c.bins; ++i) {
        double l = h.edges[i], r = h.edges[i + 1];
        rows.push_back({csv_number(l), csv_number(r), std::to_string(h.counts[i]), csv_number(h.density[i]),
                        csv_number(std::exp(-0.5 * (l + r)))});
        mass += h.density[i] * (r - l);
    }
    RunResult res;
    emit(res, dir, "gaps.csv", table(gaps_schema(), rows), &gaps_schema());
    json flags = json::array();
    if (c.seq.family == "logpow" && c.seq.A <= 1.0) {
        flags.push_back("non-uniform baseline");
    }
    json summary = {{"sequence", spec.describe()},
                    {"N", c.N},
                    {"bins", c.bins},
                    {"smax", c.smax},
                    {"histogram_mass", mass},
                    {"overflow", h.overflow},
                    {"flags", flags}};
    if (c.N >= 100) {
        summary["ks_exponential"] = ks_exponential(sample);
    } else {
        summary["ks_exponential"] = nullptr;
    }
    emit(res, dir, "gaps.json", dump(summary));
    if (c.svg) {
        PlotConfig pc;
        pc.input = join_path(dir, "gaps.csv");
        pc.output = "gaps";
        RunResult p = cmd_plot(pc, dir);
        res.files.insert(res.files.end(), p.files.begin(), p.files.end());
        res.schemas.insert(res.schemas.end(), p.schemas.begin(), p.schemas.end());
    }
    res.summary = summary;
    return res;
}

RunResult cmd_corr(const CorrConfig& c, const std::string& dir) {
    require(c.m >= 2 && c.m <= 5, "corr: m must be in [2, 5]");
    require(c.N >= 2, "corr: N must be at least 2");
    TestFunction f = parse_f(c.f);
    SequenceSpec spec = c.seq.spec(static_cast<double>(c.N));
    OrderedSample sample = ordered_points(spec, c.N);
    CorrelationEstimate est;
    try {
        est = correlate_m(sample, f, c.m);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    json summary = {{"sequence", spec.describe()},
                    {"N", c.N},
                    {"m", c.m},
                    {"test_function", f.describe()},
                    {"value", est.value},
                    {"reference", est.reference},
                    {"relative_deviation", est.relative_deviation()}};
    if (c.brute_force) {
        require(c.N <= 2000, "corr: --brute-force-check needs N <= 2000");
        std::vector<TestFunction> fs(static_cast<std::size_t>(c.m - 1), f);
        double bf = correlate_brute_force(sample, fs);
        summary["brute_force"] = bf;
        summary["brute_force_equal"] = bf == est.value;
    }
    RunResult res;
    emit(res, dir, "corr.json", dump(summary));
    res.summary = summary;
    return res;
}

RunResult cmd_moment(const MomentConfig& c, const std::string& dir) {
    require(c.m >= 1 && c.m <= 4, "moment: m must be in [1, 4]");
    require(c.N >= 1 && c.N <= 10000, "moment: N must be in [1, 1e4]");
    TestFunction f = parse_f(c.f);
    SequenceSpec spec = c.seq.spec(static_cast<double>(c.N));
    json summary = {{"sequence", spec.describe()}, {"N", c.N}, {"m", c.m}, {"test_function", f.describe()}};
    if (c.m >= 2) {
        MomentReport r = moment_report(spec, c.N, f, c.m);
        summary["moment"] = r.moment_value;
        summary["completed_sum"] = r.completed_sum_value;
        summary["identity_residual"] = r.identity_residual();
        summary["target_all_partitions"] = r.poisson_target;
        summary["target_non_isolating"] = r.nonisolating_target;
        summary["convergence_gap"] = r.moment_value - r.poisson_target;
    } else {
        double mv = moment_m(spec, c.N, f, 1);
        summary["moment"] = mv;
        summary["target_all_partitions"] = expectation_power(f, 1);
    }
    RunResult res;
    emit(res, dir, "moment.json", dump(summary));
    res.summary = summary;
    return res;
}

RunResult cmd_expsum(const ExpsumConfig& c, const std::string& dir) {
    require(c.grid >= 1 && c.grid <= (1 << 16), "expsum: grid must be in [1, 65536]");
    require(c.p >= 1.0, "expsum: p must be >= 1");
    const double N = c.N > 0.0 ? c.N : std::exp(c.logN);
    require(N >= std::exp(2.0), "expsum: need N >= e^2");
    SequenceSpec spec = c.seq.spec(N);
    require(spec.family == Family::LogPower && spec.A > 1.0, "expsum: needs --family logpow with A > 1");
    PhaseModel model(spec);
    DyadicWindows w = DyadicWindows::for_N(N);
    require(c.q >= 0 && c.q < w.num_n_windows(), "expsum: q must be in [0, " + std::to_string(w.num_n_windows()) + ")");
    require(std::abs(c.u) <= w.U(), "expsum: |u| must be at most " + std::to_string(w.U()));
    TestFunction f = parse_f(c.f);
    ExpSumEngine eng(model, w, f, N);
    if (eng.exact_cost(c.q, c.u) > c.budget) {
        throw BudgetError("expsum: exact sum needs " + csv_number(eng.exact_cost(c.q, c.u)) +
                          " (n,k) pairs, above --budget " + csv_number(c.budget) + "; lower q or u");
    }
    auto s = uniform_grid(c.grid);
    std::vector<cplx> ex, b, bb;
    NormReport rep = compare_variants(eng, c.q, c.u, s, c.p, &ex, &b, &bb);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < s.size(); ++i) {
        rows.push_back({csv_number(s[i]), csv_number(ex[i].real()), csv_number(ex[i].imag()), csv_number(b[i].real()),
                        csv_number(b[i].imag()), csv_number(bb[i].real()), csv_number(bb[i].imag())});
    }
    RunResult res;
    emit(res, dir, "expsum.csv", table(expsum_schema(), rows), &expsum_schema());
    auto norms = [](const NormReport& r) {
        return json{{"grid", r.G},
                    {"p", r.p},
                    {"norm_exact", r.norm_exact},
                    {"norm_b", r.norm_b},
                    {"norm_bb", r.norm_bb},
                    {"exact_minus_b", r.exact_minus_b},
                    {"b_minus_bb", r.b_minus_bb},
                    {"exact_minus_bb", r.exact_minus_bb},
                    {"ratio_exact_b", r.ratio_exact_b()},
                    {"ratio_b_bb", r.ratio_b_bb()}};
    };
    ConditionReport cr = condition_report(model, c.q, c.u, N);
    json cond = {{"Q", cr.Q},
                 {"delta", cr.delta},
                 {"non_degenerate", cr.non_degenerate},
                 {"has_stationary_points", cr.has_stationary_points},
                 {"first",
                  {{"Lambda_psi", cr.b1_Lambda_psi},
                   {"Omega_psi", cr.b1_Omega_psi},
                   {"Omega_w", cr.b1_Omega_w},
                   {"Lambda_w", cr.b1_Lambda_w},
                   {"Z", cr.b1_Z},
                   {"lambda_constraint", cr.b1_lambda_ok},
                   {"omega_constraint", cr.b1_omega_ok}}},
                 {"second",
                  {{"Lambda_psi", cr.b2_Lambda_psi},
                   {"Omega_psi", cr.b2_Omega_psi},
                   {"Omega_w", cr.b2_Omega_w},
                   {"Lambda_w", cr.b2_Lambda_w},
                   {"Z", cr.b2_Z},
                   {"lambda_constraint", cr.b2_lambda_ok},
                   {"omega_constraint", cr.b2_omega_ok}}}};
    json summary = {{"sequence", spec.describe()}, {"N", N},         {"q", c.q},         {"u", c.u},
                    {"test_function", f.describe()}, {"norms", norms(rep)}, {"conditions", cond}};
    if (c.refine) {
        NormReport fine = compare_variants(eng, c.q, c.u, uniform_grid(2 * c.grid), c.p);
        auto drift = [](double a, double b) { return b != 0.0 ? std::abs(a / b - 1.0) : std::abs(a - b); };
        summary["refined"] = norms(fine);
        summary["refinement_drift"] = {{"norm_exact", drift(rep.norm_exact, fine.norm_exact)},
                                       {"norm_b", drift(rep.norm_b, fine.norm_b)},
                                       {"norm_bb", drift(rep.norm_bb, fine.norm_bb)}};
    }
    emit(res, dir, "expsum.json", dump(summary));
    res.summary = summary;
    return res;
}

RunResult cmd_vdm(const VdmConfig& c, const std::string& dir) {
    require(c.samples >= 1, "vdm: samples must be positive");
    require(c.A > 1.0, "vdm: A must exceed 1");
    require(c.dnorm_samples >= 0, "vdm: dnorm-samples must be non-negative");
    RunResult res;
    std::vector<std::vector<std::string>> kt_rows;
    json boxes = json::array();
    for (const auto& box : kt_default_boxes()) {
        KTStats st = kt_sample(box, c.samples, c.seed);
        kt_rows.push_back({box.name, std::to_string(c.seed), std::to_string(st.samples), std::to_string(st.positive),
                           csv_number(st.min_ratio), csv_number(st.max_ratio)});
        boxes.push_back({{"box", box.name}, {"c", st.min_ratio}, {"C", st.max_ratio}, {"positive", st.positive},
                         {"samples", st.samples}});
    }
    emit(res, dir, "vdm_kt.csv", table(kt_schema(), kt_rows), &kt_schema());
    std::vector<std::vector<std::string>> trend_rows;
    for (int m = 1; m <= 4; ++m) {
        for (long H : {1000L, 10000L, 100000L}) {
            PhaseDerivativeSystem sys;
            sys.A = c.A;
            sys.s = 0.5;
            for (int i = 0; i < m; ++i) {
                sys.h.push_back(H * (i + 1) + 3 * i);
                sys.r.push_back(i + 1);
            }
            DetMReport r = detM_leading(sys);
            trend_rows.push_back({std::to_string(m), std::to_string(H), csv_number(r.det), csv_number(r.leading),
                                  csv_number(r.ratio), csv_number(r.product_ratio)});
        }
    }
    emit(res, dir, "vdm_trend.csv", table(trend_schema(), trend_rows), &trend_schema());
    std::mt19937_64 rng(c.seed);
    int holds = 0;
    double min_margin = INFINITY;
    for (int k = 0; k < c.dnorm_samples; ++k) {
        int q = 5 + static_cast<int>(rng() % 8);
        int m = 1 + static_cast<int>(rng() % 4);
        double qA = std::pow(static_cast<double>(q), c.A);
        PhaseDerivativeSystem sys;
        sys.A = c.A;
        sys.s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        while (sys.m() < m) {
            long h = static_cast<long>(qA / 2) + static_cast<long>(rng() % static_cast<std::uint64_t>(1.5 * qA + 1));
            if (std::find(sys.h.begin(), sys.h.end(), h) == sys.h.end() && h > 0) {
                long r = static_cast<long>(rng() % 101) - 50;
                sys.h.push_back(h);
                sys.r.push_back(r == 0 ? 1 : r);
            }
        }
        DNormReport d = d_norm_lower_bound(sys);
        holds += d.holds ? 1 : 0;
        min_margin = std::min(min_margin, d.norm_D / d.lower_bound);
    }
    json summary = {{"A", c.A},
                    {"seed", c.seed},
                    {"n_min_ratio", kt_ratio({0.5, 1.5, 2.5, 4.0}, {0.0, 1.0, 2.0, 3.0})},
                    {"boxes", boxes},
                    {"dnorm", {{"samples", c.dnorm_samples}, {"holds", holds}, {"min_margin", min_margin}}}};
    emit(res, dir, "vdm.json", dump(summary));
    res.summary = summary;
    return res;
}

RunResult cmd_plot(const PlotConfig& c, const std::string& dir) {
    require(!c.input.empty(), "plot: --input is required");
    CsvTable t = read_table(c.input);
    std::string stem = c.output;
    if (stem.empty()) {
        std::string base = c.input.substr(c.input.find_last_of('/') + 1);
        stem = base.substr(0, base.rfind('.'));
    }
    std::vector<PlotSeries> series;
    std::string title, xl, yl;
    auto col = [&](std::size_t k) {
        std::vector<double> v;
        for (const auto& r : t.rows) {
            v.push_back(r[k]);
        }
        return v;
    };
    const std::string& id = t.schema->id;
    if (id == "gaps") {
        PlotSeries bars{"gaps", {}, col(3), true, "#1f77b4"};
        PlotSeries curve{"exp(-s)", {}, {}, false, "#d62728"};
        for (const auto& r : t.rows) {
            bars.x.push_back(0.5 * (r[0] + r[1]));
        }
        double lo = t.rows.front()[0], hi = t.rows.back()[1];
        for (int i = 0; i <= 200; ++i) {
            double s = lo + (hi - lo) * i / 200.0;
            curve.x.push_back(s);
            curve.y.push_back(std::exp(-s));
        }
        series = {bars, curve};
        title = "gap distribution";
        xl = "s";
        yl = "density";
    } else if (id == "expsum") {
        series = {{"exact", col(0), col(1), false, "#1f77b4"},
                  {"B", col(0), col(3), false, "#ff7f0e"},
                  {"BB", col(0), col(5), false, "#2ca02c"}};
        title = "smoothed exponential sum (real part)";
        xl = "s";
        yl = "Re";
    } else if (id == "detm") {
        std::vector<double> x, y;
        for (const auto& r : t.rows) {
            x.push_back(std::log10(r[1]));
            y.push_back(r[4]);
        }
        series = {{"det M / leading", x, y, false, "#1f77b4"}};
        title = "det M against its leading term";
        xl = "log10 h_min";
        yl = "ratio";
    } else if (id == "gen") {
        series = {{"frac", col(0), col(2), false, "#1f77b4"}};
        title = "fractional parts";
        xl = "n";
        yl = "frac";
    } else {
        throw UsageError("plot: schema " + t.schema->tag() + " has no plot style");
    }
    RunResult res;
    std::string svg_name = stem + ".svg";
    emit(res, dir, svg_name, render_svg(title, xl, yl, series));
    std::string csv_name = c.input.substr(c.input.find_last_of('/') + 1);
    emit(res, dir, stem + ".gp", gnuplot_script(*t.schema, csv_name, svg_name));
    res.summary = {{"input", c.input}, {"schema", t.schema->tag()}, {"svg", svg_name}};
    return res;
}

std::string write_manifest(const std::string& dir, const std::string& command, const json& config,
                           const RunResult& result, double wall_seconds) {
    json outputs = json::array();
    for (std::size_t i = 0; i < result.files.size(); ++i) {
        std::string bytes = read_file(join_path(dir, result.files[i]));
        json o = {{"file", result.files[i]}, {"bytes", bytes.size()}, {"fnv1a64", hex64(fnv1a64(bytes))}};
        if (!result.schemas[i].empty()) {
            o["schema"] = result.schemas[i];
        }
        outputs.push_back(o);
    }
    json m = {{"tool", "seqstat"},
              {"version", kToolVersion},
              {"command", command},
              {"config", config},
              {"threads", num_threads()},
              {"wall_seconds", wall_seconds},
              {"outputs", outputs}};
    std::string name = command + "_manifest.json";
    write_file(join_path(dir, name), m.dump(2) + "\n");
    return name;
}

}
