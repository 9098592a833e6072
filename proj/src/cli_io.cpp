#include "entroplin/cli_io.hpp"

#include "entroplin/errors.hpp"
#include "entroplin/harness.hpp"
#include "entroplin/model.hpp"
#include "entroplin/simulate.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace entroplin::io {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// CSV reading
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
    const std::string t = trimmed(text);
    if (t.empty()) return false;
    try {
        std::size_t pos = 0;
        out = std::stod(t, &pos);
        return pos == t.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

SeriesFile read_series_csv(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open series file '" + path + "'");

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trimmed(line).empty()) continue;
        rows.push_back(split_csv_row(line));
    }
    if (rows.empty()) throw io_error("series file '" + path + "' is empty");

    // Resolve the column: an integer selects by index, anything else needs a
    // matching header cell.
    std::size_t col = 0;
    bool has_header = false;
    double ignored;
    const bool numeric_column_ref = parse_double(column, ignored);
    if (numeric_column_ref) {
        const long idx = std::lround(std::stod(column));
        if (idx < 0 || static_cast<std::size_t>(idx) >= rows[0].size())
            throw io_error("column index " + column + " out of range for '" + path + "' (" +
                           std::to_string(rows[0].size()) + " columns)");
        col = static_cast<std::size_t>(idx);
        // Header auto-detection: a non-numeric first cell in the selected
        // column is a header.
        has_header = !parse_double(rows[0][col], ignored);
    } else {
        for (std::size_t c = 0; c < rows[0].size(); ++c)
            if (trimmed(rows[0][c]) == column) {
                col = c;
                has_header = true;
                break;
            }
        if (!has_header)
            throw io_error("column '" + column + "' not found in header of '" + path + "'");
    }

    SeriesFile series;
    series.source_path = path;
    series.column = column;
    for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
        if (col >= rows[r].size())
            throw io_error("row " + std::to_string(r + 1) + " of '" + path + "' has no column " +
                           std::to_string(col));
        double v;
        if (!parse_double(rows[r][col], v))
            throw io_error("cell '" + rows[r][col] + "' at row " + std::to_string(r + 1) +
                           ", column " + std::to_string(col) + " of '" + path +
                           "' is not a decimal number");
        if (!std::isfinite(v))
            throw io_error("non-finite value at row " + std::to_string(r + 1) + " of '" + path +
                           "'");
        series.values.push_back(v);
        if (col != 0 && !rows[r].empty()) series.labels.push_back(trimmed(rows[r][0]));
    }
    if (series.values.size() < 2)
        throw io_error("series '" + path + "' needs at least two finite values");
    return series;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

ordered_json Report::to_json() const {
    ordered_json j;
    j["schema_version"] = schema_version;
    j["command"] = command;
    j["inputs"] = inputs;
    j["results"] = results;
    j["timing"] = timing;
    return j;
}

Report Report::from_json(const ordered_json& j) {
    Report r;
    r.schema_version = j.at("schema_version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    r.results = j.at("results");
    r.timing = j.at("timing");
    return r;
}

namespace {

bool is_record_array(const ordered_json& node) {
    if (!node.is_array() || node.empty() || !node.front().is_object()) return false;
    for (const auto& row : node) {
        if (!row.is_object()) return false;
        for (const auto& [k, v] : row.items()) {
            (void)k;
            if (!v.is_number() && !v.is_string() && !v.is_boolean()) return false;
        }
    }
    return true;
}

std::string csv_scalar(const ordered_json& v) {
    if (v.is_number_float()) return format17(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") != std::string::npos) {
            std::string quoted = "\"";
            for (char c : s) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            quoted += '"';
            return quoted;
        }
        return s;
    }
    return v.dump();
}

void write_record_csv(const ordered_json& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write '" + path + "'");
    std::vector<std::string> cols;
    for (const auto& [k, v] : records.front().items()) {
        (void)v;
        cols.push_back(k);
    }
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
    out << "\n";
    for (const auto& row : records) {
        for (std::size_t c = 0; c < cols.size(); ++c)
            out << (c ? "," : "") << csv_scalar(row.at(cols[c]));
        out << "\n";
    }
}

void collect_csv_sections(const ordered_json& node, const std::string& prefix,
                          std::vector<std::pair<std::string, const ordered_json*>>& tables,
                          std::vector<std::pair<std::string, const ordered_json*>>& scalars) {
    for (const auto& [key, value] : node.items()) {
        const std::string name = prefix.empty() ? key : prefix + "_" + key;
        if (is_record_array(value)) {
            tables.emplace_back(name, &value);
        } else if (value.is_array() && (value.empty() || value.front().is_number())) {
            tables.emplace_back(name, &value);
        } else if (value.is_object()) {
            collect_csv_sections(value, name, tables, scalars);
        } else if (value.is_number() || value.is_string() || value.is_boolean()) {
            scalars.emplace_back(name, &value);
        }
    }
}

} // namespace

void write_report(const Report& report, ReportFormat format, const std::string& path) {
    if (format == ReportFormat::json) {
        std::ofstream out(path);
        if (!out) throw io_error("cannot write report to '" + path + "'");
        out << report.to_json().dump(2) << "\n";
        if (!out) throw io_error("failed while writing report to '" + path + "'");
        return;
    }

    std::string stem = path;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
        stem = stem.substr(0, stem.size() - 4);

    std::vector<std::pair<std::string, const ordered_json*>> tables, scalars;
    collect_csv_sections(report.results, "", tables, scalars);

    {
        std::ofstream out(stem + ".scalars.csv");
        if (!out) throw io_error("cannot write '" + stem + ".scalars.csv'");
        out << "key,value\n";
        out << "schema_version," << report.schema_version << "\n";
        for (const auto& [name, value] : scalars) out << name << "," << csv_scalar(*value) << "\n";
    }
    for (const auto& [name, value] : tables) {
        const std::string table_path = stem + "." + name + ".csv";
        if (is_record_array(*value)) {
            write_record_csv(*value, table_path);
        } else {
            std::ofstream out(table_path);
            if (!out) throw io_error("cannot write '" + table_path + "'");
            out << "value\n";
            for (const auto& v : *value) out << csv_scalar(v) << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommand plumbing
// ---------------------------------------------------------------------------

namespace {

struct ModelFlags {
    std::optional<double> d;
    std::vector<double> ar, ma, coeffs;
    std::string innov = "gaussian";
    double alpha = 1.0;
    double sigma = 1.0;
    double scale = 1.0;

    void add_to(CLI::App* cmd, const std::string& suffix = "") {
        cmd->add_option("--d" + suffix, d, "FARIMA memory parameter (d < 1/2)");
        cmd->add_option("--ar" + suffix, ar, "AR coefficients (comma separated)")
            ->delimiter(',');
        cmd->add_option("--ma" + suffix, ma, "MA coefficients (comma separated)")
            ->delimiter(',');
        cmd->add_option("--coeffs" + suffix, coeffs,
                        "explicit moving-average coefficients (comma separated)")
            ->delimiter(',');
        cmd->add_option("--innov" + suffix, innov, "innovation law: gaussian or sas")
            ->check(CLI::IsMember({"gaussian", "sas"}));
        cmd->add_option("--alpha" + suffix, alpha, "stable exponent in (0,2]");
        cmd->add_option("--sigma" + suffix, sigma, "gaussian standard deviation");
        cmd->add_option("--scale" + suffix, scale, "stable scale c in exp(-c|t|^a)");
    }

    bool has_coeff_spec() const { return d || !ar.empty() || !ma.empty() || !coeffs.empty(); }

    model::LinearProcessModel build() const {
        model::CoefficientSequence seq = [&] {
            if (d) {
                if (!ar.empty() || !ma.empty() || !coeffs.empty())
                    throw domain_error("give exactly one of --d, --ar/--ma, --coeffs");
                return model::CoefficientSequence::farima(*d);
            }
            if (!coeffs.empty()) {
                if (!ar.empty() || !ma.empty())
                    throw domain_error("give exactly one of --d, --ar/--ma, --coeffs");
                return model::CoefficientSequence::from_values(coeffs);
            }
            if (!ar.empty() || !ma.empty())
                return model::CoefficientSequence::causal_arma(ar, ma);
            throw domain_error("no model given: pass --d, --ar/--ma, or --coeffs");
        }();
        model::InnovationFamily fam =
            innov == "gaussian" ? model::InnovationFamily::gaussian(sigma)
                                : model::InnovationFamily::symmetric_alpha_stable(alpha, scale);
        return {std::move(seq), fam};
    }

    ordered_json echo() const {
        ordered_json j;
        if (d) j["d"] = *d;
        if (!ar.empty()) j["ar"] = ar;
        if (!ma.empty()) j["ma"] = ma;
        if (!coeffs.empty()) j["coeffs"] = coeffs;
        j["innov"] = innov;
        if (innov == "gaussian")
            j["sigma"] = sigma;
        else {
            j["alpha"] = alpha;
            j["scale"] = scale;
        }
        return j;
    }
};

struct EstimatorFlags {
    std::string kernel = "gaussian";
    std::string bandwidth = "paper";
    double gamma = 1.0;
    double cutoff = 8.0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--kernel", kernel, "kernel: gaussian or epanechnikov")
            ->check(CLI::IsMember({"gaussian", "epanechnikov"}));
        cmd->add_option("--bandwidth", bandwidth,
                        "bandwidth rule: auto-thm1, auto-thm2, paper, or a number");
        cmd->add_option("--gamma", gamma, "regularity exponent for the auto bandwidth rules");
        cmd->add_option("--cutoff", cutoff, "fast-path window half-width in bandwidths");
    }

    estimate::Kernel build_kernel() const {
        return kernel == "gaussian" ? estimate::Kernel::gaussian()
                                    : estimate::Kernel::epanechnikov();
    }
    estimate::BandwidthRule rule() const {
        return estimate::parse_bandwidth_rule(bandwidth, gamma);
    }
};

struct OutputFlags {
    std::string out;
    std::string format = "json";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--out", out, "report destination path");
        cmd->add_option("--format", format, "report format")
            ->check(CLI::IsMember({"json", "csv"}));
    }

    void emit(Report& report, const std::string& command,
              std::chrono::steady_clock::time_point t0) const {
        report.command = command;
        report.timing["seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!out.empty())
            write_report(report, format == "json" ? ReportFormat::json : ReportFormat::csv, out);
    }
};

std::string join_args(const std::vector<std::string>& args) {
    std::string s = "entroplin";
    for (const auto& a : args) {
        s += ' ';
        s += a;
    }
    return s;
}

ordered_json normality_to_json(const stats::NormalityReport& r) {
    ordered_json j;
    j["sample_mean"] = r.sample_mean;
    j["sample_sd"] = r.sample_sd;
    j["t_statistic"] = r.t_statistic;
    j["p_value"] = r.p_value;
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    j["level"] = r.level;
    j["jarque_bera_stat"] = r.jarque_bera_stat;
    j["jarque_bera_p"] = r.jarque_bera_p;
    ordered_json qq = ordered_json::array();
    for (const auto& [theo, sample] : r.qq_pairs)
        qq.push_back(ordered_json{{"theoretical", theo}, {"sample", sample}});
    j["qq"] = std::move(qq);
    ordered_json hist = ordered_json::array();
    for (std::size_t b = 0; b < r.histogram.counts.size(); ++b)
        hist.push_back(ordered_json{{"edge_lo", r.histogram.edges[b]},
                                    {"edge_hi", r.histogram.edges[b + 1]},
                                    {"count", r.histogram.counts[b]}});
    j["histogram"] = std::move(hist);
    ordered_json kde = ordered_json::array();
    for (std::size_t g = 0; g < r.histogram.density_x.size(); ++g)
        kde.push_back(ordered_json{{"x", r.histogram.density_x[g]},
                                   {"density", r.histogram.density_y[g]}});
    j["density_fit"] = std::move(kde);
    return j;
}

const char* memory_name(model::Memory m) {
    switch (m) {
    case model::Memory::short_range: return "Short";
    case model::Memory::long_range: return "Long";
    default: return "Undetermined";
    }
}

} // namespace

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();

    CLI::App app{"kernel estimation of quadratic functionals, Renyi entropy and L2 divergence "
                 "for linear processes"};
    app.require_subcommand(1);

    // --- truevalue ---------------------------------------------------------
    auto* cmd_true = app.add_subcommand(
        "truevalue", "closed-form/quadrature value of the quadratic functional and entropy");
    ModelFlags true_model;
    true_model.add_to(cmd_true);
    std::uint64_t true_trunc = 0;
    cmd_true->add_option("--trunc", true_trunc,
                         "truncate coefficient sums at this index instead of the tail-corrected "
                         "limit");
    OutputFlags true_out;
    true_out.add_to(cmd_true);

    // --- estimate ----------------------------------------------------------
    auto* cmd_est = app.add_subcommand("estimate",
                                       "kernel estimate of the quadratic functional and entropy "
                                       "from a series file or a simulated model");
    ModelFlags est_model;
    est_model.add_to(cmd_est);
    EstimatorFlags est_flags;
    est_flags.add_to(cmd_est);
    OutputFlags est_out;
    est_out.add_to(cmd_est);
    std::string est_in, est_column = "0";
    std::uint64_t est_seed = 0;
    std::size_t est_n = 1024, est_trunc = 0;
    double est_tail_fraction = 1e-4;
    std::string est_method = "fast";
    cmd_est->add_option("--in", est_in, "series CSV path");
    cmd_est->add_option("--column", est_column, "column name or index (default 0)");
    cmd_est->add_option("--n", est_n, "simulated path length");
    cmd_est->add_option("--seed", est_seed, "simulation seed");
    cmd_est->add_option("--trunc", est_trunc, "moving-average truncation (0 = auto)");
    cmd_est->add_option("--tail-fraction", est_tail_fraction, "truncation tail-scale rule");
    cmd_est->add_option("--method", est_method, "estimator path")
        ->check(CLI::IsMember({"naive", "fast", "spectral"}));

    // --- clt ---------------------------------------------------------------
    auto* cmd_clt = app.add_subcommand("clt", "replicated CLT experiment for the scaled error "
                                              "sqrt(n)(T_n - integral f^2)");
    ModelFlags clt_model;
    clt_model.add_to(cmd_clt);
    EstimatorFlags clt_flags;
    clt_flags.add_to(cmd_clt);
    OutputFlags clt_out;
    clt_out.add_to(cmd_clt);
    std::size_t clt_n = 1024, clt_m = 200, clt_trunc = 0, clt_bins = 30;
    std::uint64_t clt_seed = 0;
    double clt_tail_fraction = 1e-4, clt_level = 0.95;
    bool clt_uncentered = false;
    cmd_clt->add_option("--n", clt_n, "path length (default 1024; use 4096 for full scale)");
    cmd_clt->add_option("--m", clt_m, "replications (default 200; 1000 for full scale)");
    cmd_clt->add_option("--seed", clt_seed, "base seed; replication r uses base^r");
    cmd_clt->add_option("--trunc", clt_trunc, "moving-average truncation (0 = auto)");
    cmd_clt->add_option("--tail-fraction", clt_tail_fraction, "truncation tail-scale rule");
    cmd_clt->add_option("--bins", clt_bins, "histogram bins");
    cmd_clt->add_option("--level", clt_level, "confidence level");
    cmd_clt->add_flag("--uncentered", clt_uncentered,
                      "scale sqrt(n) T_n without subtracting the true value");

    // --- divergence --------------------------------------------------------
    auto* cmd_div = app.add_subcommand(
        "divergence", "L2^2 divergence estimate between two series or two models");
    ModelFlags div_model1, div_model2;
    div_model1.add_to(cmd_div);
    div_model2.add_to(cmd_div, "2");
    EstimatorFlags div_flags;
    div_flags.add_to(cmd_div);
    OutputFlags div_out;
    div_out.add_to(cmd_div);
    std::string div_in1, div_in2, div_col1 = "0", div_col2 = "0";
    std::size_t div_n = 1024, div_m = 200, div_trunc = 0;
    std::uint64_t div_seed = 0;
    double div_tail_fraction = 1e-4;
    cmd_div->add_option("--in1", div_in1, "first series CSV");
    cmd_div->add_option("--in2", div_in2, "second series CSV");
    cmd_div->add_option("--column1", div_col1, "column for --in1");
    cmd_div->add_option("--column2", div_col2, "column for --in2");
    cmd_div->add_option("--n", div_n, "path length for model inputs");
    cmd_div->add_option("--m", div_m, "replications for model inputs");
    cmd_div->add_option("--seed", div_seed, "base seed");
    cmd_div->add_option("--trunc", div_trunc, "moving-average truncation (0 = auto)");
    cmd_div->add_option("--tail-fraction", div_tail_fraction, "truncation tail-scale rule");

    // --- classify ----------------------------------------------------------
    auto* cmd_cls = app.add_subcommand("classify", "short/long memory classification");
    ModelFlags cls_model;
    cls_model.add_to(cmd_cls);
    OutputFlags cls_out;
    cls_out.add_to(cmd_cls);

    // --- analyze -----------------------------------------------------------
    auto* cmd_ana = app.add_subcommand(
        "analyze", "stationarity and autocorrelation diagnostics for a series file");
    OutputFlags ana_out;
    ana_out.add_to(cmd_ana);
    std::string ana_in, ana_column = "0";
    std::size_t ana_maxlag = 20, ana_bins = 20;
    long long ana_kpss_lags = -1;
    cmd_ana->add_option("--in", ana_in, "series CSV path")->required();
    cmd_ana->add_option("--column", ana_column, "column name or index");
    cmd_ana->add_option("--max-lag", ana_maxlag, "autocorrelation lags");
    cmd_ana->add_option("--kpss-lags", ana_kpss_lags, "KPSS lag window (-1 = auto rule)");
    cmd_ana->add_option("--bins", ana_bins, "histogram bins");

    // --- probe -------------------------------------------------------------
    auto* cmd_probe = app.add_subcommand(
        "probe", "linearization-residual decay (hajek) or bias-scaling slope (bias)");
    ModelFlags probe_model;
    probe_model.add_to(cmd_probe);
    EstimatorFlags probe_flags;
    probe_flags.add_to(cmd_probe);
    OutputFlags probe_out;
    probe_out.add_to(cmd_probe);
    std::string probe_kind;
    std::vector<std::size_t> probe_n_grid;
    std::vector<double> probe_h_grid;
    std::size_t probe_n = 2048, probe_m = 200, probe_trunc = 0;
    std::uint64_t probe_seed = 0;
    double probe_tail_fraction = 1e-4;
    cmd_probe->add_option("kind", probe_kind, "hajek or bias")
        ->required()
        ->check(CLI::IsMember({"hajek", "bias"}));
    cmd_probe->add_option("--n-grid", probe_n_grid, "path lengths for the hajek probe")
        ->delimiter(',');
    cmd_probe->add_option("--h-grid", probe_h_grid, "bandwidths for the bias probe")
        ->delimiter(',');
    cmd_probe->add_option("--n", probe_n, "path length for the bias probe");
    cmd_probe->add_option("--m", probe_m, "replications");
    cmd_probe->add_option("--seed", probe_seed, "base seed");
    cmd_probe->add_option("--trunc", probe_trunc, "moving-average truncation (0 = auto)");
    cmd_probe->add_option("--tail-fraction", probe_tail_fraction, "truncation tail-scale rule");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (cmd_true->parsed()) {
            const auto m = true_model.build();
            const model::SumMode mode =
                true_trunc > 0 ? model::SumMode(model::TruncatedAt{true_trunc})
                               : model::SumMode(model::TailCorrected{1e-10});
            const double q = model::true_quadratic_functional(m, mode);
            const double renyi = -std::log(q);
            out << "quadratic_functional = " << format17(q) << "\n";
            out << "renyi_entropy = " << format17(renyi) << "\n";
            Report rep;
            rep.inputs = true_model.echo();
            if (true_trunc > 0) rep.inputs["trunc"] = true_trunc;
            rep.results["quadratic_functional"] = q;
            rep.results["renyi_entropy"] = renyi;
            true_out.emit(rep, join_args(args), t0);
            return 0;
        }

        if (cmd_est->parsed()) {
            Report rep;
            std::vector<double> series;
            if (!est_in.empty()) {
                SeriesFile f = read_series_csv(est_in, est_column);
                series = std::move(f.values);
                rep.inputs["in"] = est_in;
                rep.inputs["column"] = est_column;
            } else {
                if (!est_model.has_coeff_spec())
                    throw domain_error("estimate needs either --in or a model (--d/--ar/--coeffs)");
                const auto m = est_model.build();
                const std::size_t trunc =
                    est_trunc != 0 ? est_trunc
                                   : simulate::default_truncation(m, est_tail_fraction);
                series = simulate::generate_path({m, est_n, trunc, est_seed, est_tail_fraction})
                             .values;
                rep.inputs = est_model.echo();
                rep.inputs["n"] = est_n;
                rep.inputs["seed"] = est_seed;
                rep.inputs["trunc"] = trunc;
            }
            const double h = estimate::bandwidth_for(est_flags.rule(), series.size());
            const estimate::EstimatorConfig config{est_flags.build_kernel(), h,
                                                   est_flags.cutoff};
            double t;
            if (est_method == "naive")
                t = estimate::quadratic_estimate(series, config);
            else if (est_method == "spectral")
                t = estimate::spectral_estimate(series, config, 1e-8);
            else
                t = estimate::quadratic_estimate_fast(series, config);
            const double renyi = -std::log(1.0 / static_cast<double>(series.size()) + t);
            out << "n = " << series.size() << "\n";
            out << "bandwidth = " << format17(h) << "\n";
            out << "quadratic_estimate = " << format17(t) << "\n";
            out << "renyi_estimate = " << format17(renyi) << "\n";
            rep.inputs["kernel"] = est_flags.kernel;
            rep.inputs["bandwidth_rule"] = est_flags.bandwidth;
            rep.inputs["method"] = est_method;
            rep.results["n"] = series.size();
            rep.results["bandwidth"] = h;
            rep.results["quadratic_estimate"] = t;
            rep.results["renyi_estimate"] = renyi;
            est_out.emit(rep, join_args(args), t0);
            return 0;
        }

        if (cmd_clt->parsed()) {
            harness::ExperimentSpec spec;
            spec.model = clt_model.build();
            spec.n = clt_n;
            spec.m = clt_m;
            spec.bandwidth = clt_flags.rule();
            spec.kernel = clt_flags.build_kernel();
            spec.base_seed = clt_seed;
            spec.truncation_m = clt_trunc;
            spec.tail_fraction = clt_tail_fraction;
            spec.center_at_truth = !clt_uncentered;
            spec.ci_level = clt_level;
            spec.histogram_bins = clt_bins;
            const harness::CltReport r = harness::run_clt_experiment(spec);
            out << "q_true = " << format17(r.q_true) << "\n";
            out << "bandwidth = " << format17(r.bandwidth) << "\n";
            out << "mean_estimate = " << format17(r.mean_estimate) << "\n";
            out << "t_test_p = " << format17(r.normality.p_value) << "\n";
            out << "ci = [" << format17(r.normality.ci_low) << ", "
                << format17(r.normality.ci_high) << "]\n";
            out << "jarque_bera_p = " << format17(r.normality.jarque_bera_p) << "\n";
            Report rep;
            rep.inputs = clt_model.echo();
            rep.inputs["n"] = clt_n;
            rep.inputs["m"] = clt_m;
            rep.inputs["seed"] = clt_seed;
            rep.inputs["kernel"] = clt_flags.kernel;
            rep.inputs["bandwidth_rule"] = clt_flags.bandwidth;
            rep.inputs["trunc"] = r.truncation_m;
            rep.inputs["centered"] = !clt_uncentered;
            rep.results["q_true"] = r.q_true;
            rep.results["bandwidth"] = r.bandwidth;
            rep.results["mean_estimate"] = r.mean_estimate;
            rep.results["normality"] = normality_to_json(r.normality);
            rep.results["scaled_errors"] = r.scaled_errors;
            clt_out.emit(rep, join_args(args), t0);
            return 0;
        }

        if (cmd_div->parsed()) {
            Report rep;
            harness::DivergenceStudy study;
            double h_used;
            if (!div_in1.empty() || !div_in2.empty()) {
                if (div_in1.empty() || div_in2.empty())
                    throw domain_error("divergence over files needs both --in1 and --in2");
                SeriesFile f1 = read_series_csv(div_in1, div_col1);
                SeriesFile f2 = read_series_csv(div_in2, div_col2);
                h_used = estimate::bandwidth_for(div_flags.rule(), f1.values.size());
                const estimate::EstimatorConfig config{div_flags.build_kernel(), h_used,
                                                       div_flags.cutoff};
                study = harness::run_divergence_study(f1.values, f2.values, config);
                rep.inputs["in1"] = div_in1;
                rep.inputs["in2"] = div_in2;
            } else {
                if (!div_model1.has_coeff_spec() || !div_model2.has_coeff_spec())
                    throw domain_error(
                        "divergence needs two series files or two models (--d and --d2 etc.)");
                harness::ExperimentSpec spec;
                spec.model = div_model1.build();
                spec.n = div_n;
                spec.m = div_m;
                spec.bandwidth = div_flags.rule();
                spec.kernel = div_flags.build_kernel();
                spec.base_seed = div_seed;
                spec.truncation_m = div_trunc;
                spec.tail_fraction = div_tail_fraction;
                h_used = estimate::bandwidth_for(spec.bandwidth, spec.n);
                study = harness::run_divergence_study(spec.model, div_model2.build(), spec);
                rep.inputs["model1"] = div_model1.echo();
                rep.inputs["model2"] = div_model2.echo();
                rep.inputs["n"] = div_n;
                rep.inputs["m"] = div_m;
                rep.inputs["seed"] = div_seed;
            }
            out << "divergence = " << format17(study.estimate) << "\n";
            if (study.replicated)
                out << "ci = [" << format17(study.ci_low) << ", " << format17(study.ci_high)
                    << "]\n";
            rep.inputs["bandwidth"] = h_used;
            rep.results["divergence"] = study.estimate;
            if (study.replicated) {
                rep.results["ci_low"] = study.ci_low;
                rep.results["ci_high"] = study.ci_high;
                rep.results["std_dev"] = study.std_dev;
                rep.results["replicates"] = study.replicate_values;
            }
            div_out.emit(rep, join_args(args), t0);
            return 0;
        }

        if (cmd_cls->parsed()) {
            const auto m = cls_model.build();
            const model::MemoryClass mc = model::memory_class(m);
            out << memory_name(mc.value) << "\n";
            out << "evidence: " << mc.evidence << "\n";
            Report rep;
            rep.inputs = cls_model.echo();
            rep.results["memory"] = memory_name(mc.value);
            rep.results["evidence"] = mc.evidence;
            cls_out.emit(rep, join_args(args), t0);
            return 0;
        }

        if (cmd_ana->parsed()) {
            SeriesFile f = read_series_csv(ana_in, ana_column);
            const std::size_t maxlag = std::min(ana_maxlag, f.values.size() - 1);
            const stats::KpssLags lags =
                ana_kpss_lags < 0
                    ? stats::KpssLags(stats::AutoLags{})
                    : stats::KpssLags(stats::FixedLags{static_cast<std::size_t>(ana_kpss_lags)});
            const stats::KpssResult kpss = stats::kpss_level(f.values, lags);
            const std::vector<double> rho = stats::acf(f.values, maxlag);
            const stats::NormalityReport density =
                stats::normality_report(f.values, 0.95, ana_bins);
            out << "n = " << f.values.size() << "\n";
            out << "kpss_stat = " << format17(kpss.stat) << " (lags " << kpss.lags_used << ")\n";
            out << "kpss_5pct = " << (kpss.stationary_at_5pct ? "stationary" : "reject") << "\n";

            Report rep;
            rep.inputs["in"] = ana_in;
            rep.inputs["column"] = ana_column;
            rep.results["n"] = f.values.size();
            rep.results["kpss_stat"] = kpss.stat;
            rep.results["kpss_lags"] = kpss.lags_used;
            rep.results["kpss_stationary_at_5pct"] = kpss.stationary_at_5pct;
            ordered_json acf_rows = ordered_json::array();
            for (std::size_t k = 0; k < rho.size(); ++k)
                acf_rows.push_back(ordered_json{{"lag", k}, {"acf", rho[k]}});
            rep.results["acf"] = std::move(acf_rows);
            ordered_json dens = normality_to_json(density);
            rep.results["histogram"] = dens["histogram"];
            rep.results["density_fit"] = dens["density_fit"];
            ana_out.emit(rep, join_args(args), t0);
            return 0;
        }

        if (cmd_probe->parsed()) {
            harness::ExperimentSpec spec;
            spec.model = probe_model.build();
            spec.m = probe_m;
            spec.n = probe_n;
            spec.bandwidth = probe_flags.rule();
            spec.kernel = probe_flags.build_kernel();
            spec.base_seed = probe_seed;
            spec.truncation_m = probe_trunc;
            spec.tail_fraction = probe_tail_fraction;
            Report rep;
            rep.inputs = probe_model.echo();
            rep.inputs["kind"] = probe_kind;
            rep.inputs["m"] = probe_m;
            rep.inputs["seed"] = probe_seed;
            if (probe_kind == "hajek") {
                if (probe_n_grid.empty())
                    throw domain_error("hajek probe needs --n-grid, e.g. --n-grid 256,1024");
                const auto rows = harness::hajek_residual_probe(spec, probe_n_grid);
                ordered_json table = ordered_json::array();
                for (const auto& r : rows) {
                    out << "n = " << r.n << "  mse = " << format17(r.mse);
                    if (r.ratio_to_previous > 0.0)
                        out << "  ratio = " << format17(r.ratio_to_previous);
                    out << "\n";
                    table.push_back(ordered_json{{"n", r.n},
                                                 {"bandwidth", r.bandwidth},
                                                 {"mse", r.mse},
                                                 {"ratio_to_previous", r.ratio_to_previous}});
                }
                rep.results["hajek"] = std::move(table);
            } else {
                if (probe_h_grid.empty())
                    throw domain_error("bias probe needs --h-grid, e.g. --h-grid 0.2,0.3,0.45");
                const auto result = harness::bias_scaling_probe(spec, probe_h_grid);
                ordered_json table = ordered_json::array();
                for (const auto& p : result.points) {
                    out << "h = " << format17(p.h) << "  bias = " << format17(p.bias)
                        << "  se = " << format17(p.se) << (p.valid ? "" : "  (noise-dominated)")
                        << "\n";
                    table.push_back(ordered_json{
                        {"h", p.h}, {"bias", p.bias}, {"se", p.se}, {"valid", p.valid}});
                }
                out << "slope = " << format17(result.slope) << "\n";
                rep.results["bias_points"] = std::move(table);
                rep.results["slope"] = result.slope;
            }
            probe_out.emit(rep, join_args(args), t0);
            return 0;
        }

        err << "no subcommand given\n" << app.help();
        return 1;
    } catch (const io_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, out, err);
}

} // namespace entroplin::io
