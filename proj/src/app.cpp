#include "hurstnn/app.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace hurstnn::app {

namespace {

using json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

// RFC 4180 field splitting for a single line.
std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    return fields;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
    return v;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    s = trim(s);
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::string error_code_of(const std::exception& e) {
    if (dynamic_cast<const IndexError*>(&e)) return "all_windows_failed";
    if (dynamic_cast<const InsufficientHistory*>(&e)) return "insufficient_history";
    if (dynamic_cast<const ParameterError*>(&e)) return "parameter_error";
    if (dynamic_cast<const InputError*>(&e)) return "input_error";
    return "error";
}

}  // namespace

// --- CSV ingestion -------------------------------------------------------

PriceSeries parse_price_csv(std::string_view text, std::string index_id) {
    const auto lines = split_lines(text);
    std::size_t header_line = 0;
    while (header_line < lines.size() && trim(lines[header_line]).empty()) ++header_line;
    if (header_line == lines.size()) throw InputError("'" + index_id + "': empty file", 1);

    const auto header = split_csv(lines[header_line]);
    if (header.size() != 2 || trim(header[0]) != "date" || trim(header[1]) != "close")
        throw InputError("'" + index_id + "': expected header 'date,close'", header_line + 1);

    std::vector<Date> dates;
    std::vector<double> prices;
    for (std::size_t i = header_line + 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (trim(lines[i]).empty()) continue;
        const auto fields = split_csv(lines[i]);
        if (fields.size() != 2)
            throw InputError("'" + index_id + "': expected 2 fields, got " + std::to_string(fields.size()), line_no);
        const auto date = parse_date(trim(fields[0]));
        if (!date) throw InputError("'" + index_id + "': unparseable date '" + fields[0] + "'", line_no);
        const auto close = parse_double(fields[1]);
        if (!close) throw InputError("'" + index_id + "': unparseable price '" + fields[1] + "'", line_no);
        if (*close <= 0.0) throw InputError("'" + index_id + "': non-positive price " + fields[1], line_no);
        if (!dates.empty()) {
            if (*date == dates.back())
                throw InputError("'" + index_id + "': duplicate date " + format_date(*date), line_no);
            if (*date < dates.back())
                throw InputError("'" + index_id + "': date " + format_date(*date) + " is earlier than " +
                                     format_date(dates.back()),
                                 line_no);
        }
        dates.push_back(*date);
        prices.push_back(*close);
    }
    if (prices.empty()) throw InputError("'" + index_id + "': no data rows", header_line + 1);
    if (prices.size() < 2) throw InputError("'" + index_id + "': need at least 2 data rows", lines.size());
    return PriceSeries(std::move(index_id), std::move(dates), std::move(prices));
}

PriceSeries ingest_csv(const std::filesystem::path& path, std::string index_id) {
    if (index_id.empty()) index_id = path.stem().string();
    return parse_price_csv(read_file(path), std::move(index_id));
}

std::string format_price_csv(const PriceSeries& prices) {
    std::string out = "date,close\n";
    for (std::size_t i = 0; i < prices.size(); ++i) {
        out += format_date(prices.dates()[i]);
        out += ',';
        out += number(prices.prices()[i]);
        out += '\n';
    }
    return out;
}

void write_price_csv(const std::filesystem::path& path, const PriceSeries& prices) {
    write_file(path, format_price_csv(prices));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InputError("failed writing '" + path.string() + "'");
}

// --- Run configuration ---------------------------------------------------

std::optional<EnsembleKind> parse_ensemble_kind(std::string_view text) {
    if (text == "random-walk") return EnsembleKind::random_walk;
    if (text == "fgn") return EnsembleKind::fgn;
    if (text == "surrogate") return EnsembleKind::surrogate;
    return std::nullopt;
}

std::string_view to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::random_walk: return "random-walk";
        case EnsembleKind::fgn: return "fgn";
        case EnsembleKind::surrogate: return "surrogate";
    }
    return "random-walk";
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    RunConfig config;
    std::set<std::string> seen;
    std::map<std::string, std::string> regions;
    EnsembleSpec ensemble;
    bool has_ensemble_key = false;
    std::optional<EnsembleKind> ensemble_kind;

    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string line_ref = "config line " + std::to_string(i + 1);
        std::string_view line = lines[i];
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_ref + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_ref + ": empty key");

        auto bad = [&](std::string_view expected) {
            return ConfigError(line_ref + ": invalid value '" + std::string(value) + "' for '" + key +
                               "' (expected " + std::string(expected) + ")");
        };
        auto as_size = [&]() {
            auto v = parse_int<std::size_t>(value);
            if (!v) throw bad("a non-negative integer");
            return *v;
        };
        auto as_int = [&]() {
            auto v = parse_int<int>(value);
            if (!v) throw bad("an integer");
            return *v;
        };
        auto as_double = [&]() {
            auto v = parse_double(value);
            if (!v) throw bad("a number");
            return *v;
        };
        auto as_date = [&]() {
            auto v = parse_date(value);
            if (!v) throw bad("a YYYY-MM-DD date");
            return *v;
        };

        if (key == "input") {
            if (value.empty()) throw bad("a file path");
            std::filesystem::path p{std::string(value)};
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            config.inputs.push_back({p, std::filesystem::path(std::string(value)).stem().string(), {}});
            continue;
        }
        if (key.rfind("region.", 0) == 0) {
            const std::string id = key.substr(7);
            if (id.empty()) throw ConfigError(line_ref + ": region key needs an index id");
            if (!regions.emplace(id, std::string(value)).second)
                throw ConfigError(line_ref + ": duplicate key '" + key + "'");
            continue;
        }
        if (!seen.insert(key).second) throw ConfigError(line_ref + ": duplicate key '" + key + "'");

        if (key == "estimation_months") config.estimation_months = as_int();
        else if (key == "prediction_months") config.prediction_months = as_int();
        else if (key == "roll_months") config.roll_months = as_int();
        else if (key == "month_rule") {
            auto rule = parse_month_rule(value);
            if (!rule) throw bad("calendar or synthetic-21-day");
            config.month_rule = *rule;
        } else if (key == "start_date") config.start_date = as_date();
        else if (key == "end_date") config.end_date = as_date();
        else if (key == "embedding_dim") config.embedding.embedding_dim = as_size();
        else if (key == "time_delay") config.embedding.time_delay = as_size();
        else if (key == "neighbor_count") {
            config.embedding.neighbor_count = value == "auto" ? 0 : as_size();
        } else if (key == "keep_fraction") config.embedding.keep_fraction = as_double();
        else if (key == "exclusion_window") {
            if (value == "auto") config.embedding.exclusion_window.reset();
            else config.embedding.exclusion_window = as_size();
        } else if (key == "dfa_min_scale") config.dfa.min_scale = as_size();
        else if (key == "dfa_max_scale") config.dfa.max_scale = value == "auto" ? 0 : as_size();
        else if (key == "dfa_scale_count") config.dfa.scale_count = as_size();
        else if (key == "seed") {
            auto v = parse_int<std::uint64_t>(value);
            if (!v) throw bad("an unsigned 64-bit integer");
            config.seed = *v;
        } else if (key == "output_dir") config.output_dir = std::string(value);
        else if (key == "workers") config.workers = as_size();
        else if (key.rfind("synthetic_", 0) == 0) {
            has_ensemble_key = true;
            if (key == "synthetic_kind") {
                ensemble_kind = parse_ensemble_kind(value);
                if (!ensemble_kind) throw bad("random-walk, fgn or surrogate");
            } else if (key == "synthetic_count") ensemble.count = as_size();
            else if (key == "synthetic_hurst_min") ensemble.hurst_min = as_double();
            else if (key == "synthetic_hurst_max") ensemble.hurst_max = as_double();
            else if (key == "synthetic_hurst") ensemble.hurst_min = ensemble.hurst_max = as_double();
            else if (key == "synthetic_mean") ensemble.mean = as_double();
            else if (key == "synthetic_std") ensemble.std = as_double();
            else if (key == "synthetic_months") ensemble.months = as_size();
            else if (key == "synthetic_region") ensemble.region = std::string(value);
            else throw ConfigError(line_ref + ": unknown key '" + key + "'");
        } else {
            throw ConfigError(line_ref + ": unknown key '" + key + "'");
        }
    }

    if (has_ensemble_key) {
        if (!ensemble_kind) throw ConfigError("synthetic_* keys given without synthetic_kind");
        ensemble.kind = *ensemble_kind;
        config.ensemble = ensemble;
    }
    for (auto& [id, region] : regions) {
        auto it = std::find_if(config.inputs.begin(), config.inputs.end(),
                               [&](const InputSpec& in) { return in.index_id == id; });
        if (it == config.inputs.end()) throw ConfigError("region given for unknown index '" + id + "'");
        it->region = region;
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text, path.parent_path());
}

void validate(const RunConfig& config) {
    if (config.estimation_months < 1 || config.prediction_months < 1 || config.roll_months < 1)
        throw ConfigError("estimation_months, prediction_months and roll_months must be positive");
    try {
        nn::validate(config.embedding);
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    if (config.dfa.min_scale < dfa::kMinScale) throw ConfigError("dfa_min_scale must be at least 4");
    if (config.dfa.max_scale != 0 && config.dfa.max_scale <= config.dfa.min_scale)
        throw ConfigError("dfa_max_scale must exceed dfa_min_scale");
    if (config.dfa.scale_count < 4) throw ConfigError("dfa_scale_count must be at least 4");
    if (config.workers < 1) throw ConfigError("workers must be at least 1");
    if (config.start_date && config.end_date && *config.end_date < *config.start_date)
        throw ConfigError("end_date precedes start_date");

    std::set<std::string> ids;
    for (const auto& in : config.inputs)
        if (!ids.insert(in.index_id).second) throw ConfigError("duplicate index id '" + in.index_id + "'");

    if (config.ensemble) {
        const auto& e = *config.ensemble;
        if (e.kind == EnsembleKind::surrogate) {
            if (config.inputs.empty()) throw ConfigError("synthetic_kind = surrogate needs input files");
        } else {
            if (!config.inputs.empty()) throw ConfigError("input files cannot be combined with a generated ensemble");
            if (e.count < 1) throw ConfigError("synthetic_count must be at least 1");
            if (e.months < 1) throw ConfigError("synthetic_months must be at least 1");
            if (!(e.std > 0.0)) throw ConfigError("synthetic_std must be positive");
            if (e.kind == EnsembleKind::fgn &&
                !(e.hurst_min > 0.0 && e.hurst_min <= e.hurst_max && e.hurst_max < 1.0))
                throw ConfigError("fgn ensembles need 0 < synthetic_hurst_min <= synthetic_hurst_max < 1");
        }
    } else if (config.inputs.empty()) {
        throw ConfigError("no input files and no synthetic ensemble configured");
    }
}

// --- Analysis ------------------------------------------------------------

int AnalysisArtifacts::exit_code() const {
    if (!report) return kExitPartial;
    for (const auto& idx : indexes)
        if (!idx.ok()) return kExitPartial;
    return kExitSuccess;
}

namespace {

std::vector<TaggedSeries> generate_ensemble(const EnsembleSpec& e, std::uint64_t seed) {
    std::vector<TaggedSeries> out;
    out.reserve(e.count);
    const char* prefix = e.kind == EnsembleKind::fgn ? "fgn-" : "rw-";
    for (std::size_t i = 0; i < e.count; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "%s%03zu", prefix, i);
        synth::GeneratorSpec spec;
        spec.kind = e.kind == EnsembleKind::fgn ? synth::Kind::fgn : synth::Kind::random_walk;
        spec.mean = e.mean;
        spec.std = e.std;
        spec.length = e.months * kSyntheticMonthLength;
        spec.seed = synth::derive_seed(seed, 2 * i + 1);
        spec.index_id = id;
        if (spec.kind == synth::Kind::fgn) {
            synth::Rng draw(synth::derive_seed(seed, 2 * i));
            spec.hurst = e.hurst_min + (e.hurst_max - e.hurst_min) * draw.uniform();
            out.push_back({synth::fractional_gaussian_noise(spec), e.region});
        } else {
            out.push_back({synth::gaussian_random_walk(spec), e.region});
        }
    }
    return out;
}

}  // namespace

std::vector<TaggedSeries> load_series(const RunConfig& config) {
    std::vector<TaggedSeries> out;
    if (config.ensemble && config.ensemble->kind != EnsembleKind::surrogate) {
        out = generate_ensemble(*config.ensemble, config.seed);
    } else {
        for (std::size_t i = 0; i < config.inputs.size(); ++i) {
            const auto& in = config.inputs[i];
            ReturnSeries r = log_returns(ingest_csv(in.path, in.index_id));
            if (config.ensemble) r = synth::random_walk_surrogate(r, synth::derive_seed(config.seed, i));
            out.push_back({std::move(r), in.region.empty() ? "other" : in.region});
        }
    }
    if (config.start_date || config.end_date)
        for (auto& s : out) s.returns = s.returns.between(config.start_date, config.end_date);
    return out;
}

AnalysisArtifacts run_analyze(const RunConfig& config) {
    validate(config);
    const auto series = load_series(config);

    AnalysisArtifacts artifacts;
    artifacts.indexes.resize(series.size());

    auto analyze_one = [&](std::size_t i) {
        const auto& s = series[i];
        IndexOutcome& out = artifacts.indexes[i];
        out.index_id = s.returns.index_id();
        out.region = s.region;
        try {
            const auto schedule = build_window_schedule(s.returns, config.estimation_months,
                                                        config.prediction_months, config.roll_months,
                                                        config.month_rule);
            IndexRun run = run_index(s.returns, schedule, config.embedding, config.dfa, s.region);
            out.summary = std::move(run.summary);
            out.windows = std::move(run.windows);
        } catch (const IndexError& e) {
            out.windows = e.windows();
            out.error_code = error_code_of(e);
            out.error_message = e.what();
        } catch (const Error& e) {
            out.error_code = error_code_of(e);
            out.error_message = e.what();
        }
    };

    const std::size_t workers = std::min(config.workers, std::max<std::size_t>(1, series.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < series.size(); ++i) analyze_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < series.size(); i = next++) analyze_one(i);
            });
    }

    std::vector<IndexSummary> summaries;
    for (const auto& idx : artifacts.indexes)
        if (idx.summary) summaries.push_back(*idx.summary);
    try {
        artifacts.report = cross_section(summaries);
    } catch (const Error& e) {
        artifacts.report_error = e.what();
    }
    return artifacts;
}

std::string format_windows_csv(const AnalysisArtifacts& artifacts) {
    std::string out =
        "index_id,window,estimation_begin,estimation_end,prediction_begin,prediction_end,hurst,r_squared,"
        "hit_rate,trading_days,scored_days,hits,neighbor_count,confirm_fallbacks,error\n";
    for (const auto& idx : artifacts.indexes) {
        for (const auto& w : idx.windows) {
            out += csv_field(idx.index_id) + ',' + std::to_string(w.window_index) + ',' +
                   std::to_string(w.window.estimation.begin) + ',' + std::to_string(w.window.estimation.end) +
                   ',' + std::to_string(w.window.prediction.begin) + ',' +
                   std::to_string(w.window.prediction.end) + ',' + number(w.hurst) + ',' +
                   (w.hurst ? number(w.r_squared) : std::string()) + ',' + number(w.hit) + ',' +
                   std::to_string(w.hits.trading_days) + ',' + std::to_string(w.hits.scored_days) + ',' +
                   std::to_string(w.hits.hits) + ',' + std::to_string(w.neighbor_count) + ',' +
                   std::to_string(w.confirm_fallbacks) + ',' + csv_field(w.error) + '\n';
        }
    }
    return out;
}

std::string format_summary_csv(const AnalysisArtifacts& artifacts) {
    std::string out = "index_id,H_mean,hit_mean,n_windows,region,status\n";
    for (const auto& idx : artifacts.indexes) {
        out += csv_field(idx.index_id) + ',';
        if (idx.summary) {
            out += number(idx.summary->mean_hurst) + ',' + number(idx.summary->mean_hit) + ',' +
                   std::to_string(idx.summary->window_count);
        } else {
            out += ",,0";
        }
        out += ',' + csv_field(idx.region) + ',' + csv_field(idx.error_code) + '\n';
    }
    return out;
}

std::string format_scatter_csv(const AnalysisArtifacts& artifacts) {
    std::string out = "index_id,H_mean,hit_mean,n_windows,region\n";
    for (const auto& idx : artifacts.indexes) {
        if (!idx.summary || !idx.summary->mean_hurst || !idx.summary->mean_hit) continue;
        out += csv_field(idx.index_id) + ',' + number(idx.summary->mean_hurst) + ',' +
               number(idx.summary->mean_hit) + ',' + std::to_string(idx.summary->window_count) + ',' +
               csv_field(idx.region) + '\n';
    }
    return out;
}

std::string format_report_json(const std::optional<CrossSectionReport>& report, std::string_view error) {
    json doc;
    if (!report) {
        doc["error"] = std::string(error.empty() ? "no report" : error);
        return doc.dump(2) + "\n";
    }
    doc["pearson"] = report->pearson ? json(*report->pearson) : json(nullptr);
    doc["n_indexes"] = report->n_indexes;
    doc["hurst_median"] = report->hurst_median;
    doc["hit_median"] = report->hit_median;
    json labels = json::array();
    for (const auto& q : report->quadrants) {
        labels.push_back({{"index_id", q.index_id},
                          {"H_mean", q.mean_hurst},
                          {"hit_mean", q.mean_hit},
                          {"label", std::string(to_string(q.label))}});
    }
    doc["quadrants"] = std::move(labels);
    return doc.dump(2) + "\n";
}

void write_artifacts(const AnalysisArtifacts& artifacts, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_file(dir / "windows.csv", format_windows_csv(artifacts));
    write_file(dir / "summary.csv", format_summary_csv(artifacts));
    write_file(dir / "scatter.csv", format_scatter_csv(artifacts));
    write_file(dir / "report.json", format_report_json(artifacts.report, artifacts.report_error));
}

// --- Synthetic export ----------------------------------------------------

std::vector<std::filesystem::path> run_synth(const RunConfig& config, const std::filesystem::path& dir) {
    if (!config.ensemble) throw ConfigError("synth needs synthetic_* keys in the config");
    validate(config);
    const auto series = load_series(config);
    std::vector<std::filesystem::path> written;
    written.reserve(series.size());
    std::filesystem::create_directories(dir);
    for (const auto& s : series) {
        if (s.returns.size() < 1) throw InputError("'" + s.returns.index_id() + "' is empty after date filtering");
        const auto start = std::chrono::sys_days{s.returns.dates().front()} - std::chrono::days{1};
        const PriceSeries prices = prices_from_returns(s.returns, 100.0, Date{start});
        const auto path = dir / (s.returns.index_id() + ".csv");
        write_price_csv(path, prices);
        written.push_back(path);
    }
    return written;
}

// --- Re-correlation and reporting ----------------------------------------

std::vector<IndexSummary> parse_summary_csv(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw InputError("summary: empty file", 1);
    const auto header = split_csv(lines[0]);
    const std::vector<std::string> expected{"index_id", "H_mean", "hit_mean", "n_windows", "region"};
    if (header.size() < expected.size() || !std::equal(expected.begin(), expected.end(), header.begin()))
        throw InputError("summary: expected header starting 'index_id,H_mean,hit_mean,n_windows,region'", 1);
    const bool has_status = header.size() > 5 && header[5] == "status";

    std::vector<IndexSummary> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split_csv(lines[i]);
        if (f.size() != header.size())
            throw InputError("summary: expected " + std::to_string(header.size()) + " fields", i + 1);
        IndexSummary s;
        s.index_id = f[0];
        s.region = f[4];
        const bool ok = !has_status || f[5] == "ok";
        if (ok && !trim(f[1]).empty()) {
            s.mean_hurst = parse_double(f[1]);
            if (!s.mean_hurst) throw InputError("summary: bad H_mean '" + f[1] + "'", i + 1);
        }
        if (ok && !trim(f[2]).empty()) {
            s.mean_hit = parse_double(f[2]);
            if (!s.mean_hit) throw InputError("summary: bad hit_mean '" + f[2] + "'", i + 1);
        }
        const auto n = parse_int<std::size_t>(f[3]);
        if (!n) throw InputError("summary: bad n_windows '" + f[3] + "'", i + 1);
        s.window_count = *n;
        out.push_back(std::move(s));
    }
    return out;
}

CrossSectionReport parse_report_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("report: ") + e.what());
    }
    if (doc.contains("error")) throw InputError("report records a failed run: " + doc["error"].get<std::string>());
    try {
        CrossSectionReport r;
        if (!doc.at("pearson").is_null()) r.pearson = doc.at("pearson").get<double>();
        r.n_indexes = doc.at("n_indexes").get<std::size_t>();
        r.hurst_median = doc.at("hurst_median").get<double>();
        r.hit_median = doc.at("hit_median").get<double>();
        for (const auto& q : doc.at("quadrants")) {
            QuadrantEntry e;
            e.index_id = q.at("index_id").get<std::string>();
            e.mean_hurst = q.at("H_mean").get<double>();
            e.mean_hit = q.at("hit_mean").get<double>();
            const auto label = parse_quadrant(q.at("label").get<std::string>());
            if (!label) throw InputError("report: unknown quadrant label");
            e.label = *label;
            r.quadrants.push_back(std::move(e));
        }
        return r;
    } catch (const json::exception& e) {
        throw InputError(std::string("report: ") + e.what());
    }
}

std::string pretty_report(const CrossSectionReport& report) {
    std::ostringstream os;
    char buf[160];
    os << "Cross-section of " << report.n_indexes << " indexes\n";
    if (report.pearson) {
        std::snprintf(buf, sizeof buf, "  Pearson rho(H, hit)  %+.4f\n", *report.pearson);
        os << buf;
    } else {
        os << "  Pearson rho(H, hit)  n/a (zero variance)\n";
    }
    std::snprintf(buf, sizeof buf, "  median H             %.4f\n  median hit rate      %.4f\n\n",
                  report.hurst_median, report.hit_median);
    os << buf;
    std::snprintf(buf, sizeof buf, "  %-20s %8s %8s  %s\n", "index", "H_mean", "hit_mean", "quadrant");
    os << buf;
    for (const auto& q : report.quadrants) {
        std::snprintf(buf, sizeof buf, "  %-20s %8.4f %8.4f  %s\n", q.index_id.c_str(), q.mean_hurst,
                      q.mean_hit, std::string(to_string(q.label)).c_str());
        os << buf;
    }
    return os.str();
}

}  // namespace hurstnn::app
