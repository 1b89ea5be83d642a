#include "d2d/scenario.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace d2d {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys)
{
    if (!obj.is_object())
        throw std::invalid_argument("config: '" + where + "' must be an object");
    for (const auto& [k, v] : obj.items()) {
        bool known = false;
        for (const char* key : keys)
            known = known || k == key;
        if (!known)
            throw std::invalid_argument("config: unknown key '" + where + "." + k + "'");
    }
}

template <class T>
void read(const json& obj, const char* key, T& dst)
{
    if (obj.contains(key) && !obj.at(key).is_null())
        dst = obj.at(key).get<T>();
}

template <class T>
void read(const json& obj, const char* key, std::optional<T>& dst)
{
    if (obj.contains(key) && !obj.at(key).is_null())
        dst = obj.at(key).get<T>();
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double to_db(double v)
{
    return 10.0 * std::log10(std::max(v, 1e-30));
}

void write_text(const std::string& path, const std::string& text)
{
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        if (ec)
            throw std::runtime_error("cannot create directory " + p.parent_path().string() + ": " +
                                     ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out)
        throw std::runtime_error("failed writing " + path);
}

int max_span(const BandMap& b)
{
    int span = 0;
    for (int m : b.free)
        for (int l : b.incumbent)
            span = std::max(span, std::abs(m - l));
    return span;
}

} // namespace

void validate(const ScenarioConfig& c)
{
    validate(c.incumbent);
    if (c.incumbent_subcarriers < 2 || c.incumbent_subcarriers > c.incumbent.M)
        throw std::invalid_argument("incumbent band must have between 2 and M subcarriers");
    if (c.free_indices.empty() && c.free_subcarriers < 1)
        throw std::invalid_argument("free band needs M_f >= 1");
    if (!(c.total_power > 0))
        throw std::invalid_argument("total power P_t must be positive");
    if (!(c.interference_threshold > 0))
        throw std::invalid_argument("interference threshold I_th must be positive");
    if (!(c.noise > 0))
        throw std::invalid_argument("noise sigma^2 must be positive");
    for (double t : c.fig6_thresholds)
        if (!(t > 0))
            throw std::invalid_argument("fig6 thresholds must be positive");
    if (!(c.fig7_db_step > 0) || c.fig7_db_max < c.fig7_db_min)
        throw std::invalid_argument("fig7 sweep needs min <= max and a positive step");
    if (c.free_symbols < 1 || c.fig7_symbols < 1 || c.fig6_min_symbols < 1 ||
        c.fig6_max_symbols < c.fig6_min_symbols)
        throw std::invalid_argument("symbol windows need N_f >= 1");
    if (c.dt_step < 1 || !(c.df_step > 0) || c.df_max < 0)
        throw std::invalid_argument("offset grid steps must be positive");
    if (c.figure_waveforms.empty())
        throw std::invalid_argument("no waveforms selected");

    const auto b = band_map(c);
    for (int k : b.free)
        if (k < 0 || k >= c.incumbent.M)
            throw std::invalid_argument("free subcarrier " + std::to_string(k) +
                                        " outside the receiver FFT");
    for (int k : b.incumbent)
        if (k < 0 || k >= c.incumbent.M)
            throw std::invalid_argument("incumbent subcarrier " + std::to_string(k) +
                                        " outside the receiver FFT");
    validate(b);
    const auto [ilo, ihi] = std::minmax_element(b.incumbent.begin(), b.incumbent.end());
    for (int k : b.free)
        if (k <= *ilo || k >= *ihi)
            throw std::invalid_argument("free subcarrier " + std::to_string(k) +
                                        " is not strictly inside the incumbent span [" +
                                        std::to_string(*ilo) + ", " + std::to_string(*ihi) + "]");
    if (c.omega_override && c.omega_override->size() != b.free.size())
        throw std::invalid_argument("omega override needs one value per free subcarrier");
    for (auto kind : c.figure_waveforms)
        validate(waveform_config(c, kind));
    validate(waveform_config(c, c.waveform));
}

ScenarioConfig parse_config(const std::string& text)
{
    ScenarioConfig c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        check_keys(j, "config", {"name", "incumbent", "band", "waveform", "figure_waveforms",
                                 "waveforms", "budgets", "window", "offsets", "figures", "seed",
                                 "threads", "paths", "omega_override"});
        if (j.contains("incumbent")) {
            const auto& o = j["incumbent"];
            check_keys(o, "incumbent", {"M", "N_CP", "N", "subcarrier_spacing", "subcarriers"});
            read(o, "M", c.incumbent.M);
            read(o, "N_CP", c.incumbent.cp_samples);
            read(o, "N", c.incumbent.observed_symbols);
            read(o, "subcarrier_spacing", c.incumbent.subcarrier_spacing);
            c.incumbent_subcarriers = c.incumbent.M;
            read(o, "subcarriers", c.incumbent_subcarriers);
        }
        if (j.contains("band")) {
            const auto& o = j["band"];
            check_keys(o, "band", {"free_subcarriers", "free_center", "free_indices",
                                   "incumbent_indices"});
            read(o, "free_subcarriers", c.free_subcarriers);
            c.free_center = c.incumbent_subcarriers / 2;
            read(o, "free_center", c.free_center);
            read(o, "free_indices", c.free_indices);
            read(o, "incumbent_indices", c.incumbent_indices);
        }
        if (j.contains("waveform"))
            c.waveform = parse_waveform(j["waveform"].get<std::string>());
        if (j.contains("figure_waveforms")) {
            c.figure_waveforms.clear();
            for (const auto& w : j["figure_waveforms"])
                c.figure_waveforms.push_back(parse_waveform(w.get<std::string>()));
        }
        if (j.contains("waveforms")) {
            const auto& o = j["waveforms"];
            check_keys(o, "waveforms", {"ofdm", "fmt", "oqam", "lapped", "gfdm"});
            for (const auto& [name, v] : o.items()) {
                check_keys(v, "waveforms." + name, {"P", "N_CP", "K", "N_b", "rolloff", "indexing"});
                auto& ov = c.overrides[parse_waveform(name)];
                read(v, "P", ov.samples_per_symbol);
                read(v, "N_CP", ov.cp_samples);
                read(v, "K", ov.overlap_factor);
                read(v, "N_b", ov.block_symbols);
                read(v, "rolloff", ov.rolloff);
                read(v, "indexing", ov.indexing);
            }
        }
        if (j.contains("budgets")) {
            const auto& o = j["budgets"];
            check_keys(o, "budgets", {"total_power", "interference_threshold", "noise",
                                      "fig6_thresholds", "fig7_threshold_db"});
            read(o, "total_power", c.total_power);
            read(o, "interference_threshold", c.interference_threshold);
            read(o, "noise", c.noise);
            read(o, "fig6_thresholds", c.fig6_thresholds);
            if (o.contains("fig7_threshold_db")) {
                const auto& s = o["fig7_threshold_db"];
                check_keys(s, "budgets.fig7_threshold_db", {"min", "max", "step"});
                read(s, "min", c.fig7_db_min);
                read(s, "max", c.fig7_db_max);
                read(s, "step", c.fig7_db_step);
            }
        }
        if (j.contains("window")) {
            const auto& o = j["window"];
            check_keys(o, "window", {"free_symbols", "fig6_symbols", "fig7_symbols"});
            read(o, "free_symbols", c.free_symbols);
            read(o, "fig7_symbols", c.fig7_symbols);
            if (o.contains("fig6_symbols")) {
                const auto& s = o["fig6_symbols"];
                check_keys(s, "window.fig6_symbols", {"min", "max"});
                read(s, "min", c.fig6_min_symbols);
                read(s, "max", c.fig6_max_symbols);
            }
        }
        if (j.contains("offsets")) {
            const auto& o = j["offsets"];
            check_keys(o, "offsets", {"dt_step", "df_max", "df_step"});
            read(o, "dt_step", c.dt_step);
            read(o, "df_max", c.df_max);
            read(o, "df_step", c.df_step);
        }
        if (j.contains("figures")) {
            const auto& o = j["figures"];
            check_keys(o, "figures", {"fig4_neighbors", "fig5_max_distance"});
            read(o, "fig4_neighbors", c.fig4_neighbors);
            read(o, "fig5_max_distance", c.fig5_max_distance);
        }
        read(j, "seed", c.seed);
        read(j, "threads", c.threads);
        if (j.contains("paths")) {
            const auto& o = j["paths"];
            check_keys(o, "paths", {"cache_dir", "output_dir"});
            read(o, "cache_dir", c.cache_dir);
            read(o, "output_dir", c.output_dir);
        }
        read(j, "omega_override", c.omega_override);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config has a wrongly typed value: ") + e.what());
    }
    return c;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

BandMap band_map(const ScenarioConfig& c)
{
    BandMap b;
    if (!c.free_indices.empty()) {
        b.free = c.free_indices;
    } else {
        const int first = c.free_center - c.free_subcarriers / 2;
        for (int k = 0; k < c.free_subcarriers; ++k)
            b.free.push_back(first + k);
    }
    if (!c.incumbent_indices.empty()) {
        b.incumbent = c.incumbent_indices;
    } else {
        const std::set<int> used(b.free.begin(), b.free.end());
        for (int k = 0; k < c.incumbent_subcarriers; ++k)
            if (!used.count(k))
                b.incumbent.push_back(k);
    }
    return b;
}

WaveformConfig waveform_config(const ScenarioConfig& c, WaveformKind kind)
{
    auto w = preset(kind, c.incumbent.M, c.incumbent.cp_samples, c.incumbent.subcarrier_spacing);
    auto it = c.overrides.find(kind);
    if (it == c.overrides.end())
        return w;
    const auto& o = it->second;
    const int M = w.M;
    switch (kind) {
    case WaveformKind::OFDM:
        w.cp_samples = o.cp_samples.value_or(w.cp_samples);
        break;
    case WaveformKind::FMT:
        w.samples_per_symbol = o.samples_per_symbol.value_or(w.samples_per_symbol);
        w.overlap_factor = o.overlap_factor.value_or(w.overlap_factor);
        w.filter = rrc_filter(o.rolloff.value_or(w.filter.rolloff), w.overlap_factor,
                              w.samples_per_symbol);
        break;
    case WaveformKind::OQAM:
        w.overlap_factor = o.overlap_factor.value_or(w.overlap_factor);
        w.filter = phydyas_filter(w.overlap_factor, M);
        break;
    case WaveformKind::LAPPED: {
        const auto idx = o.indexing.value_or("symmetric");
        if (idx != "symmetric" && idx != "asymmetric")
            throw std::invalid_argument("lapped indexing must be 'symmetric' or 'asymmetric'");
        w.filter = lapped_sine_filter(
            M, idx == "symmetric" ? LappedIndexing::Symmetric : LappedIndexing::Asymmetric);
        break;
    }
    case WaveformKind::GFDM: {
        w.cp_samples = o.cp_samples.value_or(w.cp_samples);
        w.overlap_factor = o.overlap_factor.value_or(w.overlap_factor);
        w.block_symbols = o.block_symbols.value_or(w.block_symbols);
        const double r = o.rolloff.value_or(w.filter.rolloff);
        w.filter = gfdm_circular_filter(rrc_filter(r, w.overlap_factor, M), w.block_symbols, M);
        break;
    }
    }
    return w;
}

TableGrids table_grids(const ScenarioConfig& c)
{
    const int reach = std::max(max_span(band_map(c)) + 1, c.incumbent.M / 2 + 1);
    const int far = std::max({reach, c.fig4_neighbors + 1, c.fig5_max_distance + 1});
    return default_grids(c.incumbent, -far, far, c.dt_step, c.df_max, c.df_step);
}

bool table_matches(const InterferenceTable& t, const ScenarioConfig& c, WaveformKind kind)
{
    const auto g = table_grids(c);
    const auto w = waveform_config(c, kind);
    const auto& mi = t.metadata.incumbent;
    const auto& mw = t.metadata.waveform;
    if (t.waveform() != kind || t.min_distance() != g.min_distance ||
        t.max_distance() != g.max_distance || t.dt_grid() != g.dt_grid ||
        t.df_grid() != g.df_grid || t.metadata.method != "analytic")
        return false;
    if (mi.M != c.incumbent.M || mi.cp_samples != c.incumbent.cp_samples ||
        mi.observed_symbols != c.incumbent.observed_symbols ||
        mi.subcarrier_spacing != c.incumbent.subcarrier_spacing)
        return false;
    return mw.M == w.M && mw.samples_per_symbol == w.samples_per_symbol &&
           mw.cp_samples == w.cp_samples && mw.overlap_factor == w.overlap_factor &&
           mw.block_symbols == w.block_symbols && mw.filter.name == w.filter.name &&
           mw.filter.rolloff == w.filter.rolloff && t.metadata.seed == c.seed;
}

TableSet::TableSet(ScenarioConfig config, bool force_rebuild)
    : config_(std::move(config)), force_(force_rebuild)
{
    validate(config_);
}

std::string TableSet::cache_path(WaveformKind kind) const
{
    if (config_.cache_dir.empty())
        return {};
    return (fs::path(config_.cache_dir) / (std::string(to_string(kind)) + ".table.json")).string();
}

bool TableSet::reused(WaveformKind kind) const
{
    auto it = reused_.find(kind);
    return it != reused_.end() && it->second;
}

const std::vector<double>& TableSet::omegas(WaveformKind kind)
{
    auto it = omegas_.find(kind);
    if (it == omegas_.end())
        it = omegas_.emplace(kind, omega_factors(get(kind), band_map(config_), config_.df_max)).first;
    return it->second;
}

const InterferenceTable& TableSet::get(WaveformKind kind)
{
    if (auto it = tables_.find(kind); it != tables_.end())
        return it->second;
    const auto path = cache_path(kind);
    if (!path.empty() && !force_ && fs::exists(path)) {
        try {
            auto t = load_table(path);
            if (table_matches(t, config_, kind)) {
                reused_[kind] = true;
                return tables_.emplace(kind, std::move(t)).first->second;
            }
        } catch (const std::runtime_error&) {
            // unreadable cache is rebuilt below
        }
    }
    auto t = build_table(waveform_config(config_, kind), config_.incumbent, table_grids(config_),
                         config_.threads);
    t.metadata.seed = config_.seed;
    if (!path.empty())
        write_text(path, table_to_json(t));
    reused_[kind] = false;
    return tables_.emplace(kind, std::move(t)).first->second;
}

WaveformSolution solve_waveform(const ScenarioConfig& c, TableSet& tables, WaveformKind kind,
                                double ith)
{
    WaveformSolution s;
    const auto& omegas = c.omega_override ? *c.omega_override : tables.omegas(kind);
    s.problem = AllocationProblem::uniform(omegas, c.total_power, ith, c.noise);
    s.result = solve(s.problem);
    return s;
}

std::string_view to_string(FigureId id)
{
    switch (id) {
    case FigureId::Fig3: return "fig3";
    case FigureId::Fig4: return "fig4";
    case FigureId::Fig5a: return "fig5a";
    case FigureId::Fig5b: return "fig5b";
    case FigureId::Fig6a: return "fig6a";
    case FigureId::Fig6b: return "fig6b";
    case FigureId::Fig7: return "fig7";
    }
    return "?";
}

FigureId parse_figure(std::string_view name)
{
    for (auto id : {FigureId::Fig3, FigureId::Fig4, FigureId::Fig5a, FigureId::Fig5b,
                    FigureId::Fig6a, FigureId::Fig6b, FigureId::Fig7})
        if (to_string(id) == name)
            return id;
    throw std::invalid_argument("unknown figure id '" + std::string(name) +
                                "' (expected fig3, fig4, fig5a, fig5b, fig6a, fig6b or fig7)");
}

std::size_t FigureData::column(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return i;
    throw std::out_of_range("no column " + std::string(name));
}

std::string FigureData::to_csv() const
{
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i)
        out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + fmt(row[i]);
        out += "\n";
    }
    return out;
}

namespace {

int useful_for(const ScenarioConfig& c, WaveformKind kind, int free_symbols)
{
    const auto w = waveform_config(c, kind);
    return useful_symbols(kind, {free_symbols, static_cast<int>(band_map(c).free.size())},
                          c.incumbent, w.overlap_factor, w.block_symbols);
}

} // namespace

FigureData compute_figure(const ScenarioConfig& c, FigureId id, TableSet& tables)
{
    validate(c);
    FigureData f;
    const auto& wfs = c.figure_waveforms;
    auto name = [](WaveformKind k) { return std::string(to_string(k)); };

    switch (id) {
    case FigureId::Fig3:
    case FigureId::Fig4: {
        const bool total = id == FigureId::Fig3;
        f.columns.push_back("delta_t_samples");
        std::vector<int> dists;
        if (total) {
            // every other receiver bin exactly once
            for (int d = -(c.incumbent.M - 1) / 2; d <= c.incumbent.M / 2; ++d)
                if (d != 0)
                    dists.push_back(d);
            for (auto k : wfs)
                f.columns.push_back(name(k) + "_total_db");
        } else {
            for (int d = -c.fig4_neighbors; d <= c.fig4_neighbors; ++d)
                if (d != 0)
                    dists.push_back(d);
            for (auto k : wfs)
                for (int d : dists)
                    f.columns.push_back(name(k) + "_d" + std::to_string(d) + "_db");
        }
        const auto grids = table_grids(c);
        const std::size_t f0 = static_cast<std::size_t>(
            std::find(grids.df_grid.begin(), grids.df_grid.end(), 0.0) - grids.df_grid.begin());
        for (std::size_t ti = 0; ti < grids.dt_grid.size(); ++ti) {
            std::vector<double> row{static_cast<double>(grids.dt_grid[ti])};
            for (auto k : wfs) {
                const auto& t = tables.get(k);
                if (total) {
                    double s = 0;
                    for (int d : dists)
                        s += t.entry(d, ti, f0);
                    row.push_back(to_db(s));
                } else {
                    for (int d : dists)
                        row.push_back(to_db(t.entry(d, ti, f0)));
                }
            }
            f.rows.push_back(std::move(row));
        }
        break;
    }
    case FigureId::Fig5a:
    case FigureId::Fig5b: {
        const bool mean = id == FigureId::Fig5a;
        f.columns.push_back("distance_subcarriers");
        for (auto k : wfs)
            f.columns.push_back(name(k) + (mean ? "_mean_db" : "_max_db"));
        const auto grids = table_grids(c);
        const std::size_t f0 = static_cast<std::size_t>(
            std::find(grids.df_grid.begin(), grids.df_grid.end(), 0.0) - grids.df_grid.begin());
        for (int d = -c.fig5_max_distance; d <= c.fig5_max_distance; ++d) {
            std::vector<double> row{static_cast<double>(d)};
            for (auto k : wfs) {
                const auto& t = tables.get(k);
                double s = 0, m = 0;
                for (std::size_t ti = 0; ti < grids.dt_grid.size(); ++ti) {
                    s += t.entry(d, ti, f0);
                    m = std::max(m, t.entry(d, ti, f0));
                }
                row.push_back(to_db(mean ? s / static_cast<double>(grids.dt_grid.size()) : m));
            }
            f.rows.push_back(std::move(row));
        }
        break;
    }
    case FigureId::Fig6a:
    case FigureId::Fig6b: {
        const std::size_t which = id == FigureId::Fig6a ? 0 : 1;
        if (c.fig6_thresholds.size() <= which)
            throw std::invalid_argument("fig6 needs two interference thresholds");
        const double ith = c.fig6_thresholds[which];
        f.columns.push_back("free_symbols_N_f");
        std::vector<double> per_symbol;
        for (auto k : wfs) {
            f.columns.push_back(name(k) + "_bits");
            const auto s = solve_waveform(c, tables, k, ith);
            per_symbol.push_back(objective_bits(s.problem, s.result.powers));
        }
        for (int nf = c.fig6_min_symbols; nf <= c.fig6_max_symbols; ++nf) {
            std::vector<double> row{static_cast<double>(nf)};
            for (std::size_t i = 0; i < wfs.size(); ++i)
                row.push_back(per_symbol[i] * useful_for(c, wfs[i], nf));
            f.rows.push_back(std::move(row));
        }
        break;
    }
    case FigureId::Fig7: {
        f.columns.push_back("interference_threshold_db");
        for (auto k : wfs)
            f.columns.push_back(name(k) + "_bits");
        const int steps =
            static_cast<int>(std::floor((c.fig7_db_max - c.fig7_db_min) / c.fig7_db_step + 1e-9));
        for (int i = 0; i <= steps; ++i) {
            const double db = c.fig7_db_min + i * c.fig7_db_step;
            std::vector<double> row{db};
            for (auto k : wfs) {
                const auto s = solve_waveform(c, tables, k, std::pow(10.0, db / 10.0));
                const int n = useful_for(c, k, c.fig7_symbols);
                row.push_back(total_bits(s.result, s.problem, n));
            }
            f.rows.push_back(std::move(row));
        }
        break;
    }
    }
    return f;
}

std::string allocation_report(const ScenarioConfig& c, TableSet& tables)
{
    validate(c);
    const auto b = band_map(c);
    const auto s = solve_waveform(c, tables, c.waveform, c.interference_threshold);
    const int n = useful_for(c, c.waveform, c.free_symbols);
    double used_p = 0, used_i = 0;
    for (std::size_t m = 0; m < s.problem.size(); ++m) {
        used_p += s.result.powers[m];
        used_i += s.problem.omegas[m] * s.result.powers[m];
    }
    json j;
    j["waveform"] = std::string(to_string(c.waveform));
    j["free_subcarriers"] = b.free;
    j["omega"] = s.problem.omegas;
    j["powers_w"] = s.result.powers;
    j["alpha"] = s.result.alpha;
    j["beta"] = s.result.beta;
    j["power_constraint_binds"] = s.result.power_binds;
    j["interference_constraint_binds"] = s.result.interference_binds;
    j["total_power_w"] = c.total_power;
    j["power_used_w"] = used_p;
    j["power_utilization"] = used_p / c.total_power;
    j["interference_threshold_w"] = c.interference_threshold;
    j["interference_w"] = used_i;
    j["interference_utilization"] = used_i / c.interference_threshold;
    j["noise_w"] = c.noise;
    j["kkt_residual"] = kkt_residual(s.problem, s.result);
    j["free_symbols"] = c.free_symbols;
    j["useful_symbols"] = n;
    j["bits_per_symbol"] = objective_bits(s.problem, s.result.powers);
    j["total_bits"] = total_bits(s.result, s.problem, n);
    j["seed"] = c.seed;
    return j.dump(2) + "\n";
}

std::string run_table(const ScenarioConfig& c, const std::string& out, bool force)
{
    TableSet tables(c, force);
    const auto& t = tables.get(c.waveform);
    std::string path = out;
    if (path.empty())
        path = tables.cache_path(c.waveform);
    if (path.empty())
        path = (fs::path(c.output_dir) / (std::string(to_string(c.waveform)) + ".table.json"))
                   .string();
    if (path != tables.cache_path(c.waveform))
        write_text(path, table_to_json(t));
    return path;
}

std::string run_figure(const ScenarioConfig& c, FigureId id, const std::string& out, bool force)
{
    TableSet tables(c, force);
    const auto data = compute_figure(c, id, tables);
    const std::string path =
        out.empty() ? (fs::path(c.output_dir) / (std::string(to_string(id)) + ".csv")).string()
                    : out;
    write_text(path, data.to_csv());
    return path;
}

std::string run_allocation(const ScenarioConfig& c, const std::string& out, bool force)
{
    TableSet tables(c, force);
    const std::string path =
        out.empty() ? (fs::path(c.output_dir) /
                       ("allocation-" + std::string(to_string(c.waveform)) + ".json"))
                          .string()
                    : out;
    write_text(path, allocation_report(c, tables));
    return path;
}

} // namespace d2d
