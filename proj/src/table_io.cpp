#include "d2d/interference.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace d2d {

using nlohmann::json;

std::string table_to_json(const InterferenceTable& t)
{
    const auto& inc = t.metadata.incumbent;
    const auto& w = t.metadata.waveform;
    json j;
    j["format"] = "d2d-interference-table";
    j["version"] = 1;
    j["waveform"] = std::string(to_string(t.waveform()));
    j["incumbent"] = {{"M", inc.M},
                      {"N_CP", inc.cp_samples},
                      {"N", inc.observed_symbols},
                      {"subcarrier_spacing", inc.subcarrier_spacing}};
    j["waveform_params"] = {{"M", w.M},
                            {"P", w.samples_per_symbol},
                            {"N_CP", w.cp_samples},
                            {"K", w.overlap_factor},
                            {"N_b", w.block_symbols},
                            {"filter", w.filter.name},
                            {"rolloff", w.filter.rolloff}};
    j["distances"] = {{"min", t.min_distance()}, {"max", t.max_distance()}};
    j["layout"] = "values[((distance - min) * len(dt_grid) + dt_index) * len(df_grid) + df_index]";
    j["units"] = "W per W of D2D subcarrier power, averaged per incumbent symbol";
    j["dt_grid"] = t.dt_grid();
    j["df_grid"] = t.df_grid();
    j["seed"] = t.metadata.seed;
    j["trials_or_analytic"] =
        t.metadata.method == "analytic" ? json("analytic") : json(t.metadata.trials);
    j["values"] = t.values();
    return j.dump() + "\n";
}

void save_table(const InterferenceTable& table, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write table file " + path);
    out << table_to_json(table);
    if (!out)
        throw std::runtime_error("failed writing table file " + path);
}

InterferenceTable load_table(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read table file " + path);
    json j;
    try {
        in >> j;
        if (j.at("format").get<std::string>() != "d2d-interference-table")
            throw std::runtime_error("not an interference table");
        InterferenceTable t(parse_waveform(j.at("waveform").get<std::string>()),
                            j.at("distances").at("min").get<int>(),
                            j.at("distances").at("max").get<int>(),
                            j.at("dt_grid").get<std::vector<int>>(),
                            j.at("df_grid").get<std::vector<double>>());
        auto values = j.at("values").get<std::vector<double>>();
        if (values.size() != t.values().size())
            throw std::runtime_error("values has " + std::to_string(values.size()) +
                                     " entries, expected " + std::to_string(t.values().size()));
        t.values() = std::move(values);

        const auto& ji = j.at("incumbent");
        auto& inc = t.metadata.incumbent;
        inc.M = ji.at("M").get<int>();
        inc.cp_samples = ji.at("N_CP").get<int>();
        inc.observed_symbols = ji.at("N").get<int>();
        inc.subcarrier_spacing = ji.at("subcarrier_spacing").get<double>();

        const auto& jw = j.at("waveform_params");
        auto& w = t.metadata.waveform;
        w.kind = t.waveform();
        w.M = jw.at("M").get<int>();
        w.samples_per_symbol = jw.at("P").get<int>();
        w.cp_samples = jw.at("N_CP").get<int>();
        w.overlap_factor = jw.at("K").get<int>();
        w.block_symbols = jw.at("N_b").get<int>();
        w.filter.name = jw.at("filter").get<std::string>();
        w.filter.rolloff = jw.at("rolloff").get<double>();
        w.filter.overlap_factor = w.overlap_factor;
        w.filter.samples_per_symbol = w.samples_per_symbol;

        t.metadata.seed = j.at("seed").get<std::uint64_t>();
        const auto& mode = j.at("trials_or_analytic");
        if (mode.is_string()) {
            t.metadata.method = "analytic";
            t.metadata.trials = 0;
        } else {
            t.metadata.method = "monte-carlo";
            t.metadata.trials = mode.get<int>();
        }
        return t;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed table file " + path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error("malformed table file " + path + ": " + e.what());
    }
}

} // namespace d2d
