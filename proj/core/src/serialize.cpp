#include "tlab/serialize.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tlab {

using nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ResourceError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw ResourceError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

json complex_array(const std::vector<cplx>& v) {
    json arr = json::array();
    for (const cplx& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
}

std::vector<cplx> complex_vector(const json& arr) {
    std::vector<cplx> v;
    for (const auto& e : arr) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return v;
}

} // namespace

std::string recipe_to_json(const GeneratorRecipe& recipe) {
    json j;
    j["version"] = 1;
    j["kind"] = "generator";
    j["epsilons"] = recipe.coefficients.epsilons;
    json deltas = json::object();
    for (const auto& [i, v] : recipe.coefficients.deltas) deltas[std::to_string(i)] = v;
    j["deltas"] = deltas;
    j["family_seed"] = recipe.family_seed;
    j["family_count"] = recipe.family_count;
    j["grid"] = {{"half_extent", recipe.grid_half_extent}, {"points", recipe.grid_points}};
    j["frequency_cut_factor"] = recipe.frequency_cut_factor;
    j["density_warning"] = recipe.density_warning;
    json stages = json::array();
    for (const StageRecord& s : recipe.stages) {
        json st;
        st["n"] = s.n;
        st["delta_n"] = s.delta_n;
        st["fit_residual"] = s.fit_residual;
        st["stage_error"] = s.stage_error;
        st["p_star_norm"] = s.p_star_norm;
        st["min_on_support"] = s.min_on_support;
        st["fit_converged"] = s.fit_converged;
        st["ridge_used"] = s.fit.ridge_used;
        st["frequencies"] = s.fit.frequencies;
        st["coefficients"] = complex_array(s.fit.coefficients);
        stages.push_back(std::move(st));
    }
    j["stages"] = std::move(stages);
    return j.dump(2);
}

GeneratorRecipe recipe_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("recipe parse error: ") + e.what());
    }
    if (j.value("kind", "") != "generator") throw ConfigError("recipe kind is not 'generator'");
    GeneratorRecipe r;
    r.coefficients.epsilons = j.at("epsilons").get<std::vector<double>>();
    for (const auto& [key, v] : j.at("deltas").items())
        r.coefficients.deltas[std::stoi(key)] = v.get<double>();
    r.family_seed = j.at("family_seed").get<std::uint64_t>();
    r.family_count = j.at("family_count").get<int>();
    r.grid_half_extent = j.at("grid").at("half_extent").get<double>();
    r.grid_points = j.at("grid").at("points").get<std::size_t>();
    r.frequency_cut_factor = j.at("frequency_cut_factor").get<double>();
    r.density_warning = j.at("density_warning").get<bool>();
    for (const auto& st : j.at("stages")) {
        StageRecord s;
        s.n = st.at("n").get<int>();
        s.delta_n = st.at("delta_n").get<double>();
        s.fit_residual = st.at("fit_residual").get<double>();
        s.stage_error = st.at("stage_error").get<double>();
        s.p_star_norm = st.at("p_star_norm").get<double>();
        s.min_on_support = st.at("min_on_support").get<double>();
        s.fit_converged = st.at("fit_converged").get<bool>();
        s.fit.ridge_used = st.at("ridge_used").get<double>();
        s.fit.frequencies = st.at("frequencies").get<std::vector<double>>();
        s.fit.coefficients = complex_vector(st.at("coefficients"));
        s.fit.residual_w = s.fit_residual;
        s.fit.converged = s.fit_converged;
        r.stages.push_back(std::move(s));
    }
    return r;
}

void save_recipe(const GeneratorRecipe& recipe, const std::string& path) {
    write_file_atomic(path, recipe_to_json(recipe) + "\n");
}

GeneratorRecipe load_recipe(const std::string& path) { return recipe_from_json(read_file(path)); }

std::string pair_to_json(const PairRecipe& recipe) {
    json j;
    j["version"] = 1;
    j["kind"] = "pair";
    j["interval_i"] = {recipe.interval_i.lo, recipe.interval_i.hi};
    j["interval_j"] = {recipe.interval_j.lo, recipe.interval_j.hi};
    j["bump_peak"] = recipe.bump_peak;
    j["range_n"] = recipe.range_n;
    if (recipe.zero_fix_index)
        j["zero_fix_index"] = *recipe.zero_fix_index;
    else
        j["zero_fix_index"] = nullptr;
    return j.dump(2);
}

PairRecipe pair_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("pair recipe parse error: ") + e.what());
    }
    if (j.value("kind", "") != "pair") throw ConfigError("recipe kind is not 'pair'");
    PairRecipe r;
    r.interval_i = {j.at("interval_i").at(0).get<double>(), j.at("interval_i").at(1).get<double>()};
    r.interval_j = {j.at("interval_j").at(0).get<double>(), j.at("interval_j").at(1).get<double>()};
    r.bump_peak = j.at("bump_peak").get<double>();
    r.range_n = j.at("range_n").get<int>();
    if (!j.at("zero_fix_index").is_null()) r.zero_fix_index = j.at("zero_fix_index").get<int>();
    return r;
}

void save_pair(const PairRecipe& recipe, const std::string& path) {
    write_file_atomic(path, pair_to_json(recipe) + "\n");
}

PairRecipe load_pair(const std::string& path) { return pair_from_json(read_file(path)); }

} // namespace tlab
