#include "alpos/config_io.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "alpos/errors.hpp"

namespace alpos {
namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

struct Setter {
    std::function<void(ExperimentConfig&, const std::string&)> apply;
};

double to_double(const std::string& v) {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("not a number: " + v);
    return d;
}

long long to_int(const std::string& v) {
    std::size_t used = 0;
    long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("not an integer: " + v);
    return i;
}

std::vector<int> to_int_list(const std::string& v) {
    std::vector<int> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(static_cast<int>(to_int(item)));
    }
    return out;
}

std::vector<Strategy> to_strategies(const std::string& v) {
    std::vector<Strategy> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ','))
        if (!trim(item).empty()) out.push_back(strategy_from_name(trim(item)));
    return out;
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"scene.width_m", {[](auto& c, auto& v) { c.scene.width_m = to_double(v); }}},
        {"scene.length_m", {[](auto& c, auto& v) { c.scene.length_m = to_double(v); }}},
        {"scene.height_m", {[](auto& c, auto& v) { c.scene.height_m = to_double(v); }}},
        {"scene.bs_spacing_m", {[](auto& c, auto& v) { c.scene.bs_spacing_m = to_double(v); }}},
        {"scene.bs_height_m", {[](auto& c, auto& v) { c.scene.bs_height_m = to_double(v); }}},
        {"scene.ue_height_m", {[](auto& c, auto& v) { c.scene.ue_height_m = to_double(v); }}},
        {"scene.carrier_ghz", {[](auto& c, auto& v) { c.scene.carrier_ghz = to_double(v); }}},
        {"scene.clutter_density", {[](auto& c, auto& v) { c.scene.clutter_density = to_double(v); }}},
        {"scene.clutter_height_m", {[](auto& c, auto& v) { c.scene.clutter_height_m = to_double(v); }}},
        {"scene.clutter_size_m", {[](auto& c, auto& v) { c.scene.clutter_size_m = to_double(v); }}},
        {"scene.shadow_corr_dist_m", {[](auto& c, auto& v) { c.scene.shadow_corr_dist_m = to_double(v); }}},
        {"scene.sigma_sf_los_db", {[](auto& c, auto& v) { c.scene.sigma_sf_los_db = to_double(v); }}},
        {"scene.sigma_sf_nlos_db", {[](auto& c, auto& v) { c.scene.sigma_sf_nlos_db = to_double(v); }}},
        {"train.learning_rate", {[](auto& c, auto& v) { c.train.learning_rate = to_double(v); }}},
        {"train.fine_tune_lr", {[](auto& c, auto& v) { c.train.fine_tune_lr = to_double(v); }}},
        {"train.batch_size", {[](auto& c, auto& v) { c.train.batch_size = static_cast<int>(to_int(v)); }}},
        {"train.epochs", {[](auto& c, auto& v) { c.train.epochs = static_cast<int>(to_int(v)); }}},
        {"train.fine_tune_epochs", {[](auto& c, auto& v) { c.train.fine_tune_epochs = static_cast<int>(to_int(v)); }}},
        {"train.adam_beta1", {[](auto& c, auto& v) { c.train.adam_beta1 = to_double(v); }}},
        {"train.adam_beta2", {[](auto& c, auto& v) { c.train.adam_beta2 = to_double(v); }}},
        {"train.adam_eps", {[](auto& c, auto& v) { c.train.adam_eps = to_double(v); }}},
        {"experiment.n", {[](auto& c, auto& v) { c.n = static_cast<int>(to_int(v)); }}},
        {"experiment.x_percent", {[](auto& c, auto& v) { c.x_percent = to_double(v); }}},
        {"experiment.pool_size", {[](auto& c, auto& v) { c.pool_size = static_cast<int>(to_int(v)); }}},
        {"experiment.bs_counts", {[](auto& c, auto& v) { c.bs_counts = to_int_list(v); }}},
        {"experiment.strategies", {[](auto& c, auto& v) { c.strategies = to_strategies(v); }}},
        {"experiment.n_realizations", {[](auto& c, auto& v) { c.n_realizations = static_cast<int>(to_int(v)); }}},
        {"experiment.base_seed", {[](auto& c, auto& v) { c.base_seed = static_cast<std::uint64_t>(to_int(v)); }}},
        {"experiment.workers", {[](auto& c, auto& v) { c.workers = static_cast<int>(to_int(v)); }}},
    };
    return table;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ParseError(origin, line_no, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "scene" && section != "train" &&
                section != "experiment")
                throw ParseError(origin, line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin, line_no, "expected key=value");
        std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.find('.') == std::string::npos) {
            if (section.empty())
                throw ParseError(origin, line_no, "key outside any section");
            key = section + "." + key;
        }
        auto it = setters().find(key);
        if (it == setters().end())
            throw ParseError(origin, line_no, "unknown key '" + key + "'");
        try {
            it->second.apply(cfg, value);
        } catch (const std::exception& e) {
            throw ParseError(origin, line_no,
                             "bad value for '" + key + "': " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path);
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "[scene]\n";
    out << "width_m = " << cfg.scene.width_m << "\n";
    out << "length_m = " << cfg.scene.length_m << "\n";
    out << "height_m = " << cfg.scene.height_m << "\n";
    out << "bs_spacing_m = " << cfg.scene.bs_spacing_m << "\n";
    out << "bs_height_m = " << cfg.scene.bs_height_m << "\n";
    out << "ue_height_m = " << cfg.scene.ue_height_m << "\n";
    out << "carrier_ghz = " << cfg.scene.carrier_ghz << "\n";
    out << "clutter_density = " << cfg.scene.clutter_density << "\n";
    out << "clutter_height_m = " << cfg.scene.clutter_height_m << "\n";
    out << "clutter_size_m = " << cfg.scene.clutter_size_m << "\n";
    out << "shadow_corr_dist_m = " << cfg.scene.shadow_corr_dist_m << "\n";
    out << "sigma_sf_los_db = " << cfg.scene.sigma_sf_los_db << "\n";
    out << "sigma_sf_nlos_db = " << cfg.scene.sigma_sf_nlos_db << "\n";
    out << "\n[train]\n";
    out << "learning_rate = " << cfg.train.learning_rate << "\n";
    out << "fine_tune_lr = " << cfg.train.fine_tune_lr << "\n";
    out << "batch_size = " << cfg.train.batch_size << "\n";
    out << "epochs = " << cfg.train.epochs << "\n";
    out << "fine_tune_epochs = " << cfg.train.fine_tune_epochs << "\n";
    out << "adam_beta1 = " << cfg.train.adam_beta1 << "\n";
    out << "adam_beta2 = " << cfg.train.adam_beta2 << "\n";
    out << "adam_eps = " << cfg.train.adam_eps << "\n";
    out << "\n[experiment]\n";
    out << "n = " << cfg.n << "\n";
    out << "x_percent = " << cfg.x_percent << "\n";
    out << "pool_size = " << cfg.pool_size << "\n";
    out << "bs_counts = ";
    for (std::size_t i = 0; i < cfg.bs_counts.size(); ++i)
        out << (i ? "," : "") << cfg.bs_counts[i];
    out << "\n";
    out << "strategies = ";
    for (std::size_t i = 0; i < cfg.strategies.size(); ++i)
        out << (i ? "," : "") << strategy_name(cfg.strategies[i]);
    out << "\n";
    out << "n_realizations = " << cfg.n_realizations << "\n";
    out << "base_seed = " << cfg.base_seed << "\n";
    out << "workers = " << cfg.workers << "\n";
    return out.str();
}

}  // namespace alpos
