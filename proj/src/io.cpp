#include "fraclab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fraclab/errors.hpp"
#include "fraclab/version.hpp"

namespace fraclab::io {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw parameter_error(origin + ":" + std::to_string(lineno) +
                                      ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw parameter_error(origin + ":" + std::to_string(lineno) +
                                  ": expected `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw parameter_error(origin + ":" + std::to_string(lineno) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (cfg.values_.count(full))
            throw parameter_error(origin + ":" + std::to_string(lineno) + ": duplicate key `" +
                                  full + "`");
        cfg.values_[full] = value;
        cfg.lines_[full] = lineno;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parameter_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw parameter_error(origin_ + ":" + std::to_string(lines_.at(key)) + ": key `" + key +
                              "` is not a number");
    }
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw parameter_error(origin_ + ":" + std::to_string(lines_.at(key)) + ": key `" + key +
                              "` is not an integer");
    }
}

void Config::require_known(const std::vector<std::string>& known) const {
    for (const auto& [key, value] : values_) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw parameter_error(origin_ + ":" + std::to_string(lines_.at(key)) +
                                  ": unknown key `" + key + "`");
    }
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [key, value] : values_) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    return out;
}

std::string Config::hash_hex() const {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)fnv1a(canonical()));
    return buf;
}

ordered_json meta(const std::string& config_hash) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["tool_version"] = kVersion;
    j["config_hash"] = config_hash;
    return j;
}

ordered_json constant_record(const std::string& name, const ordered_json& parameters,
                             const formulas::KappaInfo& value, double tolerance,
                             const std::string& method) {
    ordered_json j;
    j["name"] = name;
    j["parameters"] = parameters;
    switch (value.kind) {
        case formulas::KappaInfo::Kind::exact: j["value"] = value.value; break;
        case formulas::KappaInfo::Kind::bounds: j["value"] = {value.lo, value.hi}; break;
        case formulas::KappaInfo::Kind::unknown: j["value"] = "unknown"; break;
    }
    j["tolerance"] = tolerance;
    j["method"] = method;
    return j;
}

ordered_json constant_record(const std::string& name, const ordered_json& parameters, double value,
                             double tolerance, const std::string& method) {
    ordered_json j;
    j["name"] = name;
    j["parameters"] = parameters;
    j["value"] = value;
    j["tolerance"] = tolerance;
    j["method"] = method;
    return j;
}

ordered_json to_json(const smallball::SmallBallResult& r) {
    ordered_json j;
    j["tau"] = r.tau;
    j["n_paths"] = r.n_paths;
    j["kappa_hat"] = r.kappa_hat;
    j["kappa_ci"] = {r.kappa_lo, r.kappa_hi};
    j["fit_intercept"] = r.fit_intercept;
    j["fit_r2"] = r.fit_r2;
    j["fit_warning"] = r.fit_warning;
    j["points"] = ordered_json::array();
    for (const auto& p : r.points) {
        ordered_json pj;
        pj["epsilon"] = p.epsilon;
        pj["p_hat"] = p.p_hat;
        pj["stderr"] = p.stderr_;
        pj["wilson"] = {p.wilson_lo, p.wilson_hi};
        pj["successes"] = p.successes;
        pj["n_paths"] = p.n_paths;
        pj["grid_n"] = p.grid_n;
        pj["p_hat_refined"] = p.p_hat_refined;
        pj["n_paths_refined"] = p.n_paths_refined;
        pj["grid_n_refined"] = p.grid_n_refined;
        pj["refinement_gap"] = p.refinement_gap;
        pj["zero_successes"] = p.zero_successes;
        pj["design_range_ok"] = p.design_range_ok;
        j["points"].push_back(std::move(pj));
    }
    return j;
}

ordered_json to_json(const lil::LilReport& r) {
    ordered_json j;
    j["horizons"] = r.horizons;
    j["theory_constant"] = std::isnan(r.theory_constant) ? ordered_json() : ordered_json(r.theory_constant);
    j["theory_band"] = {r.theory_lo, r.theory_hi};
    j["provenance"] = r.provenance;
    j["median_statistic"] = r.median_statistic;
    j["median_ratio"] = r.median_ratio;
    j["statistic"] = r.statistic;
    if (!r.endpoint_over_sqrt.empty()) j["endpoint_over_sqrt"] = r.endpoint_over_sqrt;
    return j;
}

ordered_json to_json(const urn::UrnDiagnostics& d) {
    ordered_json j;
    j["p_w"] = d.params.p_w;
    j["p_b"] = d.params.p_b;
    j["w0"] = d.params.w0;
    j["b0"] = d.params.b0;
    j["rho"] = d.consts.rho;
    j["v"] = d.consts.v;
    j["sigma1_sq"] = d.consts.sigma1_sq;
    j["sigma2_sq"] = d.consts.sigma2_sq;
    j["checkpoints"] = d.checkpoints;
    j["limsup_theory_y"] = d.limsup_theory_y;
    j["limsup_theory_n"] = d.limsup_theory_n;
    j["chung_theory"] = d.chung_theory;
    j["y_over_n"] = d.y_over_n;
    j["limsup_y"] = d.limsup_y;
    j["limsup_n"] = d.limsup_n;
    j["chung_y"] = d.chung_y;
    j["chung_n"] = d.chung_n;
    return j;
}

std::string smallball_csv(const smallball::SmallBallResult& r) {
    std::string out = "epsilon,p_hat,stderr,n_paths,grid_n\n";
    for (const auto& p : r.points) {
        out += format_double(p.epsilon);
        out += ',';
        out += format_double(p.p_hat);
        out += ',';
        out += format_double(p.stderr_);
        out += ',';
        out += std::to_string(p.n_paths);
        out += ',';
        out += std::to_string(p.grid_n);
        out += '\n';
    }
    return out;
}

std::string lil_csv(const lil::LilReport& r) {
    const double ref = std::isnan(r.theory_constant) ? 0.5 * (r.theory_lo + r.theory_hi)
                                                     : r.theory_constant;
    std::string out = "horizon,replica,statistic,theory_constant,ratio\n";
    for (std::size_t k = 0; k < r.horizons.size(); ++k) {
        for (std::size_t rep = 0; rep < r.statistic.size(); ++rep) {
            out += format_double(r.horizons[k]);
            out += ',';
            out += std::to_string(rep);
            out += ',';
            out += format_double(r.statistic[rep][k]);
            out += ',';
            out += format_double(ref);
            out += ',';
            out += format_double(r.statistic[rep][k] / ref);
            out += '\n';
        }
    }
    return out;
}

std::string urn_csv(const std::vector<urn::UrnTrajectory>& trajectories) {
    std::string out = "n,replica,Y,N\n";
    for (std::size_t rep = 0; rep < trajectories.size(); ++rep) {
        const auto& t = trajectories[rep];
        for (std::size_t i = 0; i < t.stages.size(); ++i) {
            out += std::to_string(t.stages[i]);
            out += ',';
            out += std::to_string(rep);
            out += ',';
            out += format_double(t.y[i]);
            out += ',';
            out += format_double(t.n_draws[i]);
            out += '\n';
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw numeric_error("cannot write " + path);
    out << content;
}

std::string default_out_dir() {
    const char* env = std::getenv("FRACLAB_OUT");
    return env && *env ? env : "out";
}

}  // namespace fraclab::io
