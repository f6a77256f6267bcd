#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fraclab/lil.hpp"
#include "fraclab/smallball.hpp"
#include "fraclab/urn.hpp"

namespace fraclab::io {

using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a(std::string_view s);
std::string format_double(double v);  // round-trip exact, deterministic

// Flat `key = value` configuration with [section] headers and # comments.
// Keys are stored as "section.key" ("" section for the preamble).
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;

    // Every key must belong to `known`; otherwise throws with file:line.
    void require_known(const std::vector<std::string>& known) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    std::string canonical() const;       // sorted "key = value" lines
    std::string hash_hex() const;        // FNV-1a of canonical()

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
    std::string origin_;
};

// Common metadata envelope embedded in every JSON artifact.
ordered_json meta(const std::string& config_hash);

ordered_json constant_record(const std::string& name, const ordered_json& parameters,
                             const formulas::KappaInfo& value, double tolerance,
                             const std::string& method);
ordered_json constant_record(const std::string& name, const ordered_json& parameters,
                             double value, double tolerance, const std::string& method);

ordered_json to_json(const smallball::SmallBallResult& r);
ordered_json to_json(const lil::LilReport& r);
ordered_json to_json(const urn::UrnDiagnostics& d);

// CSV schemas (exact column names):
//   smallball: epsilon,p_hat,stderr,n_paths,grid_n
//   lil:       horizon,replica,statistic,theory_constant,ratio
//   urn:       n,replica,Y,N
std::string smallball_csv(const smallball::SmallBallResult& r);
std::string lil_csv(const lil::LilReport& r);
std::string urn_csv(const std::vector<urn::UrnTrajectory>& trajectories);

void write_file(const std::string& path, const std::string& content);
std::string default_out_dir();  // $FRACLAB_OUT or "./out"

}  // namespace fraclab::io
