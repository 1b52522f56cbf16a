#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtgrowth/dispersion.hpp"
#include "rtgrowth/profile.hpp"

namespace rtg {

struct KeyInfo {
    const char* key;
    const char* default_value;  // nullptr: unset unless given
    const char* doc;
};

// Every accepted key, in help order.
const std::vector<KeyInfo>& config_keys();

// Flat `section.key = value` configuration. Unknown keys are errors.
class RunConfig {
public:
    static RunConfig defaults();
    static RunConfig parse(std::istream& in, const std::string& source = "<config>");
    static RunConfig load(const std::filesystem::path& path);

    // `key=value` override; unknown keys and malformed text throw ConfigError.
    void set(const std::string& key, const std::string& value);
    void set_override(const std::string& assignment);

    bool has(const std::string& key) const;
    std::string str(const std::string& key) const;
    double num(const std::string& key) const;
    int integer(const std::string& key) const;
    std::optional<double> opt_num(const std::string& key) const;

    // Sorted key = value lines; the hash is FNV-1a of this text.
    std::string canonical() const;
    std::uint64_t hash() const;

    PressureLaw pressure_law(Side side) const;
    ViscosityLaw viscosity(Side side) const;
    SlabGeometry geometry() const;
    SteadyProfile profile() const;
    // elements per side; 0 uses mesh.elements
    Mesh mesh(int elements = 0) const;
    GrowthOptions growth_options() const;

    // Checks every block; throws ConfigError naming the key.
    void validate() const;

private:
    std::map<std::string, std::string> values_;
    std::filesystem::path base_dir_;
};

}  // namespace rtg
