#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "khmc/hmc.hpp"
#include "khmc/model.hpp"

namespace khmc {

using Json = nlohmann::json;

/// Configuration rejected by schema validation.  Messages carry the JSON
/// path of the offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses a JSON config file; parse errors are rethrown as ConfigError
/// with the parser's position diagnostics.
Json load_config_file(const std::string& path);

/// Rejects keys outside `allowed` and requires the `required` subset.
void check_keys(const Json& j, const std::string& context,
                std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required);

std::shared_ptr<TargetPotential> make_target(const Json& spec);

/// dim comes from the target; the Gaussian family may carry an explicit
/// inverse-mass diagonal/matrix of matching size.
std::shared_ptr<KineticEnergySpec> make_kinetic(const Json& spec, std::size_t dim);

ChainConfig make_chain_config(const Json& spec, std::size_t dim);

StepsDistribution make_steps(const Json& spec);

}  // namespace khmc
