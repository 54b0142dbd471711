#ifndef CHARP_REGISTRY_HPP
#define CHARP_REGISTRY_HPP

#include "charp/scenario.hpp"

namespace charp {

struct RegistryEntry {
    std::string name;
    std::string description;
    std::vector<std::string> statements;  // paper statements exercised
};

const std::vector<RegistryEntry>& registry_list();

// Builds a registry scenario for the given prime (0 selects the default, 5).
// Throws BadInput for unknown names or unusable primes.
Scenario make_scenario(const std::string& name, int prime = 0);

}  // namespace charp

#endif
