#pragma once

#include <map>
#include <string>

namespace kgmasd::agents {

inline constexpr const char* kRoleKgMaster = "kg_master";
inline constexpr const char* kRoleEntityExtractor = "entity_extractor";
inline constexpr const char* kRoleRelationExtractor = "relation_extractor";
inline constexpr const char* kRoleKrDistiller = "kr_distiller";
inline constexpr const char* kRoleVerifier = "verifier";

// Role-keyed prompt templates with {placeholder} substitution. Built-in
// defaults can be overridden per role by <role>.txt files in a directory.
class PromptSet {
  public:
    static PromptSet defaults();
    static PromptSet load_dir(const std::string& dir);  // defaults + overrides

    const std::string& raw(const std::string& role) const;
    std::string render(const std::string& role,
                       const std::map<std::string, std::string>& vars) const;

  private:
    std::map<std::string, std::string> templates_;
};

}  // namespace kgmasd::agents
