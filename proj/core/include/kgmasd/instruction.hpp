#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace kgmasd::data {

enum class Theme {
    Transportation,
    Health,
    General,
    Environment,
    Equipment,
    Production,
    Electricity,
    DisasterPrevention,
    Unlabeled
};

enum class Mode { RTE, KGC, QA };

std::string theme_name(Theme t);
std::optional<Theme> theme_from_name(const std::string& name);
std::string mode_name(Mode m);
std::optional<Mode> mode_from_name(const std::string& name);

struct InstructionSample {
    std::string instruction;
    std::string input;  // may be empty for instruction-only tasks
    std::string output;
    Theme theme = Theme::Unlabeled;
    Mode mode = Mode::QA;
    std::vector<std::string> provenance_triples;  // triple keys
    double lkg_weight = 1.0;
    nlohmann::json extras = nlohmann::json::object();  // unknown import keys, preserved

    bool operator==(const InstructionSample& o) const {
        return instruction == o.instruction && input == o.input && output == o.output &&
               theme == o.theme && mode == o.mode && provenance_triples == o.provenance_triples &&
               lkg_weight == o.lkg_weight && extras == o.extras;
    }
};

}  // namespace kgmasd::data
