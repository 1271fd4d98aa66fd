#include "kgmasd/instruction.hpp"

namespace kgmasd::data {

std::string theme_name(Theme t) {
    switch (t) {
        case Theme::Transportation: return "Transportation";
        case Theme::Health: return "Health";
        case Theme::General: return "General";
        case Theme::Environment: return "Environment";
        case Theme::Equipment: return "Equipment";
        case Theme::Production: return "Production";
        case Theme::Electricity: return "Electricity";
        case Theme::DisasterPrevention: return "DisasterPrevention";
        case Theme::Unlabeled: return "Unlabeled";
    }
    return "Unlabeled";
}

std::optional<Theme> theme_from_name(const std::string& name) {
    for (Theme t : {Theme::Transportation, Theme::Health, Theme::General, Theme::Environment,
                    Theme::Equipment, Theme::Production, Theme::Electricity,
                    Theme::DisasterPrevention, Theme::Unlabeled})
        if (theme_name(t) == name) return t;
    return std::nullopt;
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::RTE: return "RTE";
        case Mode::KGC: return "KGC";
        case Mode::QA: return "QA";
    }
    return "QA";
}

std::optional<Mode> mode_from_name(const std::string& name) {
    for (Mode m : {Mode::RTE, Mode::KGC, Mode::QA})
        if (mode_name(m) == name) return m;
    return std::nullopt;
}

}  // namespace kgmasd::data
