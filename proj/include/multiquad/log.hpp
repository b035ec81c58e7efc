#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace multiquad {

// diagnostics go to stderr when MULTIQUAD_LOG is set to anything truthy
inline bool log_enabled() {
    static const bool on = [] {
        const char* v = std::getenv("MULTIQUAD_LOG");
        if (!v || !*v) return false;
        const std::string s(v);
        return s != "0" && s != "off" && s != "false";
    }();
    return on;
}

inline void log_warning(const std::string& msg) {
    if (log_enabled()) std::cerr << "[multiquad] warning: " << msg << "\n";
}

inline void log_info(const std::string& msg) {
    if (log_enabled()) std::cerr << "[multiquad] " << msg << "\n";
}

} // namespace multiquad
