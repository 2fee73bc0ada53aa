#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "bloc/encoder.hpp"

namespace bloc {

// Everything a pipeline run needs: the language parameters, classifier
// and coordination knobs, and the native-app list. Loaded from a flat
// key = value file; unknown keys are rejected and durations carry
// explicit units ("60s", "5m", "1h", "2d").
struct RunConfig {
    LanguageConfig language;

    int trees = 100;
    int folds = 5;
    std::uint64_t seed = 1;
    bool balance = false;

    double threshold = 0.98;
    double resolution = 1.0;
    int knn_max_k = 10;
    int window_weeks = 2;
    std::int64_t top_n = 0;  // 0 keeps every account

    std::vector<std::string> native_apps;  // empty means the default list
    std::array<std::string, 6> pause_glyphs = {"□h", "□d", "□w",
                                               "□m", "□y", "□z"};

    // keys that were present in the config file; CLI defaults only apply
    // to keys the user did not set
    std::set<std::string> explicit_keys;

    bool is_set(const std::string& key) const { return explicit_keys.count(key) > 0; }
    void validate() const;
};

// Duration with a mandatory unit suffix: s, m, h, or d. Fractions are
// allowed as long as the result is a whole number of seconds.
std::int64_t parse_duration_s(const std::string& text);

RunConfig load_run_config(const std::string& path);

// Parses config text directly; used by load_run_config and tests.
RunConfig parse_run_config(const std::string& text, const std::string& origin);

}  // namespace bloc
