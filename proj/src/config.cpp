#include "bloc/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bloc/errors.hpp"

namespace bloc {

void RunConfig::validate() const {
    language.validate();
    if (trees < 1) throw config_error("trees must be at least 1");
    if (folds < 2) throw config_error("folds must be at least 2");
    if (threshold < 0.0 || threshold > 1.0) {
        throw config_error("threshold must lie in [0, 1]");
    }
    if (resolution <= 0.0) throw config_error("resolution must be positive");
    if (knn_max_k < 1) throw config_error("knn_max_k must be at least 1");
    if (window_weeks < 1) throw config_error("window_weeks must be at least 1");
    if (top_n < 0) throw config_error("top_n must be non-negative");
}

std::int64_t parse_duration_s(const std::string& text) {
    if (text.empty()) throw config_error("empty duration");
    char unit = text.back();
    std::int64_t scale;
    switch (unit) {
        case 's': scale = 1; break;
        case 'm': scale = 60; break;
        case 'h': scale = 3600; break;
        case 'd': scale = 86400; break;
        default:
            throw config_error("duration \"" + text +
                               "\" needs an explicit unit suffix (s, m, h, d)");
    }
    std::string number = text.substr(0, text.size() - 1);
    if (number.empty()) throw config_error("duration \"" + text + "\" has no value");
    std::size_t consumed = 0;
    double value;
    try {
        value = std::stod(number, &consumed);
    } catch (const std::exception&) {
        throw config_error("cannot parse duration \"" + text + "\"");
    }
    if (consumed != number.size() || value < 0) {
        throw config_error("cannot parse duration \"" + text + "\"");
    }
    double seconds = value * static_cast<double>(scale);
    double rounded = std::round(seconds);
    if (std::abs(seconds - rounded) > 1e-9) {
        throw config_error("duration \"" + text +
                           "\" is not a whole number of seconds");
    }
    return static_cast<std::int64_t>(rounded);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

// Values are either a double-quoted string or a bare token.
std::string unquote(const std::string& value, const std::string& context) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        return value.substr(1, value.size() - 2);
    }
    if (!value.empty() && (value.front() == '"' || value.back() == '"')) {
        throw config_error(context + ": unbalanced quotes in \"" + value + "\"");
    }
    return value;
}

bool parse_bool(const std::string& value, const std::string& context) {
    if (value == "true" || value == "yes") return true;
    if (value == "false" || value == "no") return false;
    throw config_error(context + ": expected a boolean, got \"" + value + "\"");
}

std::int64_t parse_int(const std::string& value, const std::string& context) {
    try {
        std::size_t consumed = 0;
        std::int64_t parsed = std::stoll(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw config_error(context + ": expected an integer, got \"" + value + "\"");
    }
}

double parse_double(const std::string& value, const std::string& context) {
    try {
        std::size_t consumed = 0;
        double parsed = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw config_error(context + ": expected a number, got \"" + value + "\"");
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string context = origin + ":" + std::to_string(line_no);
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error(context + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = unquote(trim(line.substr(eq + 1)), context);
        if (key.empty()) throw config_error(context + ": empty key");
        if (cfg.explicit_keys.count(key)) {
            throw config_error(context + ": duplicate key \"" + key + "\"");
        }
        cfg.explicit_keys.insert(key);

        if (key == "p1") {
            cfg.language.session_threshold_s = parse_duration_s(value);
        } else if (key == "p2") {
            if (value == "f1") {
                cfg.language.pause_alphabet = PauseAlphabet::f1;
            } else if (value == "f2") {
                cfg.language.pause_alphabet = PauseAlphabet::f2;
            } else {
                throw config_error(context + ": p2 must be f1 or f2");
            }
        } else if (key == "p3") {
            cfg.language.sessions_as_content_words = parse_bool(value, context);
        } else if (key == "p4") {
            if (value == "ngram") {
                cfg.language.tokenization = Tokenization::ngram;
            } else if (value == "pause") {
                cfg.language.tokenization = Tokenization::pause;
            } else {
                throw config_error(context + ": p4 must be ngram or pause");
            }
        } else if (key == "ngram_n") {
            cfg.language.ngram_size = static_cast<int>(parse_int(value, context));
        } else if (key == "p5") {
            cfg.language.sort_word_symbols = parse_bool(value, context);
        } else if (key == "p6") {
            cfg.language.truncation_length = static_cast<int>(parse_int(value, context));
        } else if (key == "trees") {
            cfg.trees = static_cast<int>(parse_int(value, context));
        } else if (key == "folds") {
            cfg.folds = static_cast<int>(parse_int(value, context));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(value, context));
        } else if (key == "balance") {
            cfg.balance = parse_bool(value, context);
        } else if (key == "threshold") {
            cfg.threshold = parse_double(value, context);
        } else if (key == "resolution") {
            cfg.resolution = parse_double(value, context);
        } else if (key == "knn_max_k") {
            cfg.knn_max_k = static_cast<int>(parse_int(value, context));
        } else if (key == "window_weeks") {
            cfg.window_weeks = static_cast<int>(parse_int(value, context));
        } else if (key == "top_n") {
            cfg.top_n = parse_int(value, context);
        } else if (key == "native_apps") {
            cfg.native_apps = split_list(value);
        } else if (key == "pause_glyphs") {
            auto glyphs = split_list(value);
            if (glyphs.size() != 6) {
                throw config_error(context + ": pause_glyphs needs six "
                                             "comma-separated entries");
            }
            std::copy(glyphs.begin(), glyphs.end(), cfg.pause_glyphs.begin());
        } else {
            throw config_error(context + ": unknown key \"" + key + "\"");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str(), path);
}

}  // namespace bloc
