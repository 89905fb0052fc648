#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "swe/mlp.hpp"
#include "swe/pipeline.hpp"

namespace swe {

// JSON config file overriding analysis, VAD, pitch, and feature settings.
// Unknown keys are rejected so typos do not silently fall back to defaults.
inline void apply_config_json(EngineConfig& cfg, const nlohmann::json& j) {
    for (const auto& [section, body] : j.items()) {
        if (section == "analysis") {
            for (const auto& [k, v] : body.items()) {
                if (k == "window_ms") cfg.analysis.window_ms = v.get<double>();
                else if (k == "step_ms") cfg.analysis.step_ms = v.get<double>();
                else if (k == "frame_step_ms") cfg.analysis.frame_step_ms = v.get<double>();
                else if (k == "frame_span_ms") cfg.analysis.frame_span_ms = v.get<double>();
                else throw std::runtime_error("config: unknown analysis key '" + k + "'");
            }
        } else if (section == "vad") {
            for (const auto& [k, v] : body.items()) {
                if (k == "primary_threshold") cfg.vad.primary_threshold = v.get<double>();
                else if (k == "zcr_max") cfg.vad.zcr_max = v.get<double>();
                else if (k == "zcr_min") cfg.vad.zcr_min = v.get<double>();
                else if (k == "pitch_search_radius") cfg.vad.pitch_search_radius = v.get<int>();
                else if (k == "min_run") cfg.vad.min_run = v.get<int>();
                else if (k == "init_span") cfg.vad.init_span = v.get<int>();
                else throw std::runtime_error("config: unknown vad key '" + k + "'");
            }
        } else if (section == "pitch") {
            for (const auto& [k, v] : body.items()) {
                if (k == "floor_hz") cfg.pitch.floor_hz = v.get<double>();
                else if (k == "ceiling_hz") cfg.pitch.ceiling_hz = v.get<double>();
                else if (k == "voicing_threshold") cfg.pitch.voicing_threshold = v.get<double>();
                else if (k == "snr") cfg.pitch.snr = v.get<double>();
                else if (k == "min_run") cfg.pitch.min_run = v.get<int>();
                else throw std::runtime_error("config: unknown pitch key '" + k + "'");
            }
        } else if (section == "features") {
            for (const auto& [k, v] : body.items()) {
                if (k == "respiration") cfg.use_respiration = v.get<std::string>() == "on";
                else if (k == "fillers") cfg.use_fillers = v.get<std::string>() == "on";
                else throw std::runtime_error("config: unknown features key '" + k + "'");
            }
        } else {
            throw std::runtime_error("config: unknown section '" + section + "'");
        }
    }
    cfg.analysis.validate();
    cfg.vad.validate();
}

inline void load_config_file(EngineConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    f >> j;
    apply_config_json(cfg, j);
}

// Effective settings, echoed in output headers.
inline std::string config_echo(const EngineConfig& cfg) {
    std::ostringstream os;
    os << "# window_ms=" << cfg.analysis.window_ms << " step_ms=" << cfg.analysis.step_ms
       << " frame_step_ms=" << cfg.analysis.frame_step_ms
       << " frame_span_ms=" << cfg.analysis.frame_span_ms
       << " vad.primary_threshold=" << cfg.vad.primary_threshold
       << " vad.zcr=(" << cfg.vad.zcr_min << "," << cfg.vad.zcr_max << ")"
       << " pitch.range=(" << cfg.pitch.floor_hz << "," << cfg.pitch.ceiling_hz << ")"
       << " features=" << feature_set_name(cfg.feature_set());
    return os.str();
}

}  // namespace swe
