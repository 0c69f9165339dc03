#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "mdfgan/core/error.hpp"
#include "mdfgan/core/format.hpp"
#include "mdfgan/gan/config.hpp"
#include "mdfgan/gan/model.hpp"
#include "mdfgan/gan/training.hpp"
#include "mdfgan/nn/serialization.hpp"

namespace mdfgan::gan {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
    GanMdfModel model;
    TrainingConfig config;
};

inline nlohmann::json checkpoint_to_json(GanMdfModel const& model, TrainingConfig const& config)
{
    nlohmann::json j;
    j["format"] = "mdfgan.checkpoint";
    j["version"] = kCheckpointVersion;
    j["d1"] = model.d1();
    j["d2"] = model.d2();
    j["seed"] = config.seed;
    j["config"] = to_json(config);
    j["normalizers"] = {
        {"input", model.input_norm.to_json()},
        {"lf_output", model.lf_output_norm.to_json()},
        {"hf_output", model.hf_output_norm.to_json()},
    };
    j["networks"] = {
        {"lf_block", nn::to_json(model.lf_block)},
        {"hf_block", nn::to_json(model.hf_block)},
        {"discriminator", nn::to_json(model.discriminator)},
    };
    return j;
}

inline Checkpoint checkpoint_from_json(nlohmann::json const& j)
{
    try {
        if (j.at("format").get<std::string>() != "mdfgan.checkpoint") {
            throw InvalidArgument("not a GAN-MDF checkpoint document");
        }
        const int version = j.at("version").get<int>();
        if (version != kCheckpointVersion) {
            throw InvalidArgument("unsupported checkpoint version " + std::to_string(version));
        }
        Checkpoint c;
        c.config = config_from_json(j.at("config"));
        auto const& nets = j.at("networks");
        c.model.lf_block = nn::network_from_json(nets.at("lf_block"));
        c.model.hf_block = nn::network_from_json(nets.at("hf_block"));
        c.model.discriminator = nn::network_from_json(nets.at("discriminator"));
        auto const& norms = j.at("normalizers");
        c.model.input_norm = data::Normalizer::from_json(norms.at("input"));
        c.model.lf_output_norm = data::Normalizer::from_json(norms.at("lf_output"));
        c.model.hf_output_norm = data::Normalizer::from_json(norms.at("hf_output"));
        c.model.check_consistency();
        return c;
    } catch (nlohmann::json::exception const& e) {
        throw InvalidArgument(std::string("malformed checkpoint: ") + e.what());
    }
}

inline void save_checkpoint(std::filesystem::path const& path, GanMdfModel const& model, TrainingConfig const& config)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << checkpoint_to_json(model, config).dump(2) << '\n';
}

inline Checkpoint load_checkpoint(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "': file not found or unreadable");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (nlohmann::json::exception const& e) {
        throw InvalidArgument("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return checkpoint_from_json(j);
}

/// CSV with header iteration,L_S,L_G,L_D.
inline void write_loss_trace(std::ostream& out, std::span<const LossRecord> trace)
{
    out << "iteration,L_S,L_G,L_D\n";
    for (auto const& r : trace) {
        out << r.iteration << ',' << format_double(r.supervised) << ',' << format_double(r.generative) << ','
            << format_double(r.discriminative) << '\n';
    }
}

inline void write_loss_trace(std::filesystem::path const& path, std::span<const LossRecord> trace)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    write_loss_trace(out, trace);
}

} // namespace mdfgan::gan
