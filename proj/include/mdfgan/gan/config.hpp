#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdfgan/core/error.hpp"
#include "mdfgan/data/normalizer.hpp"
#include "mdfgan/nn/activation.hpp"
#include "mdfgan/nn/serialization.hpp"

namespace mdfgan::gan {

/// How the two adversarial stages of an iteration distribute their updates.
enum class TrainingMode {
    /// Both stages update both the HF block and the discriminator.
    PaperFaithful,
    /// Discriminative loss moves only the discriminator, generative loss only the HF block.
    StandardGan,
};

inline std::string_view to_string(TrainingMode m) noexcept
{
    return m == TrainingMode::PaperFaithful ? "paper-faithful" : "standard-gan";
}

inline TrainingMode parse_training_mode(std::string_view s)
{
    if (s == "paper-faithful" || s == "paper") return TrainingMode::PaperFaithful;
    if (s == "standard-gan" || s == "standard") return TrainingMode::StandardGan;
    throw ConfigError("unknown training mode '" + std::string(s) + "'");
}

/// Hidden-layer widths and activations shared by the LF block, the HF block and
/// the discriminator.
struct Architecture {
    std::vector<std::size_t> hidden{32, 32};
    std::vector<nn::ActivationKind> activations{nn::ActivationKind::sigmoid(), nn::ActivationKind::sigmoid()};

    friend bool operator==(Architecture const&, Architecture const&) = default;
};

struct TrainingConfig {
    double lr_lf = 0.03;  // LF-block pretraining
    double lr_d = 0.002;  // discriminative loss
    double lr_g = 0.001;  // generative loss
    double lr_s = 0.05;   // supervised loss
    std::size_t epochs_lf = 4000;
    std::size_t epochs_hf = 350;
    std::size_t lf_batch_cap = 32;
    std::size_t hf_batch_cap = 32;
    TrainingMode mode = TrainingMode::PaperFaithful;
    bool supervised_trick = true; // false gives the pure-GAN ablation
    data::NormalizerKind normalizer = data::NormalizerKind::None;
    Architecture architecture;
    std::uint64_t seed = 0;

    /// Throws ConfigError on invalid settings; returns advisory warnings.
    std::vector<std::string> validate() const
    {
        auto require = [](bool ok, std::string const& what) {
            if (!ok) throw ConfigError(what);
        };
        auto finite = [](double v) { return std::isfinite(v); };
        require(finite(lr_lf) && lr_lf > 0.0, "lr_lf must be positive");
        require(finite(lr_s) && lr_s > 0.0, "lr_s must be positive");
        // Zero is accepted for the adversarial rates: it switches the stage off.
        require(finite(lr_d) && lr_d >= 0.0, "lr_d must be non-negative");
        require(finite(lr_g) && lr_g >= 0.0, "lr_g must be non-negative");
        require(lf_batch_cap >= 1 && hf_batch_cap >= 1, "batch caps must be at least 1");
        require(architecture.hidden.size() == architecture.activations.size(),
                "architecture: one activation per hidden layer is required");
        for (auto w : architecture.hidden) require(w >= 1, "architecture: hidden widths must be positive");

        std::vector<std::string> warnings;
        if (!(lr_d > lr_g)) {
            warnings.push_back("lr_d <= lr_g; a larger discriminator rate usually trains more stably");
        }
        return warnings;
    }

    friend bool operator==(TrainingConfig const&, TrainingConfig const&) = default;
};

inline nlohmann::json to_json(TrainingConfig const& c)
{
    nlohmann::json acts = nlohmann::json::array();
    for (auto const& a : c.architecture.activations) acts.push_back(nn::activation_to_json(a));
    return {
        {"lr_lf", c.lr_lf},
        {"lr_d", c.lr_d},
        {"lr_g", c.lr_g},
        {"lr_s", c.lr_s},
        {"epochs_lf", c.epochs_lf},
        {"epochs_hf", c.epochs_hf},
        {"lf_batch_cap", c.lf_batch_cap},
        {"hf_batch_cap", c.hf_batch_cap},
        {"mode", to_string(c.mode)},
        {"supervised_trick", c.supervised_trick},
        {"normalizer", data::to_string(c.normalizer)},
        {"hidden", c.architecture.hidden},
        {"activations", acts},
        {"seed", c.seed},
    };
}

inline TrainingConfig config_from_json(nlohmann::json const& j)
{
    TrainingConfig c;
    c.lr_lf = j.at("lr_lf").get<double>();
    c.lr_d = j.at("lr_d").get<double>();
    c.lr_g = j.at("lr_g").get<double>();
    c.lr_s = j.at("lr_s").get<double>();
    c.epochs_lf = j.at("epochs_lf").get<std::size_t>();
    c.epochs_hf = j.at("epochs_hf").get<std::size_t>();
    c.lf_batch_cap = j.at("lf_batch_cap").get<std::size_t>();
    c.hf_batch_cap = j.at("hf_batch_cap").get<std::size_t>();
    c.mode = parse_training_mode(j.at("mode").get<std::string>());
    c.supervised_trick = j.at("supervised_trick").get<bool>();
    c.normalizer = data::parse_normalizer_kind(j.at("normalizer").get<std::string>());
    c.architecture.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    c.architecture.activations.clear();
    for (auto const& a : j.at("activations")) c.architecture.activations.push_back(nn::activation_from_json(a));
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

} // namespace mdfgan::gan
