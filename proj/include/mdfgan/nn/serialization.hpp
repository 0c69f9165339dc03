#pragma once

#include <nlohmann/json.hpp>

#include "mdfgan/core/error.hpp"
#include "mdfgan/nn/dense_network.hpp"

namespace mdfgan::nn {

inline constexpr int kNetworkFormatVersion = 1;

inline nlohmann::json activation_to_json(ActivationKind const& kind)
{
    nlohmann::json j{{"kind", tag_name(kind.tag)}};
    if (kind.tag == ActivationTag::LeakyRelu) {
        j["alpha"] = kind.alpha;
    }
    return j;
}

inline ActivationKind activation_from_json(nlohmann::json const& j)
{
    const auto tag = parse_tag(j.at("kind").get<std::string>());
    if (tag == ActivationTag::LeakyRelu) {
        return ActivationKind::leaky_relu(j.value("alpha", 0.01));
    }
    return {tag};
}

/// Versioned document: layer sizes, activation tags, row-major weights.
inline nlohmann::json to_json(DenseNetwork const& net)
{
    nlohmann::json j;
    j["format"] = "mdfgan.dense_network";
    j["version"] = kNetworkFormatVersion;
    j["layer_sizes"] = std::vector<std::size_t>(net.layer_sizes().begin(), net.layer_sizes().end());
    auto& hidden = j["hidden_activations"] = nlohmann::json::array();
    for (auto const& a : net.hidden_activations()) hidden.push_back(activation_to_json(a));
    j["output_activation"] = activation_to_json(net.output_activation());
    auto& weights = j["weights"] = nlohmann::json::array();
    auto& biases = j["biases"] = nlohmann::json::array();
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        weights.push_back(net.weights(l).data);
        biases.push_back(net.biases(l));
    }
    j["frozen"] = net.frozen();
    return j;
}

inline DenseNetwork network_from_json(nlohmann::json const& j)
{
    try {
        const int version = j.at("version").get<int>();
        if (version != kNetworkFormatVersion) {
            throw InvalidArgument("unsupported network format version " + std::to_string(version));
        }
        std::vector<ActivationKind> hidden;
        for (auto const& a : j.at("hidden_activations")) hidden.push_back(activation_from_json(a));
        DenseNetwork net(j.at("layer_sizes").get<std::vector<std::size_t>>(), std::move(hidden),
                         activation_from_json(j.at("output_activation")));
        auto const& weights = j.at("weights");
        auto const& biases = j.at("biases");
        if (weights.size() != net.num_layers() || biases.size() != net.num_layers()) {
            throw ShapeError("network document: layer count does not match layer_sizes");
        }
        for (std::size_t l = 0; l < net.num_layers(); ++l) {
            auto w = weights[l].get<std::vector<double>>();
            auto b = biases[l].get<std::vector<double>>();
            auto& wm = net.weights_mut(l);
            if (w.size() != wm.data.size() || b.size() != net.biases(l).size()) {
                throw ShapeError("network document: parameter shape mismatch in layer " + std::to_string(l));
            }
            wm.data = std::move(w);
            net.biases_mut(l) = std::move(b);
        }
        if (j.value("frozen", false)) {
            net.freeze();
        }
        return net;
    } catch (nlohmann::json::exception const& e) {
        throw InvalidArgument(std::string("malformed network document: ") + e.what());
    }
}

} // namespace mdfgan::nn
