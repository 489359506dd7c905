#pragma once

#include "circuit.hpp"
#include "error.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <string>

namespace leqa {

/// Which tour-to-path factor the Hamiltonian path estimate uses.
enum class PathFactor {
    Paper,      // (M-1)/M
    Corrected,  // M/(M+1)
};

/**
 * @brief Tiled quantum architecture and technology parameters.
 *
 * Times are in microseconds. `speed` is in ULBs per microsecond.
 * Defaults are the ion-trap / Steane-code values of the reference setup; the
 * S-gate delay has no published value and defaults to the X/Y/Z class.
 */
struct FabricConfig {
    std::size_t width = 60;   // a
    std::size_t length = 60;  // b
    std::size_t channel_capacity = 5;
    double speed = 0.001;
    double t_move = 100.0;
    std::map<GateKind, double> delays = {
        {GateKind::H, 5440.0},    {GateKind::T, 10940.0}, {GateKind::Tdag, 10940.0},
        {GateKind::X, 5240.0},    {GateKind::Y, 5240.0},  {GateKind::Z, 5240.0},
        {GateKind::S, 5240.0},    {GateKind::Cnot, 4930.0},
    };
    std::size_t q_max = 20;
    PathFactor path_factor = PathFactor::Paper;

    [[nodiscard]] std::size_t area() const noexcept { return width * length; }

    /// Delay of an FT operation; throws ConfigError when the kind has no entry.
    [[nodiscard]] double delay(GateKind k) const {
        auto it = delays.find(k);
        if (it == delays.end()) throw ConfigError("missing delay for gate kind '" + std::string(mnemonic(k)) + "'");
        return it->second;
    }

    void validate() const {
        if (width < 1 || length < 1) throw ConfigError("fabric dimensions must be at least 1x1");
        if (channel_capacity < 1) throw ConfigError("channel capacity must be at least 1");
        if (!(speed > 0.0) || !std::isfinite(speed)) throw ConfigError("qubit speed v must be positive");
        if (!(t_move > 0.0) || !std::isfinite(t_move)) throw ConfigError("T_move must be positive");
        if (q_max < 1) throw ConfigError("q_max must be at least 1");
        for (GateKind k : kFtKinds) {
            double d = delay(k);
            if (!(d > 0.0) || !std::isfinite(d)) {
                throw ConfigError("delay for '" + std::string(mnemonic(k)) + "' must be positive");
            }
        }
    }
};

}  // namespace leqa
