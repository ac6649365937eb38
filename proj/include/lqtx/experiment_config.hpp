#ifndef LQTX_EXPERIMENT_CONFIG_HPP_
#define LQTX_EXPERIMENT_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lqtx/optimizer.hpp"
#include "lqtx/simulator.hpp"
#include "lqtx/types.hpp"

namespace lqtx {

enum class Preset { fig2, fig3, fig4 };

std::optional<Preset> parse_preset(std::string_view name);
std::string_view preset_name(Preset preset);

enum class InitialPolicy { zero, full_power };

struct ExperimentConfig {
  SystemParamsd sys{};
  ChannelParamsd ch{};
  OptimizerConfigd opt{};
  SimConfig sim{};
  InitialPolicy init{InitialPolicy::zero};
  std::optional<Preset> preset;
  std::filesystem::path output_dir{"out"};
  std::vector<std::size_t> horizons;  // for compare; empty means {sys.horizon}

  /// Throws InvalidParameter naming the first violated invariant.
  void validate() const;
};

/*
 * Overwrites the fields each preset pins:
 *   fig2: a=1.1 b=-1 k=1 P_max=3 theta=1 q=1 r=0.5 T=30 sigma_d2=0, x_1 = 1
 *   fig3: a=1.1 b=-1 k=1.8 P_max=3 theta=1 q=1 r=0.5 sigma_x2=1 T=30
 *   fig4: fig3 with sigma_d2=0.05, 10000 samples, horizons 1..30
 */
void apply_preset(ExperimentConfig& cfg, Preset preset);

/// Parses a config document; omitted fields keep their defaults. A preset
/// named in the document is applied after the explicit fields.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// sigma_d2 values used for the perturbation-variance figure.
std::vector<double> fig3_noise_levels();

struct Fig2Variant {
  std::string name;
  ExperimentConfig cfg;
};

/// Nominal no-perturbation scenario plus its one-parameter variants.
std::vector<Fig2Variant> fig2_variants(const ExperimentConfig& base);

}  // namespace lqtx

#endif  // LQTX_EXPERIMENT_CONFIG_HPP_
