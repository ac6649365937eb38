#include "lqtx/experiment_config.hpp"

#include <fstream>
#include <numeric>
#include <stdexcept>

namespace lqtx {

using nlohmann::json;

std::optional<Preset> parse_preset(std::string_view name) {
  if (name == "fig2") return Preset::fig2;
  if (name == "fig3") return Preset::fig3;
  if (name == "fig4") return Preset::fig4;
  return std::nullopt;
}

std::string_view preset_name(Preset preset) {
  switch (preset) {
    case Preset::fig2: return "fig2";
    case Preset::fig3: return "fig3";
    case Preset::fig4: return "fig4";
  }
  return "";
}

void ExperimentConfig::validate() const {
  sys.validate();
  ch.validate();
  opt.validate();
  sim.validate();
  for (std::size_t T : horizons)
    if (T < 1) throw InvalidParameter("T >= 1");
}

namespace {

void pin_common(ExperimentConfig& cfg) {
  cfg.sys.a = 1.1;
  cfg.sys.b = -1;
  cfg.sys.q = 1;
  cfg.sys.r = 0.5;
  cfg.sys.horizon = 30;
  cfg.ch = ChannelParamsd::from_theta(1.0, 3.0);
}

}  // namespace

void apply_preset(ExperimentConfig& cfg, Preset preset) {
  cfg.preset = preset;
  pin_common(cfg);
  switch (preset) {
    case Preset::fig2:
      cfg.sys.k = 1;
      cfg.sys.sigma_d2 = 0;
      cfg.sys.sigma_x2 = 1;
      cfg.opt.ex2_1 = 1;
      cfg.sim.initial_state = InitialState::fixed(1.0);
      break;
    case Preset::fig3:
      cfg.sys.k = 1.8;
      cfg.sys.sigma_x2 = 1;
      cfg.opt.ex2_1 = 1;
      cfg.sim.initial_state = InitialState::gaussian(1.0);
      break;
    case Preset::fig4:
      cfg.sys.k = 1.8;
      cfg.sys.sigma_x2 = 1;
      cfg.sys.sigma_d2 = 0.05;
      cfg.opt.ex2_1 = 1;
      cfg.sim.initial_state = InitialState::gaussian(1.0);
      cfg.sim.n_samples = 10000;
      cfg.horizons.resize(30);
      std::iota(cfg.horizons.begin(), cfg.horizons.end(), std::size_t{1});
      break;
  }
}

std::vector<double> fig3_noise_levels() { return {0.0, 0.01, 0.05, 0.1, 0.5}; }

std::vector<Fig2Variant> fig2_variants(const ExperimentConfig& base) {
  ExperimentConfig nominal = base;
  apply_preset(nominal, Preset::fig2);
  std::vector<Fig2Variant> out;
  out.push_back({"nominal", nominal});
  {
    ExperimentConfig v = nominal;
    v.ch.p_max = 1.5;
    out.push_back({"p_max_low", v});
  }
  {
    ExperimentConfig v = nominal;
    v.sys.a = 1.05;
    out.push_back({"a_low", v});
  }
  {
    ExperimentConfig v = nominal;
    v.sys.k = 1.8;
    out.push_back({"k_1.8", v});
  }
  {
    ExperimentConfig v = nominal;
    v.sys.q = 2;
    out.push_back({"q_high", v});
  }
  {
    // Below roughly r = 50 a larger input weight lengthens the profile
    // slightly; the energy drop only shows at this scale.
    ExperimentConfig v = nominal;
    v.sys.r = 500;
    out.push_back({"r_high", v});
  }
  return out;
}

namespace {

template <typename T>
void read_if(const json& obj, const char* key, T& field) {
  if (obj.contains(key)) field = obj.at(key).get<T>();
}

ChannelModel parse_channel_model(const std::string& name) {
  if (name == "bernoulli") return ChannelModel::bernoulli;
  if (name == "gain_threshold") return ChannelModel::gain_threshold;
  throw InvalidParameter("channel_model in {bernoulli, gain_threshold}");
}

const char* channel_model_name(ChannelModel m) {
  return m == ChannelModel::bernoulli ? "bernoulli" : "gain_threshold";
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidParameter("config is a JSON object");
  ExperimentConfig cfg;
  try {
    if (doc.contains("sys")) {
      const json& s = doc.at("sys");
      read_if(s, "a", cfg.sys.a);
      read_if(s, "b", cfg.sys.b);
      read_if(s, "k", cfg.sys.k);
      read_if(s, "q", cfg.sys.q);
      read_if(s, "r", cfg.sys.r);
      read_if(s, "sigma_x2", cfg.sys.sigma_x2);
      read_if(s, "sigma_d2", cfg.sys.sigma_d2);
      if (s.contains("T")) {
        const auto T = s.at("T").get<long long>();
        if (T < 1) throw InvalidParameter("T >= 1");
        cfg.sys.horizon = static_cast<std::size_t>(T);
      }
    }
    if (doc.contains("ch")) {
      const json& c = doc.at("ch");
      if (c.contains("theta")) {
        if (c.contains("gamma") || c.contains("sigma2") || c.contains("gbar"))
          throw InvalidParameter("theta given together with gamma/sigma2/gbar");
        cfg.ch = ChannelParamsd::from_theta(c.at("theta").get<double>(), cfg.ch.p_max);
      }
      read_if(c, "gamma", cfg.ch.gamma);
      read_if(c, "sigma2", cfg.ch.sigma2);
      read_if(c, "gbar", cfg.ch.gbar);
      read_if(c, "p_max", cfg.ch.p_max);
    }
    bool ex2_given = false;
    if (doc.contains("opt")) {
      const json& o = doc.at("opt");
      read_if(o, "k_max", cfg.opt.k_max);
      read_if(o, "eps_cost", cfg.opt.eps_cost);
      read_if(o, "root_tol", cfg.opt.root_tol);
      ex2_given = o.contains("ex2_1");
      read_if(o, "ex2_1", cfg.opt.ex2_1);
      if (o.contains("init")) {
        const auto init = o.at("init").get<std::string>();
        if (init == "zero")
          cfg.init = InitialPolicy::zero;
        else if (init == "full_power")
          cfg.init = InitialPolicy::full_power;
        else
          throw InvalidParameter("init in {zero, full_power}");
      }
    }
    if (!ex2_given) cfg.opt.ex2_1 = cfg.sys.sigma_x2;
    if (doc.contains("sim")) {
      const json& m = doc.at("sim");
      read_if(m, "n_samples", cfg.sim.n_samples);
      read_if(m, "seed", cfg.sim.seed);
      read_if(m, "threads", cfg.sim.threads);
      if (m.contains("channel_model"))
        cfg.sim.channel_model = parse_channel_model(m.at("channel_model").get<std::string>());
      if (m.contains("initial_state")) {
        const json& init = m.at("initial_state");
        const auto kind = init.at("kind").get<std::string>();
        if (kind == "fixed")
          cfg.sim.initial_state = InitialState::fixed(init.value("x1", 1.0));
        else if (kind == "gaussian")
          cfg.sim.initial_state = InitialState::gaussian(init.value("sigma_x2", cfg.sys.sigma_x2));
        else
          throw InvalidParameter("initial_state.kind in {fixed, gaussian}");
      } else {
        cfg.sim.initial_state = InitialState::gaussian(cfg.sys.sigma_x2);
      }
    } else {
      cfg.sim.initial_state = InitialState::gaussian(cfg.sys.sigma_x2);
    }
    if (doc.contains("horizons")) cfg.horizons = doc.at("horizons").get<std::vector<std::size_t>>();
    if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("preset")) {
      const auto name = doc.at("preset").get<std::string>();
      const auto preset = parse_preset(name);
      if (!preset) throw InvalidParameter("preset in {fig2, fig3, fig4}");
      apply_preset(cfg, *preset);
    }
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("malformed config field: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["sys"] = {{"a", cfg.sys.a},
                {"b", cfg.sys.b},
                {"k", cfg.sys.k},
                {"q", cfg.sys.q},
                {"r", cfg.sys.r},
                {"sigma_x2", cfg.sys.sigma_x2},
                {"sigma_d2", cfg.sys.sigma_d2},
                {"T", cfg.sys.horizon}};
  doc["ch"] = {{"gamma", cfg.ch.gamma},
               {"sigma2", cfg.ch.sigma2},
               {"gbar", cfg.ch.gbar},
               {"p_max", cfg.ch.p_max}};
  doc["opt"] = {{"k_max", cfg.opt.k_max},
                {"eps_cost", cfg.opt.eps_cost},
                {"root_tol", cfg.opt.root_tol},
                {"ex2_1", cfg.opt.ex2_1},
                {"init", cfg.init == InitialPolicy::zero ? "zero" : "full_power"}};
  json init;
  if (cfg.sim.initial_state.kind == InitialState::Kind::fixed)
    init = {{"kind", "fixed"}, {"x1", cfg.sim.initial_state.value}};
  else
    init = {{"kind", "gaussian"}, {"sigma_x2", cfg.sim.initial_state.value}};
  doc["sim"] = {{"n_samples", cfg.sim.n_samples},
                {"seed", cfg.sim.seed},
                {"threads", cfg.sim.threads},
                {"channel_model", channel_model_name(cfg.sim.channel_model)},
                {"initial_state", init}};
  doc["horizons"] = cfg.horizons;
  doc["output_dir"] = cfg.output_dir.string();
  return doc;
}

}  // namespace lqtx
