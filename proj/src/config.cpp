#include "cogradar/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace cogradar {

namespace {

std::string fmt_real(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) throw std::invalid_argument("expected a finite number, got '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty layer size in '" + s + "'");
    const std::int64_t v = parse_int(item.substr(b, e - b + 1));
    if (v <= 0) throw std::invalid_argument("layer sizes must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw std::invalid_argument("expected at least one hidden layer");
  return out;
}

std::string fmt_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// Range predicates; the string names the accepted range in errors.
struct Check {
  std::function<bool(double)> ok;
  const char* text;
};

const Check kPositive{[](double v) { return v > 0.0; }, "must be > 0"};
const Check kNonNegative{[](double v) { return v >= 0.0; }, "must be >= 0"};
const Check kProbability{[](double v) { return v >= 0.0 && v <= 1.0; }, "must lie in [0, 1]"};
const Check kOpenUnit{[](double v) { return v > 0.0 && v < 1.0; }, "must lie in (0, 1)"};
const Check kHalfOpenUnit{[](double v) { return v > 0.0 && v <= 1.0; }, "must lie in (0, 1]"};
const Check kDiscount{[](double v) { return v >= 0.0 && v < 1.0; }, "must lie in [0, 1)"};
const Check kDegrees{[](double v) { return v > 0.0 && v <= 360.0; }, "must lie in (0, 360]"};
const Check kAny{[](double) { return true; }, ""};

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class Acc>
Field real(std::string sec, std::string key, Acc acc, Check check) {
  return {sec, key, [acc](const RunConfig& c) { return fmt_real(acc(const_cast<RunConfig&>(c))); },
          [acc, check](RunConfig& c, const std::string& s) {
            const double v = parse_real(s);
            if (!check.ok(v)) throw std::invalid_argument(check.text);
            acc(c) = v;
          }};
}

template <class Acc>
Field integer(std::string sec, std::string key, Acc acc, std::int64_t lo) {
  return {sec, key, [acc](const RunConfig& c) { return std::to_string(acc(const_cast<RunConfig&>(c))); },
          [acc, lo](RunConfig& c, const std::string& s) {
            const std::int64_t v = parse_int(s);
            if (v < lo) throw std::invalid_argument("must be >= " + std::to_string(lo));
            acc(c) = static_cast<std::remove_reference_t<decltype(acc(c))>>(v);
          }};
}

template <class Acc>
Field boolean(std::string sec, std::string key, Acc acc) {
  return {sec, key, [acc](const RunConfig& c) { return std::string(acc(const_cast<RunConfig&>(c)) ? "true" : "false"); },
          [acc](RunConfig& c, const std::string& s) { acc(c) = parse_bool(s); }};
}

template <class Acc>
Field sizes(std::string sec, std::string key, Acc acc) {
  return {sec, key, [acc](const RunConfig& c) { return fmt_sizes(acc(const_cast<RunConfig&>(c))); },
          [acc](RunConfig& c, const std::string& s) { acc(c) = parse_sizes(s); }};
}

#define REF(expr) [](RunConfig& c) -> auto& { return c.expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      real("radar", "revisit_interval_s", REF(env.tracking.motion.revisit_interval), kPositive),
      real("radar", "sigma_w2", REF(env.tracking.motion.sigma_w2), kNonNegative),
      real("radar", "snr0", REF(env.tracking.snr.snr0), kPositive),
      real("radar", "tau0_s", REF(env.tracking.snr.tau0), kPositive),
      real("radar", "r0_m", REF(env.tracking.snr.r0), kPositive),
      real("radar", "sigma_r0_sq", REF(env.tracking.snr.sigma_r0_sq), kPositive),
      real("radar", "sigma_th0_sq", REF(env.tracking.snr.sigma_th0_sq), kPositive),
      real("radar", "min_dwell_fraction", REF(env.tracking.min_dwell_fraction), kHalfOpenUnit),
      real("radar", "min_linearization_range_m", REF(env.tracking.min_linearization_range), kNonNegative),

      real("scan", "pfa", REF(env.scan.pfa), Check{[](double v) { return v > 0.0 && v < 0.5; }, "must lie in (0, 0.5)"}),
      real("scan", "phase_delay_deg", REF(env.scan.phase_delay_deg), kDegrees),
      {"scan", "swerling_case",
       [](const RunConfig& c) { return std::to_string(static_cast<int>(c.env.scan.swerling)); },
       [](RunConfig& c, const std::string& s) {
         const std::int64_t v = parse_int(s);
         if (v < 0 || v > 4) throw std::invalid_argument("must be one of 0, 1, 2, 3, 4");
         c.env.scan.swerling = static_cast<SwerlingCase>(v);
       }},
      real("scan", "region_radius_m", REF(env.region_radius), kPositive),
      real("scan", "confirm_threshold_m", REF(env.confirm_threshold), kPositive),
      integer("scan", "confirm_k", REF(env.confirm_k), 1),
      integer("scan", "max_slots", REF(env.max_slots), 1),

      real("scan_reference", "tau_beam_s", REF(scan_reference.tau_beam), kPositive),
      real("scan_reference", "range_m", REF(scan_reference.range), kPositive),
      real("scan_reference", "snr", REF(scan_reference.snr), kPositive),

      integer("spawn", "period", REF(env.spawn.spawn_period), 1),
      real("spawn", "prob", REF(env.spawn.spawn_prob), kProbability),
      integer("spawn", "max_age", REF(env.spawn.max_age), 1),
      integer("spawn", "max_targets", REF(env.spawn.max_targets), 1),
      real("spawn", "radius_min_m", REF(env.spawn.radius_min), kNonNegative),
      real("spawn", "radius_max_m", REF(env.spawn.radius_max), kPositive),
      real("spawn", "speed_min", REF(env.spawn.speed_min), kNonNegative),
      real("spawn", "speed_max", REF(env.spawn.speed_max), kNonNegative),

      real("objective", "beta", REF(env.beta), kNonNegative),
      real("objective", "theta_max", REF(env.theta_max), kHalfOpenUnit),
      real("objective", "lambda0", REF(env.lambda0), kNonNegative),
      real("objective", "dual_step", REF(train.dual.alpha), kNonNegative),
      integer("objective", "dual_window", REF(train.dual.window), 0),

      sizes("ddpg", "actor_hidden", REF(ddpg.actor_hidden)),
      sizes("ddpg", "critic_hidden", REF(ddpg.critic_hidden)),
      real("ddpg", "actor_lr", REF(ddpg.actor_lr), kNonNegative),
      real("ddpg", "critic_lr", REF(ddpg.critic_lr), kNonNegative),
      real("ddpg", "gamma", REF(ddpg.gamma), kDiscount),
      real("ddpg", "soft_update", REF(ddpg.soft_update), kProbability),
      integer("ddpg", "batch_size", REF(ddpg.batch_size), 1),
      integer("ddpg", "replay_capacity", REF(train.replay_capacity), 1),
      real("ddpg", "reward_scale", REF(ddpg.reward_scale), kPositive),
      real("ddpg", "final_layer_init", REF(ddpg.final_layer_init), kNonNegative),
      {"ddpg", "noise",
       [](const RunConfig& c) {
         return std::string(c.ddpg.noise == NoiseKind::kGaussian ? "gaussian" : "ou");
       },
       [](RunConfig& c, const std::string& s) {
         if (s == "gaussian") c.ddpg.noise = NoiseKind::kGaussian;
         else if (s == "ou") c.ddpg.noise = NoiseKind::kOrnsteinUhlenbeck;
         else throw std::invalid_argument("must be 'gaussian' or 'ou'");
       }},
      real("ddpg", "ou_theta", REF(ddpg.ou_theta), kProbability),
      real("ddpg", "noise_start", REF(train.noise_start), kNonNegative),
      real("ddpg", "noise_end", REF(train.noise_end), kNonNegative),
      real("ddpg", "noise_decay_share", REF(train.noise_decay_share), kProbability),
      boolean("ddpg", "normalize_obs", REF(norm.enabled)),
      boolean("ddpg", "mask_empty_slots", REF(ddpg.mask_by_state)),
      real("ddpg", "cost_scale_init", REF(norm.cost_scale), kPositive),
      real("ddpg", "cost_scale_rate", REF(norm.cost_scale_rate), kProbability),
      real("ddpg", "obs_clip", REF(norm.clip), kPositive),

      {"run", "seed", [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, const std::string& s) {
         const std::int64_t v = parse_int(s);
         if (v < 0) throw std::invalid_argument("must be >= 0");
         c.seed = static_cast<std::uint64_t>(v);
       }},
      integer("run", "slots", REF(train.slots), 0),
      integer("run", "episodes", REF(episodes), 1),
      integer("run", "eval_slots", REF(eval_slots), 0),
      real("run", "fraction", REF(fraction), kProbability),
      integer("run", "checkpoint_every", REF(train.checkpoint_every), 0),
  };
  return table;
}

#undef REF

const Field* find_field(const std::string& section, const std::string& key) {
  for (const Field& f : fields())
    if (f.section == section && f.key == key) return &f;
  return nullptr;
}

void apply_ptree(RunConfig& cfg, const boost::property_tree::ptree& pt) {
  for (const auto& [section, body] : pt) {
    if (body.empty()) throw ConfigError(section + ": key outside of any section");
    for (const auto& [key, value] : body) apply_setting(cfg, section + "." + key, value.data());
  }
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) throw ConfigError(dotted_key + ": expected section.key");
  const Field* f = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  if (!f) throw ConfigError(dotted_key + ": unknown key");
  try {
    f->set(cfg, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(dotted_key + ": " + e.what());
  }
}

void validate(const RunConfig& c) {
  const SpawnConfig& sp = c.env.spawn;
  if (sp.radius_min > sp.radius_max) throw ConfigError("spawn.radius_min_m: exceeds spawn.radius_max_m");
  if (sp.radius_max > c.env.region_radius) throw ConfigError("spawn.radius_max_m: exceeds scan.region_radius_m");
  if (sp.speed_min > sp.speed_max) throw ConfigError("spawn.speed_min: exceeds spawn.speed_max");
  if (c.train.noise_end > 0.0 && c.train.noise_start > 0.0 && c.train.noise_end > c.train.noise_start)
    throw ConfigError("ddpg.noise_end: exceeds ddpg.noise_start");
  if (c.ddpg.batch_size > c.train.replay_capacity) throw ConfigError("ddpg.batch_size: exceeds ddpg.replay_capacity");
}

EnvConfig RunConfig::env_config() const {
  EnvConfig e = env;
  e.scan.scan_const = ScanModel::calibrate_constant(scan_reference.tau_beam, scan_reference.range, scan_reference.snr);
  e.scan.region_radius = e.region_radius;
  return e;
}

DdpgConfig RunConfig::ddpg_config() const {
  DdpgConfig d = ddpg;
  d.state_dim = 2 * env.n_targets() + 1;
  d.action_dim = env.n_targets();
  d.action_high = env.revisit_interval();
  return d;
}

ObsNormalizer RunConfig::normalizer() const {
  ObsNormalizer n = norm;
  n.n = env.n_targets();
  n.t0 = env.revisit_interval();
  n.lambda0 = env.lambda0 > 0.0 ? env.lambda0 : 1.0;
  return n;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t = train;
  t.dual.lambda = env.lambda0;
  t.dual.theta_max = env.theta_max;
  t.dual.recent.clear();
  return t;
}

RunConfig load_config_text(const std::string& text) {
  std::istringstream is(text);
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(is, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  apply_ptree(cfg, pt);
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str());
}

void write_config(std::ostream& os, const RunConfig& cfg) {
  std::string current;
  for (const Field& f : fields()) {
    if (f.section != current) {
      if (!current.empty()) os << '\n';
      os << '[' << f.section << "]\n";
      current = f.section;
    }
    os << f.key << " = " << f.get(cfg) << '\n';
  }
}

std::string config_to_string(const RunConfig& cfg) {
  std::ostringstream os;
  write_config(os, cfg);
  return os.str();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Field& f : fields()) out.push_back(f.section + "." + f.key);
  return out;
}

}  // namespace cogradar
