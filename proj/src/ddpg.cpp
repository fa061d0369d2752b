#include "cogradar/ddpg.hpp"

#include <algorithm>
#include <cmath>

namespace cogradar {

Vec ObsNormalizer::normalize(std::span<const double> raw) const {
  if (!enabled) return Vec(raw.begin(), raw.end());
  if (raw.size() != 2 * n + 1) throw DimensionError("ObsNormalizer: observation length");
  Vec out(raw.size());
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = raw[i] / cost_scale;
    out[n + i] = raw[n + i] / t0;
  }
  out[2 * n] = raw[2 * n] / lambda0;
  for (double& v : out) v = std::clamp(v, -clip, clip);
  return out;
}

void ObsNormalizer::observe(std::span<const double> raw) {
  if (!enabled) return;
  double sum = 0.0;
  std::size_t active = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i] > 0.0) {
      sum += raw[i];
      ++active;
    }
  }
  if (active == 0) return;
  cost_scale += cost_scale_rate * (sum / static_cast<double>(active) - cost_scale);
  cost_scale = std::max(cost_scale, 1e-6);
}

double noise_sigma(double start, double end, std::int64_t slot, std::int64_t decay_slots) {
  if (decay_slots <= 0 || slot >= decay_slots) return end;
  if (start <= 0.0 || end <= 0.0) return start + (end - start) * static_cast<double>(slot) / static_cast<double>(decay_slots);
  const double frac = static_cast<double>(slot) / static_cast<double>(decay_slots);
  return start * std::pow(end / start, frac);
}

DdpgAgent::DdpgAgent(DdpgConfig cfg, ObsNormalizer norm, RngStream& init_rng)
    : cfg_(std::move(cfg)), norm_(norm) {
  if (norm_.enabled && 2 * norm_.n + 1 != cfg_.state_dim) {
    throw DimensionError("DdpgAgent: normalizer size does not match the state dimension");
  }
  std::vector<std::size_t> a_sizes{cfg_.state_dim};
  a_sizes.insert(a_sizes.end(), cfg_.actor_hidden.begin(), cfg_.actor_hidden.end());
  a_sizes.push_back(cfg_.action_dim);
  std::vector<std::size_t> c_sizes{cfg_.state_dim + cfg_.action_dim};
  c_sizes.insert(c_sizes.end(), cfg_.critic_hidden.begin(), cfg_.critic_hidden.end());
  c_sizes.push_back(1);

  actor_ = Mlp(a_sizes, OutputActivation::kSigmoid);
  critic_ = Mlp(c_sizes, OutputActivation::kIdentity);
  actor_.init(init_rng, cfg_.final_layer_init);
  critic_.init(init_rng, cfg_.final_layer_init);
  target_actor_ = actor_;
  target_critic_ = critic_;
  actor_opt_ = AdamState(actor_.n_params());
  critic_opt_ = AdamState(critic_.n_params());
  ou_state_.assign(cfg_.action_dim, 0.0);
}

Vec DdpgAgent::act(std::span<const double> raw_obs) const {
  const Vec s = norm_.normalize(raw_obs);
  Vec a = actor_.forward(s, 1);
  for (double& v : a) v *= cfg_.action_high;
  return a;
}

Vec DdpgAgent::act(std::span<const double> raw_obs, double sigma, RngStream& rng) {
  Vec a = act(raw_obs);
  if (sigma <= 0.0) return a;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double noise = sigma * rng.normal();
    if (cfg_.noise == NoiseKind::kOrnsteinUhlenbeck) {
      ou_state_[j] += -cfg_.ou_theta * ou_state_[j] + noise;
      noise = ou_state_[j];
    }
    a[j] = std::clamp(a[j] + noise, 0.0, cfg_.action_high);
  }
  return a;
}

Vec DdpgAgent::critic_input(std::span<const double> states_norm, std::span<const double> actions_norm,
                            std::size_t batch) const {
  const std::size_t sd = cfg_.state_dim;
  const std::size_t ad = cfg_.action_dim;
  Vec x(batch * (sd + ad));
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy_n(states_norm.begin() + static_cast<std::ptrdiff_t>(b * sd), sd, x.begin() + static_cast<std::ptrdiff_t>(b * (sd + ad)));
    std::copy_n(actions_norm.begin() + static_cast<std::ptrdiff_t>(b * ad), ad,
                x.begin() + static_cast<std::ptrdiff_t>(b * (sd + ad) + sd));
  }
  return x;
}

void DdpgAgent::apply_mask(std::span<const double> raw_state, std::span<double> action) const {
  if (!cfg_.mask_by_state) return;
  for (std::size_t j = 0; j < action.size(); ++j)
    if (!(raw_state[j] > 0.0)) action[j] = 0.0;
}

double DdpgAgent::q_value(std::span<const double> raw_obs, std::span<const double> action) const {
  const Vec s = norm_.normalize(raw_obs);
  Vec a(action.begin(), action.end());
  for (double& v : a) v /= cfg_.action_high;
  apply_mask(raw_obs, a);
  return critic_.forward(critic_input(s, a, 1), 1)[0] * cfg_.reward_scale;
}

std::optional<UpdateStats> DdpgAgent::update(const ReplayBuffer& buffer, RngStream& rng) {
  const std::size_t batch = cfg_.batch_size;
  if (buffer.size() < batch || batch == 0) return std::nullopt;
  const std::size_t sd = cfg_.state_dim;
  const std::size_t ad = cfg_.action_dim;

  Vec s(batch * sd), a(batch * ad), r(batch), s2(batch * sd);
  const auto idx = buffer.sample_indices(batch, rng);
  std::vector<const Transition*> picked(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    const Transition& t = buffer.at(idx[b]);
    picked[b] = &t;
    const Vec sn = norm_.normalize(t.state);
    const Vec s2n = norm_.normalize(t.next_state);
    std::copy(sn.begin(), sn.end(), s.begin() + static_cast<std::ptrdiff_t>(b * sd));
    std::copy(s2n.begin(), s2n.end(), s2.begin() + static_cast<std::ptrdiff_t>(b * sd));
    for (std::size_t j = 0; j < ad; ++j) a[b * ad + j] = t.action[j] / cfg_.action_high;
    apply_mask(t.state, std::span<double>(a).subspan(b * ad, ad));
    r[b] = t.reward / cfg_.reward_scale;
  }

  // Critic: regress Q(s, a) onto r + gamma Q'(s', mu'(s')).
  Vec a2 = target_actor_.forward(s2, batch);
  for (std::size_t b = 0; b < batch; ++b) apply_mask(picked[b]->next_state, std::span<double>(a2).subspan(b * ad, ad));
  const Vec q2 = target_critic_.forward(critic_input(s2, a2, batch), batch);
  MlpTape critic_tape;
  const Vec q = critic_.forward(critic_input(s, a, batch), batch, &critic_tape);
  UpdateStats stats;
  Vec dq(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    const double diff = q[b] - (r[b] + cfg_.gamma * q2[b]);
    stats.critic_loss += diff * diff;
    dq[b] = 2.0 * diff / static_cast<double>(batch);
  }
  stats.critic_loss /= static_cast<double>(batch);
  const MlpGradients cg = critic_.backward(critic_tape, dq);
  adam_step(critic_.params(), cg.params, critic_opt_, cfg_.critic_lr);

  // Actor: ascend Q(s, mu(s)) through the updated critic.
  MlpTape actor_tape;
  const Vec mu = actor_.forward(s, batch, &actor_tape);
  Vec mu_masked = mu;
  for (std::size_t b = 0; b < batch; ++b)
    apply_mask(picked[b]->state, std::span<double>(mu_masked).subspan(b * ad, ad));
  MlpTape q_tape;
  const Vec q_mu = critic_.forward(critic_input(s, mu_masked, batch), batch, &q_tape);
  for (double v : q_mu) stats.actor_objective += v;
  stats.actor_objective /= static_cast<double>(batch);
  const Vec up(batch, -1.0 / static_cast<double>(batch));
  const MlpGradients qg = critic_.backward(q_tape, up, false, true);
  Vec dmu(batch * ad);
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t j = 0; j < ad; ++j) dmu[b * ad + j] = qg.input[b * (sd + ad) + sd + j];
  for (std::size_t b = 0; b < batch; ++b) {
    // masked entries are constants, so they pass no gradient to the actor
    std::span<double> g = std::span<double>(dmu).subspan(b * ad, ad);
    if (cfg_.mask_by_state)
      for (std::size_t j = 0; j < ad; ++j)
        if (!(picked[b]->state[j] > 0.0)) g[j] = 0.0;
  }
  const MlpGradients ag = actor_.backward(actor_tape, dmu);
  adam_step(actor_.params(), ag.params, actor_opt_, cfg_.actor_lr);

  soft_update_targets();
  return stats;
}

void DdpgAgent::soft_update_targets() {
  const double rho = cfg_.soft_update;
  auto blend = [rho](std::span<const double> online, std::span<double> target) {
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = rho * online[i] + (1.0 - rho) * target[i];
  };
  blend(actor_.params(), target_actor_.params());
  blend(critic_.params(), target_critic_.params());
}

}  // namespace cogradar
