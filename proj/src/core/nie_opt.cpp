// SPDX-License-Identifier: Apache-2.0
#include "nie_opt.hpp"

#include "energy.hpp"
#include "error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace rissat {

namespace {

constexpr std::size_t kSampleChunk = 256;

/// Per-scenario data for evaluating every draw with all elements active:
/// each panel collapses to one complex sum, so a draw costs O(K).
struct ActiveLink {
  LinkTerms terms;
  std::vector<std::complex<double>> panel_sum;
  double consumption = 0.0;

  ActiveLink(const Scenario& scenario, std::span<const double> theta) : terms(link_terms(scenario)) {
    if (theta.size() != terms.element_amp.size())
      throw Error(ErrorKind::Dimension, "phase vector length differs from element count");
    panel_sum.assign(terms.ris_count(), {0.0, 0.0});
    for (std::size_t k = 0; k < terms.ris_count(); ++k)
      for (std::size_t i = terms.offsets[k]; i < terms.offsets[k + 1]; ++i)
        panel_sum[k] += std::polar(terms.element_amp[i], -(terms.ris_phase[k] + theta[i]));
    const std::vector<std::uint8_t> on(theta.size(), 1);
    consumption = total_consumption(scenario.rf.tx_power_w, scenario.ris_count(), scenario.consumption, on);
  }

  std::complex<double> signal(const ShadowDraws& draws, std::size_t m) const {
    std::complex<double> s = std::polar(terms.direct_amp * amplitude_scale(draws.su_db[m]), -terms.direct_phase);
    for (std::size_t k = 0; k < panel_sum.size(); ++k) s += amplitude_scale(draws.ru(m, k)) * panel_sum[k];
    return s;
  }
};

void check_draws(const Scenario& scenario, const ShadowDraws& draws) {
  if (draws.samples == 0) throw Error(ErrorKind::Domain, "Monte Carlo needs at least one sample");
  if (draws.ris != scenario.ris_count())
    throw Error(ErrorKind::Dimension, "shadowing draws do not match the number of RIS");
}

double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

void AdamConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error(ErrorKind::Domain, "Adam learning_rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw Error(ErrorKind::Domain, "Adam beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw Error(ErrorKind::Domain, "Adam beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::Domain, "Adam epsilon must be positive");
  if (mc_samples < 1 || eval_samples < 1) throw Error(ErrorKind::Domain, "Monte Carlo sample counts must be >= 1");
}

AdamState AdamState::start(std::vector<double> theta) {
  AdamState s;
  s.m.assign(theta.size(), 0.0);
  s.v.assign(theta.size(), 0.0);
  s.m_hat.assign(theta.size(), 0.0);
  s.v_hat.assign(theta.size(), 0.0);
  s.theta = std::move(theta);
  return s;
}

ShadowDraws draw_shadowing(const ShadowingModel& model, std::size_t ris_count, std::size_t samples,
                           const RngStream& rng) {
  ShadowDraws d;
  d.samples = samples;
  d.ris = ris_count;
  d.su_db.resize(samples);
  d.ru_db.resize(samples * ris_count);
  parallel_chunks(samples, kSampleChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      SplitMix64 gen = rng.at(m);
      d.su_db[m] = sample_shadowing(model, gen, ShadowLink::SatUser);
      for (std::size_t k = 0; k < ris_count; ++k)
        d.ru_db[m * ris_count + k] = sample_shadowing(model, gen, ShadowLink::RisUser);
    }
  });
  return d;
}

double expected_eta(const Scenario& scenario, std::span<const double> theta, const ShadowDraws& draws) {
  check_draws(scenario, draws);
  const ActiveLink link(scenario, theta);
  std::vector<double> partial(chunk_count(draws.samples, kSampleChunk), 0.0);
  parallel_chunks(draws.samples, kSampleChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t m = begin; m < end; ++m) acc += std::norm(link.signal(draws, m));
    partial[c] = acc;
  });
  const double mean_norm = std::accumulate(partial.begin(), partial.end(), 0.0) / static_cast<double>(draws.samples);
  return link.terms.tx_power_w * mean_norm / link.consumption;
}

double expected_eta(const Scenario& scenario, std::span<const double> theta, std::size_t samples,
                    const RngStream& rng) {
  return expected_eta(scenario, theta, draw_shadowing(scenario.shadowing, scenario.ris_count(), samples, rng));
}

std::vector<double> mc_gradient(const Scenario& scenario, std::span<const double> theta,
                                const ShadowDraws& draws) {
  check_draws(scenario, draws);
  const ActiveLink link(scenario, theta);
  const std::size_t K = link.panel_sum.size();

  // C_k = mean over draws of scale_k * conj(S); the gradient is linear in it.
  const std::size_t chunks = chunk_count(draws.samples, kSampleChunk);
  std::vector<std::complex<double>> partial(chunks * K);
  parallel_chunks(draws.samples, kSampleChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const std::complex<double> conj_s = std::conj(link.signal(draws, m));
      for (std::size_t k = 0; k < K; ++k) partial[c * K + k] += amplitude_scale(draws.ru(m, k)) * conj_s;
    }
  });
  std::vector<std::complex<double>> c_k(K);
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t k = 0; k < K; ++k) c_k[k] += partial[c * K + k];
  for (auto& c : c_k) c /= static_cast<double>(draws.samples);

  const auto& t = link.terms;
  const double factor = 2.0 * t.tx_power_w / link.consumption;
  std::vector<double> grad(theta.size());
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = t.offsets[k]; i < t.offsets[k + 1]; ++i)
      grad[i] = factor * t.element_amp[i] * std::imag(c_k[k] * std::polar(1.0, -(t.ris_phase[k] + theta[i])));
  return grad;
}

std::vector<double> mc_gradient(const Scenario& scenario, std::span<const double> theta,
                                std::size_t samples, const RngStream& rng) {
  return mc_gradient(scenario, theta, draw_shadowing(scenario.shadowing, scenario.ris_count(), samples, rng));
}

AdamState adam_step(AdamState s, std::span<const double> grad, const AdamConfig& cfg) {
  if (grad.size() != s.theta.size()) throw Error(ErrorKind::Dimension, "gradient length differs from theta");
  ++s.t;
  const double t = static_cast<double>(s.t);
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);
  // Bias-corrected moments as debiased running means:
  //   m_hat_t = m_hat_{t-1} + (g - m_hat_{t-1}) (1 - b1) / (1 - b1^t),
  // which equals m_t / (1 - b1^t) and makes the first step exactly m_hat = g.
  const double gain1 = (1.0 - cfg.beta1) / bias1;
  const double gain2 = (1.0 - cfg.beta2) / bias2;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double g = grad[i];
    s.m[i] = cfg.beta1 * s.m[i] + (1.0 - cfg.beta1) * g;
    s.v[i] = cfg.beta2 * s.v[i] + (1.0 - cfg.beta2) * g * g;
    s.m_hat[i] += (g - s.m_hat[i]) * gain1;
    s.v_hat[i] += (g * g - s.v_hat[i]) * gain2;
    double next = s.theta[i] + cfg.learning_rate * s.m_hat[i] / (std::sqrt(s.v_hat[i]) + cfg.epsilon);
    if (cfg.boundary == PhaseBoundary::Clip) {
      next = std::clamp(next, 0.0, kTwoPi);
    } else if (next < 0.0 || next > kTwoPi) {
      next = std::fmod(next, kTwoPi);
      if (next < 0.0) next += kTwoPi;
    }
    s.theta[i] = next;
  }
  return s;
}

double effective_learning_rate(const AdamState& s, const AdamConfig& cfg) {
  if (s.v_hat.empty()) return 0.0;
  double acc = 0.0;
  for (double v : s.v_hat) acc += cfg.learning_rate / (std::sqrt(v) + cfg.epsilon);
  return acc / static_cast<double>(s.v_hat.size());
}

NieResult optimize_nie(const Scenario& scenario, const AdamConfig& cfg) {
  const RngStream rng{cfg.seed, fnv1a64("nie")};
  SplitMix64 gen = rng.child("init").at(0);
  std::vector<double> theta0(scenario.element_count());
  for (auto& x : theta0) x = kTwoPi * gen.uniform();
  return optimize_nie(scenario, cfg, std::move(theta0));
}

NieResult optimize_nie(const Scenario& scenario, const AdamConfig& cfg, std::vector<double> theta0) {
  cfg.validate();
  if (theta0.size() != scenario.element_count())
    throw Error(ErrorKind::Dimension, "initial phase vector length differs from element count");
  const RngStream rng{cfg.seed, fnv1a64("nie")};
  const std::size_t K = scenario.ris_count();
  const ShadowDraws eval = draw_shadowing(scenario.shadowing, K, cfg.eval_samples, rng.child("eval"));

  // Adam's epsilon is absolute while eta is tiny in absolute terms, so the
  // ascent runs on eta / eta_direct. The factor is constant in theta.
  NieResult out;
  {
    const ShadowRealization mean = mean_shadowing(scenario);
    const ComplexSignal direct = direct_signal(scenario, mean.su_db);
    const std::vector<std::uint8_t> on(scenario.element_count(), 1);
    const double eta_direct = energy_efficiency(
        scenario.rf.tx_power_w * direct.amplitude * direct.amplitude,
        total_consumption(scenario.rf.tx_power_w, K, scenario.consumption, on));
    out.gradient_scale = eta_direct > 0.0 ? 1.0 / eta_direct : 1.0;
  }

  AdamState state = AdamState::start(std::move(theta0));
  out.initial_expected_eta = expected_eta(scenario, state.theta, eval);
  out.initial_mean_phase = mean_of(state.theta);
  double previous = out.initial_expected_eta;
  std::size_t streak = 0;
  out.trace.records.reserve(cfg.max_iters);

  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    const ShadowDraws draws = draw_shadowing(scenario.shadowing, K, cfg.mc_samples, rng.child("grad").child(it));
    std::vector<double> grad = mc_gradient(scenario, state.theta, draws);
    for (auto& g : grad) g *= out.gradient_scale;
    state = adam_step(std::move(state), grad, cfg);

    const double eta = expected_eta(scenario, state.theta, eval);
    out.trace.records.push_back({it, eta, mean_of(state.theta), effective_learning_rate(state, cfg)});

    const double rel = std::abs(eta - previous) / std::max(std::abs(previous), 1e-300);
    streak = rel < cfg.convergence_tol ? streak + 1 : 0;
    previous = eta;
    if (streak >= cfg.patience) {
      out.trace.converged = true;
      break;
    }
  }
  out.final_expected_eta = previous;
  out.theta = std::move(state.theta);
  return out;
}

std::size_t select_best_ris(const Scenario& scenario, std::span<const double> theta_star, RisSelection mode) {
  if (theta_star.size() != scenario.element_count())
    throw Error(ErrorKind::Dimension, "phase vector length differs from element count");
  const std::size_t K = scenario.ris_count();
  std::vector<double> score(K);
  if (mode == RisSelection::Isolated) {
    for (std::size_t k = 0; k < K; ++k) {
      const Scenario single = scenario.isolate(k);
      const auto slice = theta_star.subspan(scenario.offset(k), scenario.panels[k].size());
      const std::vector<std::uint8_t> on(slice.size(), 1);
      score[k] = link_eta(single, slice, on, mean_shadowing(single));
    }
  } else {
    const ShadowRealization mean = mean_shadowing(scenario);
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<std::uint8_t> states(scenario.element_count(), 1);
      std::fill_n(states.begin() + static_cast<std::ptrdiff_t>(scenario.offset(k)), scenario.panels[k].size(), 0);
      score[k] = -link_eta(scenario, theta_star, states, mean);
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < K; ++k)
    if (score[k] > score[best]) best = k;
  return best;
}

std::vector<PerRisMax> per_ris_max_eta(const Scenario& scenario, const AdamConfig& cfg) {
  std::vector<PerRisMax> rows;
  for (std::size_t k = 0; k < scenario.ris_count(); ++k) {
    NieResult r = optimize_nie(scenario.isolate(k), cfg);
    rows.push_back({k, r.final_expected_eta, mean_of(r.theta), std::move(r.theta)});
  }
  return rows;
}

} // namespace rissat
