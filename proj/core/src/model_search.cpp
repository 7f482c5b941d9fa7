#include "doseopt/model_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "doseopt/errors.hpp"
#include "doseopt/glm_laplace.hpp"
#include "doseopt/linear_model.hpp"
#include "doseopt/parallel.hpp"
#include "doseopt/rng.hpp"

namespace doseopt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaskCount = 1 << kNumTransforms;

double logsumexp(std::span<const double> v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

void finalize_entries(PosteriorEnsemble& ensemble) {
  if (ensemble.entries.empty())
    throw InfeasibleModelSpaceError(
        "no valid model: every candidate failed rank, convergence or size checks");
  std::sort(ensemble.entries.begin(), ensemble.entries.end(),
            [](const EnsembleEntry& a, const EnsembleEntry& b) {
              const double sa = a.log_evidence + a.log_prior;
              const double sb = b.log_evidence + b.log_prior;
              if (sa != sb) return sa > sb;
              return a.gamma < b.gamma;
            });
  std::vector<double> scores;
  scores.reserve(ensemble.entries.size());
  for (const auto& e : ensemble.entries) scores.push_back(e.log_evidence + e.log_prior);
  const double lse = logsumexp(scores);
  for (std::size_t i = 0; i < scores.size(); ++i)
    ensemble.entries[i].pmp = std::exp(scores[i] - lse);
}

}  // namespace

double model_log_prior(const ModelIndex&, bool valid) {
  return valid ? kNumTransforms * std::log(0.5) : kNegInf;
}

int default_max_terms(const DoseResponseData& data) {
  return std::min(kNumTransforms, data.distinct_dose_count() - 2);
}

std::optional<double> score_model(const DoseResponseData& data, ModelIndex gamma,
                                  double g, int max_terms, double rcond_threshold) {
  const int p = gamma.size();
  if (p > max_terms) return std::nullopt;
  if (data.n() < p + 2) return std::nullopt;

  const std::span<const double> doses(data.doses.data(), data.doses.size());
  const DesignMatrix design = build_design(doses, gamma, rcond_threshold);
  if (!design.rank_ok) return std::nullopt;

  try {
    if (data.family == Family::gaussian) {
      return fit_gaussian(data.responses, design, g).log_marginal;
    }
    const LogisticFit fit = fit_logistic_map(data.responses, design, g);
    if (!fit.converged) return std::nullopt;
    return log_marginal_laplace(fit, design, g);
  } catch (const DegenerateDataError&) {
    return std::nullopt;
  } catch (const NumericalError&) {
    return std::nullopt;
  }
}

PosteriorEnsemble enumerate_models(const DoseResponseData& data, double g,
                                   int max_terms, int threads) {
  data.validate();
  if (max_terms < 0 || max_terms > kNumTransforms)
    throw std::invalid_argument("max_terms must be in [0, 16]");

  std::vector<double> scores(kMaskCount, kNegInf);
  std::vector<char> valid(kMaskCount, 0);

  // 256 contiguous slices; a worker owns a slice, so the fill order inside
  // the arrays never depends on scheduling.
  constexpr int kSlices = 256;
  constexpr int kPerSlice = kMaskCount / kSlices;
  parallel_for(
      kSlices,
      [&](int slice) {
        for (int off = 0; off < kPerSlice; ++off) {
          const int bits = slice * kPerSlice + off;
          const auto s =
              score_model(data, ModelIndex(static_cast<std::uint16_t>(bits)), g, max_terms);
          if (s) {
            scores[bits] = *s;
            valid[bits] = 1;
          }
        }
      },
      threads);

  PosteriorEnsemble ensemble;
  ensemble.family = data.family;
  ensemble.search_mode = SearchMode::enumerate_all;
  ensemble.g = g;
  ensemble.visited_count = kMaskCount;
  for (int bits = 0; bits < kMaskCount; ++bits) {
    if (!valid[bits]) continue;
    const ModelIndex gamma(static_cast<std::uint16_t>(bits));
    ensemble.entries.push_back(
        {gamma, scores[bits], model_log_prior(gamma, true), 0.0});
  }
  finalize_entries(ensemble);
  return ensemble;
}

PosteriorEnsemble mjmcmc(const DoseResponseData& data, double g, int iterations,
                         std::uint64_t seed, const MjmcmcOptions& options) {
  data.validate();
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (options.jump_bits_min < 1 || options.jump_bits_max < options.jump_bits_min ||
      options.jump_bits_max > kNumTransforms)
    throw std::invalid_argument("bad mode-jump width range");
  const int max_terms =
      options.max_terms < 0 ? std::max(default_max_terms(data), 0) : options.max_terms;

  // Posterior score cache; nullopt marks an invalid model so it is never
  // refit. The ensemble is read off this cache at the end.
  std::vector<std::optional<std::optional<double>>> cache(kMaskCount);
  std::uint64_t distinct_scored = 0;
  const auto posterior_score = [&](ModelIndex gamma) -> double {
    auto& slot = cache[gamma.bits()];
    if (!slot.has_value()) {
      slot = score_model(data, gamma, g, max_terms);
      ++distinct_scored;
    }
    const std::optional<double>& s = *slot;
    return s ? *s + model_log_prior(gamma, true) : kNegInf;
  };

  Rng rng(seed);
  const auto random_bit = [&] { return 1 + static_cast<int>(rng.integer(kNumTransforms)); };

  ModelIndex current(0);
  double current_score = posterior_score(current);

  for (int it = 0; it < iterations; ++it) {
    ModelIndex proposal = current;
    const double u = rng.uniform();
    if (u < options.p_single_flip) {
      proposal = current.with_flipped(random_bit());
    } else if (u < options.p_single_flip + options.p_double_flip) {
      const int k1 = random_bit();
      int k2 = random_bit();
      while (k2 == k1) k2 = random_bit();
      proposal = current.with_flipped(k1).with_flipped(k2);
    } else {
      // Mode jump: a wide random flip lands far away, a greedy climb walks
      // to the local mode, one extra flip keeps the proposal stochastic.
      const int width = options.jump_bits_min +
                        static_cast<int>(rng.integer(
                            options.jump_bits_max - options.jump_bits_min + 1));
      std::uint16_t flip_mask = 0;
      int chosen = 0;
      while (chosen < width) {
        const std::uint16_t bit = static_cast<std::uint16_t>(1u << (random_bit() - 1));
        if (flip_mask & bit) continue;
        flip_mask |= bit;
        ++chosen;
      }
      ModelIndex state(static_cast<std::uint16_t>(current.bits() ^ flip_mask));
      double state_score = posterior_score(state);
      for (int step = 0; step < 64; ++step) {
        ModelIndex best = state;
        double best_score = state_score;
        for (int k = 1; k <= kNumTransforms; ++k) {
          const ModelIndex neighbor = state.with_flipped(k);
          const double s = posterior_score(neighbor);
          if (s > best_score) {
            best = neighbor;
            best_score = s;
          }
        }
        if (best == state) break;
        state = best;
        state_score = best_score;
      }
      proposal = state.with_flipped(random_bit());
    }

    const double proposal_score = posterior_score(proposal);
    const double u_accept = rng.uniform();
    bool accept;
    if (proposal_score == kNegInf) {
      accept = false;
    } else if (current_score == kNegInf) {
      accept = true;
    } else {
      accept = std::log(std::max(u_accept, 1e-300)) < proposal_score - current_score;
    }
    if (accept) {
      current = proposal;
      current_score = proposal_score;
    }
  }

  PosteriorEnsemble ensemble;
  ensemble.family = data.family;
  ensemble.search_mode = SearchMode::mjmcmc;
  ensemble.g = g;
  ensemble.seed = seed;
  ensemble.visited_count = distinct_scored;
  for (int bits = 0; bits < kMaskCount; ++bits) {
    const auto& slot = cache[bits];
    if (!slot.has_value() || !slot->has_value()) continue;
    const ModelIndex gamma(static_cast<std::uint16_t>(bits));
    ensemble.entries.push_back({gamma, **slot, model_log_prior(gamma, true), 0.0});
  }
  finalize_entries(ensemble);
  return ensemble;
}

ModelIndex hpm(const PosteriorEnsemble& ensemble) {
  if (ensemble.entries.empty())
    throw std::invalid_argument("hpm of an empty ensemble");
  const EnsembleEntry* best = &ensemble.entries[0];
  for (const auto& e : ensemble.entries) {
    const double se = e.log_evidence + e.log_prior;
    const double sb = best->log_evidence + best->log_prior;
    if (se > sb || (se == sb && e.gamma < best->gamma)) best = &e;
  }
  return best->gamma;
}

double empirical_bayes_g(const DoseResponseData& data) {
  data.validate();
  std::vector<ModelIndex> candidates;
  candidates.push_back(ModelIndex(0));
  for (int k = 1; k <= kNumTransforms; ++k)
    candidates.push_back(ModelIndex::from_transforms({k}));

  double best_g = 0.0;
  double best_total = kNegInf;
  for (double e = 2.0; e <= 22.0 + 1e-9; e += 0.5) {
    const double g = std::pow(2.0, e);
    std::vector<double> evidences;
    for (const ModelIndex& gamma : candidates) {
      const auto s = score_model(data, gamma, g, kNumTransforms);
      if (s) evidences.push_back(*s);
    }
    if (evidences.empty()) continue;
    const double total = logsumexp(evidences);
    if (total > best_total) {
      best_total = total;
      best_g = g;
    }
  }
  if (best_g == 0.0)
    throw InfeasibleModelSpaceError("no valid model among the null and singletons");
  return best_g;
}

}  // namespace doseopt
