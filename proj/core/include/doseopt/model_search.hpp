#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "doseopt/data.hpp"
#include "doseopt/fp_basis.hpp"

namespace doseopt {

enum class SearchMode { enumerate_all, mjmcmc };

struct EnsembleEntry {
  ModelIndex gamma;
  double log_evidence = 0.0;
  double log_prior = 0.0;
  double pmp = 0.0;  // posterior model probability, renormalized over entries
};

// Every distinct valid model scored during a search, with exact-evidence
// posterior weights. Entries are sorted by log_evidence + log_prior
// descending, ties broken by the ModelIndex total order.
struct PosteriorEnsemble {
  std::vector<EnsembleEntry> entries;
  Family family = Family::gaussian;
  SearchMode search_mode = SearchMode::enumerate_all;
  double g = 0.0;  // shrinkage the models were scored with
  std::uint64_t seed = 0;
  std::uint64_t visited_count = 0;  // distinct models scored, invalid included
};

// Uniform over the 2^16 inclusion masks: 16 * log(1/2) when valid, -inf
// otherwise. Invalid means rank failure, non-convergence or a max_terms
// violation.
double model_log_prior(const ModelIndex& gamma, bool valid = true);

// min(16, distinct doses - 2): with centering, at most distinct-1 slope
// columns are identifiable; one more is held back as safety margin.
int default_max_terms(const DoseResponseData& data);

// Log evidence of a single model, or nullopt when the model is invalid.
// Shared by both searches so their scores agree exactly.
std::optional<double> score_model(const DoseResponseData& data, ModelIndex gamma,
                                  double g, int max_terms,
                                  double rcond_threshold = kDefaultRcondThreshold);

// Exhaustive scan of all 65536 masks (models over max_terms are scored
// invalid without fitting). Throws InfeasibleModelSpaceError when no model
// is valid. Worker count follows thread_budget(); results are independent
// of scheduling.
PosteriorEnsemble enumerate_models(const DoseResponseData& data, double g,
                                   int max_terms, int threads = 0);

struct MjmcmcOptions {
  double p_single_flip = 0.6;  // remaining 0.2 goes to the mode jump
  double p_double_flip = 0.2;
  int jump_bits_min = 4;
  int jump_bits_max = 8;
  int max_terms = -1;  // -1: default_max_terms(data)
};

// Mode-jumping MCMC over inclusion masks starting from the null model.
// Proposal mixture: single-bit flip, double-bit flip, or a large random
// flip followed by a greedy hill climb and one randomizing bit flip.
// Acceptance uses exp(delta of log_evidence + log_prior); invalid models
// propose with -inf score. The returned ensemble contains every distinct
// model scored anywhere along the way (hill-climb probes included).
PosteriorEnsemble mjmcmc(const DoseResponseData& data, double g, int iterations,
                         std::uint64_t seed, const MjmcmcOptions& options = {});

// Highest-probability model; ties resolved by the ModelIndex total order.
ModelIndex hpm(const PosteriorEnsemble& ensemble);

// Grid search for the shrinkage g maximizing the summed evidence of the
// null model plus the 16 singletons. Grid is log2-spaced over [4, 2^22].
double empirical_bayes_g(const DoseResponseData& data);

}  // namespace doseopt
