#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "narmine/corpus.hpp"

namespace narmine {

inline constexpr std::uint64_t kDefaultSeed = 42;

struct LdaConfig {
  int k = 1;
  double alpha = 0.0;  // <= 0 means the 50/k default
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 800;
  std::uint64_t seed = kDefaultSeed;
  bool validate_counts = false;  // per-sweep conservation checks

  double resolved_alpha() const { return alpha > 0.0 ? alpha : 50.0 / k; }
};

struct LdaModel {
  std::vector<std::vector<double>> phi;    // k x V, rows sum to 1
  std::vector<std::vector<double>> theta;  // D x k, rows sum to 1
  std::vector<std::vector<int>> assignments;  // final-sweep topic labels
  LdaConfig config;
  std::uint64_t corpus_digest = 0;
};

// Collapsed Gibbs sampling; phi/theta averaged over post-burn-in
// sweeps. Deterministic given (corpus, cfg).
LdaModel fit_lda(const Corpus& corpus, const LdaConfig& cfg);

std::vector<std::pair<std::string, double>> top_words(const LdaModel& model,
                                                      const Corpus& corpus,
                                                      int topic, int n);

const std::vector<double>& doc_topics(const LdaModel& model, int doc);

struct CoherenceReport {
  std::vector<double> per_topic;
  double mean = 0.0;
  int top_m = 10;
};

// UMass coherence with +1 smoothing and natural log over the ordered
// top-m words of each topic.
CoherenceReport umass_coherence(const LdaModel& model, const Corpus& corpus,
                                const DocFrequencies& docfreq, int top_m);

struct SweepEntry {
  int k = 0;
  double mean_coherence = 0.0;
  std::uint64_t seed = 0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // sorted by k ascending
  int best_k = 0;                   // max mean coherence, smallest k wins ties
};

SweepResult sweep_k(const Corpus& corpus, int k_min, int k_max,
                    const LdaConfig& base_cfg, int top_m);

// argmax of mean coherence; ties go to the smallest k
int select_best_k(const std::vector<SweepEntry>& entries);

// splitmix64 of (base ^ k); the per-k seed derivation used by sweep_k
std::uint64_t mix_seed(std::uint64_t base, int k);

std::string model_json(const LdaModel& model, const Corpus& corpus);
std::string sweep_csv(const SweepResult& sweep);

}  // namespace narmine
