#include "narmine/lda.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace narmine {

namespace {

// uniform double in [0, 1) from the top 53 bits
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_config(const LdaConfig& cfg) {
  if (cfg.k < 1) throw UsageError("k must be >= 1");
  if (cfg.resolved_alpha() <= 0.0) throw UsageError("alpha must be > 0");
  if (cfg.beta <= 0.0) throw UsageError("beta must be > 0");
  if (cfg.iterations < 1) throw UsageError("iterations must be >= 1");
  if (cfg.burn_in < 1 || cfg.burn_in >= cfg.iterations) {
    throw UsageError("burn_in must satisfy 1 <= burn_in < iterations");
  }
}

struct GibbsState {
  std::vector<std::vector<long long>> doc_topic;   // D x k
  std::vector<std::vector<long long>> topic_word;  // k x V
  std::vector<long long> topic_total;              // k
  std::vector<std::vector<int>> labels;            // per-token topics
};

void validate_conservation(const GibbsState& st, const std::vector<std::vector<int>>& docs) {
  const int k = static_cast<int>(st.topic_total.size());
  for (size_t d = 0; d < docs.size(); ++d) {
    long long sum = std::accumulate(st.doc_topic[d].begin(), st.doc_topic[d].end(), 0ll);
    if (sum != static_cast<long long>(docs[d].size())) {
      throw std::logic_error("doc-topic counts do not sum to document length");
    }
  }
  for (int t = 0; t < k; ++t) {
    long long sum = std::accumulate(st.topic_word[t].begin(), st.topic_word[t].end(), 0ll);
    if (sum != st.topic_total[t]) {
      throw std::logic_error("topic-word counts do not sum to topic total");
    }
  }
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, int k) {
  std::uint64_t z = base ^ static_cast<std::uint64_t>(k);
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

LdaModel fit_lda(const Corpus& corpus, const LdaConfig& cfg) {
  check_config(cfg);
  const auto& docs = corpus.content_ids();
  const int num_docs = static_cast<int>(docs.size());
  const int vocab = corpus.vocab_size();
  const int k = cfg.k;
  const double alpha = cfg.resolved_alpha();
  const double beta = cfg.beta;

  const long long total_tokens = corpus.content_token_count();
  if (total_tokens == 0) throw DataError("corpus has no content tokens");
  if (k > total_tokens) {
    std::cerr << "warning: k (" << k << ") exceeds content token count (" << total_tokens
              << ")\n";
  }

  std::mt19937_64 rng(cfg.seed);
  GibbsState st;
  st.doc_topic.assign(num_docs, std::vector<long long>(k, 0));
  st.topic_word.assign(k, std::vector<long long>(vocab, 0));
  st.topic_total.assign(k, 0);
  st.labels.resize(num_docs);

  for (int d = 0; d < num_docs; ++d) {
    st.labels[d].resize(docs[d].size());
    for (size_t i = 0; i < docs[d].size(); ++i) {
      const int t = static_cast<int>(rng() % static_cast<std::uint64_t>(k));
      st.labels[d][i] = t;
      ++st.doc_topic[d][t];
      ++st.topic_word[t][docs[d][i]];
      ++st.topic_total[t];
    }
  }

  std::vector<std::vector<double>> phi_acc(k, std::vector<double>(vocab, 0.0));
  std::vector<std::vector<double>> theta_acc(num_docs, std::vector<double>(k, 0.0));
  const int samples = cfg.iterations - cfg.burn_in;

  std::vector<double> cum(k);
  for (int sweep = 0; sweep < cfg.iterations; ++sweep) {
    for (int d = 0; d < num_docs; ++d) {
      auto& dt = st.doc_topic[d];
      for (size_t i = 0; i < docs[d].size(); ++i) {
        const int w = docs[d][i];
        const int old_t = st.labels[d][i];
        --dt[old_t];
        --st.topic_word[old_t][w];
        --st.topic_total[old_t];

        double total = 0.0;
        for (int t = 0; t < k; ++t) {
          const double p = (static_cast<double>(dt[t]) + alpha) *
                           (static_cast<double>(st.topic_word[t][w]) + beta) /
                           (static_cast<double>(st.topic_total[t]) + vocab * beta);
          total += p;
          cum[t] = total;
        }
        const double u = unit_double(rng) * total;
        int new_t = 0;
        while (new_t < k - 1 && cum[new_t] <= u) ++new_t;

        st.labels[d][i] = new_t;
        ++dt[new_t];
        ++st.topic_word[new_t][w];
        ++st.topic_total[new_t];
      }
    }
    if (cfg.validate_counts) validate_conservation(st, docs);
    if (sweep >= cfg.burn_in) {
      for (int t = 0; t < k; ++t) {
        const double denom = static_cast<double>(st.topic_total[t]) + vocab * beta;
        for (int w = 0; w < vocab; ++w) {
          phi_acc[t][w] += (static_cast<double>(st.topic_word[t][w]) + beta) / denom;
        }
      }
      for (int d = 0; d < num_docs; ++d) {
        const double denom = static_cast<double>(docs[d].size()) + k * alpha;
        for (int t = 0; t < k; ++t) {
          theta_acc[d][t] += (static_cast<double>(st.doc_topic[d][t]) + alpha) / denom;
        }
      }
    }
  }

  LdaModel model;
  model.config = cfg;
  model.config.alpha = alpha;
  model.corpus_digest = corpus.digest();
  model.assignments = std::move(st.labels);
  model.phi = std::move(phi_acc);
  model.theta = std::move(theta_acc);
  for (auto& row : model.phi) {
    for (double& v : row) v /= samples;
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    for (double& v : row) v /= sum;
  }
  for (auto& row : model.theta) {
    for (double& v : row) v /= samples;
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    for (double& v : row) v /= sum;
  }
  return model;
}

std::vector<std::pair<std::string, double>> top_words(const LdaModel& model,
                                                      const Corpus& corpus,
                                                      int topic, int n) {
  if (topic < 0 || topic >= model.config.k) throw UsageError("topic index out of range");
  if (n < 1) throw UsageError("n must be >= 1");
  if (model.corpus_digest != corpus.digest()) {
    throw DataError("model was fit on a different corpus (digest mismatch)");
  }
  const auto& row = model.phi[topic];
  std::vector<std::pair<std::string, double>> words;
  words.reserve(row.size());
  for (int w = 0; w < static_cast<int>(row.size()); ++w) {
    words.emplace_back(corpus.vocab_word(w), row[w]);
  }
  std::stable_sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(words.size()) > n) words.resize(n);
  return words;
}

const std::vector<double>& doc_topics(const LdaModel& model, int doc) {
  if (doc < 0 || doc >= static_cast<int>(model.theta.size())) {
    throw UsageError("document index out of range");
  }
  return model.theta[doc];
}

CoherenceReport umass_coherence(const LdaModel& model, const Corpus& corpus,
                                const DocFrequencies& docfreq, int top_m) {
  if (top_m < 1) throw UsageError("top_m must be >= 1");
  if (model.corpus_digest != corpus.digest()) {
    throw DataError("model was fit on a different corpus (digest mismatch)");
  }
  CoherenceReport report;
  report.top_m = top_m;
  for (int t = 0; t < model.config.k; ++t) {
    auto words = top_words(model, corpus, t, top_m);
    double score = 0.0;
    for (size_t m = 1; m < words.size(); ++m) {
      for (size_t l = 0; l < m; ++l) {
        const long long joint = docfreq.pair_df(words[m].first, words[l].first);
        const long long df_l = docfreq.df(words[l].first);
        score += std::log((static_cast<double>(joint) + 1.0) / static_cast<double>(df_l));
      }
    }
    report.per_topic.push_back(score);
  }
  report.mean = std::accumulate(report.per_topic.begin(), report.per_topic.end(), 0.0) /
                static_cast<double>(report.per_topic.size());
  return report;
}

SweepResult sweep_k(const Corpus& corpus, int k_min, int k_max,
                    const LdaConfig& base_cfg, int top_m) {
  if (k_min < 1 || k_min > k_max) throw UsageError("need 1 <= k_min <= k_max");
  DocFrequencies docfreq(corpus);
  SweepResult result;
  result.entries.resize(k_max - k_min + 1);

  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = k_min; k <= k_max; ++k) {
    try {
      LdaConfig cfg = base_cfg;
      cfg.k = k;
      cfg.alpha = base_cfg.alpha;  // <= 0 re-resolves to 50/k
      cfg.seed = mix_seed(base_cfg.seed, k);
      LdaModel model = fit_lda(corpus, cfg);
      auto coherence = umass_coherence(model, corpus, docfreq, top_m);
      result.entries[k - k_min] = SweepEntry{k, coherence.mean, cfg.seed};
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  result.best_k = select_best_k(result.entries);
  return result;
}

int select_best_k(const std::vector<SweepEntry>& entries) {
  if (entries.empty()) throw UsageError("no sweep entries");
  int best_k = entries.front().k;
  double best = entries.front().mean_coherence;
  for (const auto& e : entries) {
    if (e.mean_coherence > best || (e.mean_coherence == best && e.k < best_k)) {
      best = e.mean_coherence;
      best_k = e.k;
    }
  }
  return best_k;
}

namespace {

double round_sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::string model_json(const LdaModel& model, const Corpus& corpus) {
  nlohmann::json j;
  j["config"] = {{"k", model.config.k},
                 {"alpha", round_sig6(model.config.resolved_alpha())},
                 {"beta", model.config.beta},
                 {"iterations", model.config.iterations},
                 {"burn_in", model.config.burn_in},
                 {"seed", model.config.seed}};
  j["corpus_digest"] = model.corpus_digest;
  auto& vocab = j["vocabulary"] = nlohmann::json::array();
  for (int w = 0; w < corpus.vocab_size(); ++w) vocab.push_back(corpus.vocab_word(w));
  auto& phi = j["phi"] = nlohmann::json::array();
  for (const auto& row : model.phi) {
    for (double v : row) phi.push_back(round_sig6(v));
  }
  auto& theta = j["theta"] = nlohmann::json::array();
  for (const auto& row : model.theta) {
    for (double v : row) theta.push_back(round_sig6(v));
  }
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "k,mean_coherence,seed\n";
  char buf[32];
  for (const auto& e : sweep.entries) {
    std::snprintf(buf, sizeof(buf), "%.6f", e.mean_coherence);
    out << e.k << ',' << buf << ',' << e.seed << '\n';
  }
  return out.str();
}

}  // namespace narmine
