#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "narmine/corpus.hpp"

namespace narmine {

struct WcnConfig {
  int window_n = 2;
  long long min_edge_weight = 1;
  bool use_content_tokens_only = true;
};

using WordPair = std::pair<std::string, std::string>;  // lexicographically sorted

struct CooccurrenceGraph {
  std::map<std::string, long long> nodes;  // word -> occurrence count
  std::map<WordPair, long long> edges;     // canonical pair -> weight
};

// OpenMP-parallel build; counts unordered pairs of distinct words per
// sliding window of length window_n within each sentence segment.
CooccurrenceGraph build_wcn(const Corpus& corpus, const WcnConfig& cfg);

// Serial reference implementation, kept for testing and benchmarking.
CooccurrenceGraph build_wcn_serial(const Corpus& corpus, const WcnConfig& cfg);

long long node_strength(const CooccurrenceGraph& graph, const std::string& word);

std::vector<std::pair<WordPair, long long>> top_edges(const CooccurrenceGraph& graph, int m);

// format: dot | graphml | edgelist-csv
std::string export_graph(const CooccurrenceGraph& graph, const std::string& format);

}  // namespace narmine
