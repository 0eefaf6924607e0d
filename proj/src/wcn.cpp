#include "narmine/wcn.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace narmine {

namespace {

// token view over the corpus as dense local ids, segment structure kept
struct TokenView {
  std::vector<std::string> words;
  std::vector<std::vector<std::vector<int>>> docs;  // doc -> segment -> ids
};

TokenView make_view(const Corpus& corpus, bool content_only) {
  TokenView view;
  std::unordered_map<std::string, int> interner;
  auto intern = [&](const std::string& w) {
    auto [it, inserted] = interner.try_emplace(w, static_cast<int>(view.words.size()));
    if (inserted) view.words.push_back(w);
    return it->second;
  };
  view.docs.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    std::vector<std::vector<int>> segs;
    for (const auto& seg : doc.segments) {
      std::vector<int> ids;
      for (const auto& tok : seg) {
        if (content_only && tok.is_stopword) continue;
        ids.push_back(intern(tok.text));
      }
      if (!ids.empty()) segs.push_back(std::move(ids));
    }
    view.docs.push_back(std::move(segs));
  }
  return view;
}

using PairCounts = std::unordered_map<std::uint64_t, long long>;

inline std::uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

void count_segment(const std::vector<int>& ids, int window_n, PairCounts& pairs,
                   std::vector<long long>& occurrences) {
  for (int id : ids) ++occurrences[id];
  const int len = static_cast<int>(ids.size());
  for (int start = 0; start + window_n <= len; ++start) {
    for (int i = start; i < start + window_n; ++i) {
      for (int j = i + 1; j < start + window_n; ++j) {
        if (ids[i] == ids[j]) continue;  // no self-loops
        ++pairs[pair_key(ids[i], ids[j])];
      }
    }
  }
}

CooccurrenceGraph finalize(const TokenView& view, const PairCounts& pairs,
                           const std::vector<long long>& occurrences,
                           long long min_edge_weight) {
  CooccurrenceGraph graph;
  for (const auto& [key, weight] : pairs) {
    if (weight < min_edge_weight) continue;
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    WordPair wp{view.words[a], view.words[b]};
    if (wp.second < wp.first) std::swap(wp.first, wp.second);
    graph.edges[wp] = weight;
  }
  for (const auto& [wp, weight] : graph.edges) {
    graph.nodes.emplace(wp.first, 0);
    graph.nodes.emplace(wp.second, 0);
  }
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(view.words.size()); ++i) index[view.words[i]] = i;
  for (auto& [word, count] : graph.nodes) {
    count = occurrences[index.at(word)];
  }
  return graph;
}

void check_config(const WcnConfig& cfg) {
  if (cfg.window_n < 2) throw UsageError("window_n must be >= 2");
  if (cfg.min_edge_weight < 1) throw UsageError("min_edge_weight must be >= 1");
}

}  // namespace

CooccurrenceGraph build_wcn_serial(const Corpus& corpus, const WcnConfig& cfg) {
  check_config(cfg);
  TokenView view = make_view(corpus, cfg.use_content_tokens_only);
  PairCounts pairs;
  std::vector<long long> occurrences(view.words.size(), 0);
  for (const auto& doc : view.docs) {
    for (const auto& seg : doc) {
      count_segment(seg, cfg.window_n, pairs, occurrences);
    }
  }
  return finalize(view, pairs, occurrences, cfg.min_edge_weight);
}

CooccurrenceGraph build_wcn(const Corpus& corpus, const WcnConfig& cfg) {
  check_config(cfg);
  TokenView view = make_view(corpus, cfg.use_content_tokens_only);
  const int ndocs = static_cast<int>(view.docs.size());

#ifdef _OPENMP
  const int nthreads = omp_get_max_threads();
#else
  const int nthreads = 1;
#endif
  std::vector<PairCounts> pairs_tls(nthreads);
  std::vector<std::vector<long long>> occ_tls(nthreads,
                                              std::vector<long long>(view.words.size(), 0));

#pragma omp parallel for schedule(dynamic, 16)
  for (int d = 0; d < ndocs; ++d) {
#ifdef _OPENMP
    const int tid = omp_get_thread_num();
#else
    const int tid = 0;
#endif
    for (const auto& seg : view.docs[d]) {
      count_segment(seg, cfg.window_n, pairs_tls[tid], occ_tls[tid]);
    }
  }

  PairCounts pairs = std::move(pairs_tls[0]);
  std::vector<long long> occurrences = std::move(occ_tls[0]);
  for (int t = 1; t < nthreads; ++t) {
    for (const auto& [key, weight] : pairs_tls[t]) pairs[key] += weight;
    for (size_t i = 0; i < occurrences.size(); ++i) occurrences[i] += occ_tls[t][i];
  }
  return finalize(view, pairs, occurrences, cfg.min_edge_weight);
}

long long node_strength(const CooccurrenceGraph& graph, const std::string& word) {
  if (graph.nodes.find(word) == graph.nodes.end()) {
    throw DataError("word is not a node in the graph: " + word);
  }
  long long strength = 0;
  for (const auto& [wp, weight] : graph.edges) {
    if (wp.first == word || wp.second == word) strength += weight;
  }
  return strength;
}

std::vector<std::pair<WordPair, long long>> top_edges(const CooccurrenceGraph& graph, int m) {
  if (m < 1) throw UsageError("m must be >= 1");
  std::vector<std::pair<WordPair, long long>> edges(graph.edges.begin(), graph.edges.end());
  std::stable_sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(edges.size()) > m) edges.resize(m);
  return edges;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string export_graph(const CooccurrenceGraph& graph, const std::string& format) {
  std::ostringstream out;
  if (format == "dot") {
    out << "graph wcn {\n";
    for (const auto& [word, count] : graph.nodes) {
      out << "  \"" << word << "\";\n";
    }
    for (const auto& [wp, weight] : graph.edges) {
      out << "  \"" << wp.first << "\" -- \"" << wp.second << "\" [weight=" << weight << "];\n";
    }
    out << "}\n";
  } else if (format == "graphml") {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
        << "  <graph id=\"wcn\" edgedefault=\"undirected\">\n";
    for (const auto& [word, count] : graph.nodes) {
      out << "    <node id=\"" << xml_escape(word) << "\"/>\n";
    }
    int edge_id = 0;
    for (const auto& [wp, weight] : graph.edges) {
      out << "    <edge id=\"e" << edge_id++ << "\" source=\"" << xml_escape(wp.first)
          << "\" target=\"" << xml_escape(wp.second) << "\"><data key=\"weight\">" << weight
          << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
  } else if (format == "edgelist-csv") {
    out << "source,target,weight\n";
    for (const auto& [wp, weight] : graph.edges) {
      out << wp.first << ',' << wp.second << ',' << weight << '\n';
    }
  } else {
    throw UsageError("unsupported graph export format: " + format);
  }
  return out.str();
}

}  // namespace narmine
