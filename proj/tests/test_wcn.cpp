#include <random>

#include "doctest.h"
#include "narmine/wcn.hpp"
#include "oracles.hpp"

using namespace narmine;

namespace {

Corpus corpus_of(std::initializer_list<std::string> texts) {
  StopwordList stops;
  stops.source = "test";
  std::vector<RawRecord> records;
  int i = 0;
  for (const auto& t : texts) records.push_back({std::to_string(i++), t, {}});
  return clean(records, CleanConfig{}, stops);
}

WcnConfig config(int n, long long min_weight = 1) {
  WcnConfig cfg;
  cfg.window_n = n;
  cfg.min_edge_weight = min_weight;
  return cfg;
}

}  // namespace

TEST_CASE("bigram windows yield chain edges") {
  auto graph = build_wcn(corpus_of({"aa bb cc"}), config(2));
  REQUIRE(graph.edges.size() == 2);
  CHECK(graph.edges.at({"aa", "bb"}) == 1);
  CHECK(graph.edges.at({"bb", "cc"}) == 1);
}

TEST_CASE("repeated pair accumulates across overlapping windows") {
  auto graph = build_wcn(corpus_of({"aa bb aa bb"}), config(2));
  REQUIRE(graph.edges.size() == 1);
  CHECK(graph.edges.at({"aa", "bb"}) == 3);
}

TEST_CASE("window of three forms a clique") {
  auto graph = build_wcn(corpus_of({"aa bb cc"}), config(3));
  REQUIRE(graph.edges.size() == 3);
  CHECK(graph.edges.at({"aa", "bb"}) == 1);
  CHECK(graph.edges.at({"aa", "cc"}) == 1);
  CHECK(graph.edges.at({"bb", "cc"}) == 1);
}

TEST_CASE("equal words in a window contribute no self-loop") {
  auto graph = build_wcn(corpus_of({"aa aa bb"}), config(2));
  REQUIRE(graph.edges.size() == 1);
  CHECK(graph.edges.count({"aa", "aa"}) == 0);
  CHECK(graph.edges.at({"aa", "bb"}) == 1);
}

TEST_CASE("windows do not cross sentence boundaries") {
  auto graph = build_wcn(corpus_of({"aa bb. cc dd"}), config(2));
  CHECK(graph.edges.count({"bb", "cc"}) == 0);
  CHECK(graph.edges.size() == 2);
}

TEST_CASE("min_edge_weight filters edges then isolated nodes") {
  auto corpus = corpus_of({"aa bb aa bb cc"});
  auto unfiltered = build_wcn(corpus, config(2));
  CHECK(unfiltered.nodes.count("cc") == 1);
  auto filtered = build_wcn(corpus, config(2, 2));
  CHECK(filtered.edges.size() == 1);
  CHECK(filtered.edges.at({"aa", "bb"}) == 3);
  CHECK(filtered.nodes.count("cc") == 0);  // isolated after the filter
  // threshold of 1 is the identity
  CHECK(unfiltered.edges == build_wcn(corpus, config(2, 1)).edges);
}

TEST_CASE("stopwords are excluded from the default view") {
  StopwordList stops;
  stops.words = {"the"};
  auto corpus = clean({{"0", "aa the bb", {}}}, CleanConfig{}, stops);
  auto graph = build_wcn(corpus, config(2));
  CHECK(graph.edges.at({"aa", "bb"}) == 1);

  WcnConfig all = config(2);
  all.use_content_tokens_only = false;
  auto full = build_wcn(corpus, all);
  CHECK(full.edges.count({"aa", "bb"}) == 0);
  CHECK(full.edges.at({"aa", "the"}) == 1);
  CHECK(full.edges.at({"bb", "the"}) == 1);
}

TEST_CASE("node_strength sums incident weights") {
  auto graph = build_wcn(corpus_of({"aa bb aa bb. aa cc"}), config(2));
  CHECK(graph.edges.at({"aa", "bb"}) == 3);
  CHECK(graph.edges.at({"aa", "cc"}) == 1);
  CHECK(node_strength(graph, "aa") == 4);
  CHECK(node_strength(graph, "bb") == 3);
  CHECK(node_strength(graph, "cc") == 1);
  CHECK_THROWS_AS(node_strength(graph, "zz"), DataError);
}

TEST_CASE("top_edges ordering and truncation") {
  auto graph = build_wcn(corpus_of({"aa bb aa bb. aa cc"}), config(2));
  auto top1 = top_edges(graph, 1);
  REQUIRE(top1.size() == 1);
  CHECK(top1[0].first == WordPair{"aa", "bb"});
  CHECK(top1[0].second == 3);
  CHECK(top_edges(graph, 10).size() == 2);

  auto tie_graph = build_wcn(corpus_of({"aa bb. aa cc"}), config(2));
  auto ties = top_edges(tie_graph, 2);
  REQUIRE(ties.size() == 2);
  CHECK(ties[0].first == WordPair{"aa", "bb"});  // lexicographic tie rule
  CHECK(ties[1].first == WordPair{"aa", "cc"});
}

TEST_CASE("graph exports are deterministic and follow the stated formats") {
  auto graph = build_wcn(corpus_of({"aa bb aa bb"}), config(2));
  CHECK(export_graph(graph, "edgelist-csv") == "source,target,weight\naa,bb,3\n");
  auto dot = export_graph(graph, "dot");
  CHECK(dot.find("graph wcn {") == 0);
  CHECK(dot.find("\"aa\" -- \"bb\" [weight=3]") != std::string::npos);
  auto gml = export_graph(graph, "graphml");
  CHECK(gml.find("edgedefault=\"undirected\"") != std::string::npos);
  CHECK(gml.find("<data key=\"weight\">3</data>") != std::string::npos);
  CHECK(export_graph(graph, "dot") == dot);
  CHECK_THROWS_AS(export_graph(graph, "gexf"), UsageError);

  CooccurrenceGraph empty;
  CHECK(export_graph(empty, "dot") == "graph wcn {\n}\n");
}

TEST_CASE("wcn matches brute-force window enumeration on random corpora") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto corpus = oracles::random_corpus(rng, 6, 25);
    for (int n : {2, 3, 4}) {
      auto cfg = config(n);
      auto expected = oracles::wcn_brute_force(corpus.documents, n, true);
      auto serial = build_wcn_serial(corpus, cfg);
      auto parallel = build_wcn(corpus, cfg);
      CHECK(serial.edges == expected);
      CHECK(parallel.edges == expected);
      CHECK(serial.nodes == parallel.nodes);
      // symmetry/self-loop invariants: canonical keys only
      for (const auto& [wp, weight] : parallel.edges) {
        CHECK(wp.first < wp.second);
        CHECK(weight >= 1);
      }
    }
  }
}

TEST_CASE("total edge weight is bounded by windows times pairs-per-window") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    auto corpus = oracles::random_corpus(rng, 5, 20);
    for (int n : {2, 3}) {
      long long windows = 0;
      for (const auto& doc : corpus.documents) {
        for (const auto& seg : doc.segments) {
          long long content = 0;
          for (const auto& tok : seg) {
            if (!tok.is_stopword) ++content;
          }
          if (content >= n) windows += content - n + 1;
        }
      }
      auto graph = build_wcn(corpus, config(n));
      long long total = 0;
      for (const auto& [wp, w] : graph.edges) total += w;
      CHECK(total <= windows * (n * (n - 1) / 2));
    }
  }
}
