#include <random>

#include "doctest.h"
#include "narmine/rake.hpp"
#include "oracles.hpp"

using namespace narmine;

namespace {

TokenizedDocument make_doc(std::initializer_list<std::vector<std::pair<std::string, bool>>> segs) {
  TokenizedDocument doc;
  doc.id = "t";
  for (const auto& seg : segs) {
    std::vector<Token> tokens;
    for (const auto& [text, stop] : seg) tokens.push_back({text, stop});
    doc.segments.push_back(tokens);
  }
  return doc;
}

Corpus corpus_from(std::initializer_list<std::string> texts, const StopwordList& stops) {
  std::vector<RawRecord> records;
  int i = 0;
  for (const auto& t : texts) records.push_back({std::to_string(i++), t, {}});
  return clean(records, CleanConfig{}, stops);
}

StopwordList stops(std::initializer_list<std::string> words) {
  StopwordList list;
  list.source = "test";
  for (const auto& w : words) list.words.insert(w);
  return list;
}

}  // namespace

TEST_CASE("extract_candidates splits at stopwords") {
  auto doc = make_doc({{{"sudden", false}, {"change", false}, {"caused", true},
                        {"tire", false}, {"explosion", false}}});
  auto cands = extract_candidates(doc, 4);
  REQUIRE(cands.size() == 2);
  CHECK(cands[0].words == std::vector<std::string>{"sudden", "change"});
  CHECK(cands[1].words == std::vector<std::string>{"tire", "explosion"});
  CHECK(cands[0].occurrence_index == 0);
  CHECK(cands[1].occurrence_index == 1);
}

TEST_CASE("extract_candidates single content run") {
  auto doc = make_doc({{{"collision", false}}});
  auto cands = extract_candidates(doc, 4);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].words == std::vector<std::string>{"collision"});
}

TEST_CASE("extract_candidates discards over-long runs") {
  auto doc = make_doc({{{"aa", false}, {"bb", false}, {"cc", false}, {"dd", false}}});
  CHECK(extract_candidates(doc, 3).empty());
  CHECK(extract_candidates(doc, 4).size() == 1);
}

TEST_CASE("extract_candidates respects segment boundaries") {
  auto doc = make_doc({{{"oil", false}}, {{"leak", false}}});
  auto cands = extract_candidates(doc, 4);
  REQUIRE(cands.size() == 2);  // no phrase across segments
}

TEST_CASE("score_words deg/freq hand fixtures") {
  auto doc = make_doc({{{"sudden", false}, {"change", false}, {"x", true},
                        {"tire", false}, {"explosion", false}}});
  auto table = score_words(extract_candidates(doc, 4));
  for (const auto& w : {"sudden", "change", "tire", "explosion"}) {
    REQUIRE(table.count(w) == 1);
    CHECK(table[w].freq == 1);
    CHECK(table[w].deg == 2);
    CHECK(table[w].score() == doctest::Approx(2.0));
  }
}

TEST_CASE("score_words shared word across phrases") {
  auto doc = make_doc({{{"oil", false}, {"leak", false}},
                       {{"oil", false}, {"spill", false}}});
  auto table = score_words(extract_candidates(doc, 4));
  CHECK(table["oil"].freq == 2);
  CHECK(table["oil"].deg == 4);
  CHECK(table["oil"].score() == doctest::Approx(2.0));
  CHECK(table["leak"].freq == 1);
  CHECK(table["leak"].deg == 2);
  CHECK(table["leak"].score() == doctest::Approx(2.0));
}

TEST_CASE("score_words single-word phrase") {
  auto doc = make_doc({{{"collision", false}}});
  auto table = score_words(extract_candidates(doc, 4));
  CHECK(table["collision"].freq == 1);
  CHECK(table["collision"].deg == 1);
  CHECK(table["collision"].score() == doctest::Approx(1.0));
}

TEST_CASE("score_words on empty candidate list") {
  CHECK(score_words({}).empty());
}

TEST_CASE("score_phrases sums member scores and tie-breaks lexicographically") {
  auto doc = make_doc({{{"oil", false}, {"leak", false}},
                       {{"oil", false}, {"spill", false}},
                       {{"collision", false}}});
  auto cands = extract_candidates(doc, 4);
  auto table = score_words(cands);
  auto phrases = score_phrases(cands, table);
  REQUIRE(phrases.size() == 3);
  CHECK(phrases[0].phrase == "oil leak");
  CHECK(phrases[0].score == doctest::Approx(4.0));
  CHECK(phrases[1].phrase == "oil spill");
  CHECK(phrases[1].score == doctest::Approx(4.0));
  CHECK(phrases[2].phrase == "collision");
  CHECK(phrases[2].score == doctest::Approx(1.0));
}

TEST_CASE("score_phrases merges duplicates with summed support") {
  auto doc = make_doc({{{"tire", false}, {"explosion", false}},
                       {{"tire", false}, {"explosion", false}}});
  auto cands = extract_candidates(doc, 4);
  auto phrases = score_phrases(cands, score_words(cands));
  REQUIRE(phrases.size() == 1);
  CHECK(phrases[0].support == 2);
}

TEST_CASE("score_phrases rejects words missing from the table") {
  auto doc = make_doc({{{"tire", false}}});
  auto cands = extract_candidates(doc, 4);
  CHECK_THROWS_AS(score_phrases(cands, WordScoreTable{}), DataError);
}

TEST_CASE("top_keywords pools over documents") {
  auto corpus = corpus_from({"oil leak near the road", "oil spill on the road"},
                            stops({"the", "near", "on"}));
  auto top = top_keywords(corpus, 2, 4);
  REQUIRE(top.size() == 2);
  CHECK(top[0].phrase == "oil leak");
  CHECK(top[1].phrase == "oil spill");
  CHECK(top[0].score == doctest::Approx(4.0));

  CHECK(top_keywords(corpus, 100, 4).size() == 3);  // oil leak, oil spill, road x2
}

TEST_CASE("no stopwords and no delimiters yields one candidate") {
  auto corpus = corpus_from({"sudden lane change maneuver"}, stops({}));
  auto cands = extract_candidates(corpus.documents[0], 4);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].words == std::vector<std::string>{"sudden", "lane", "change", "maneuver"});
}

TEST_CASE("rake matches brute force on random corpora") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    auto corpus = oracles::random_corpus(rng, 5, 30);
    auto oracle = oracles::rake_brute_force(corpus.documents, 4);

    std::vector<CandidatePhrase> pooled;
    for (const auto& doc : corpus.documents) {
      auto c = extract_candidates(doc, 4);
      pooled.insert(pooled.end(), c.begin(), c.end());
    }
    auto table = score_words(pooled);
    REQUIRE(table.size() == oracle.freq.size());
    long long sum_freq = 0, sum_deg = 0;
    for (const auto& [w, s] : table) {
      CHECK(s.freq == oracle.freq.at(w));
      CHECK(s.deg == oracle.deg.at(w));
      CHECK(s.deg >= s.freq);
      CHECK(s.score() >= 1.0);
      sum_freq += s.freq;
      sum_deg += s.deg;
    }
    // sum identities over the candidate pool
    long long len_sum = 0, len_sq_sum = 0;
    for (const auto& c : pooled) {
      const long long len = static_cast<long long>(c.words.size());
      len_sum += len;
      len_sq_sum += len * len;
    }
    CHECK(sum_freq == len_sum);
    CHECK(sum_deg == len_sq_sum);

    auto phrases = score_phrases(pooled, table);
    REQUIRE(phrases.size() == oracle.phrase_score.size());
    for (const auto& p : phrases) {
      CHECK(p.score == doctest::Approx(oracle.phrase_score.at(p.phrase)).epsilon(1e-12));
      CHECK(p.support == oracle.phrase_support.at(p.phrase));
    }
    // ranking is totally ordered
    for (size_t i = 1; i < phrases.size(); ++i) {
      const bool ordered = phrases[i - 1].score > phrases[i].score ||
                           (phrases[i - 1].score == phrases[i].score &&
                            phrases[i - 1].phrase < phrases[i].phrase);
      CHECK(ordered);
    }
  }
}

TEST_CASE("scored phrase CSV uses four decimal places") {
  std::vector<ScoredPhrase> phrases{{"tire explosion", 4.0, 2}};
  CHECK(scored_phrases_csv(phrases) == "phrase,score,support\ntire explosion,4.0000,2\n");
}
