#pragma once

#include <map>
#include <string>
#include <vector>

#include "narmine/corpus.hpp"

namespace narmine {

struct CandidatePhrase {
  std::vector<std::string> words;
  std::string doc_id;
  int occurrence_index = 0;
};

struct WordScore {
  long long freq = 0;
  long long deg = 0;

  double score() const { return static_cast<double>(deg) / static_cast<double>(freq); }
};

// word -> (freq, deg); ordered map keeps reports deterministic
using WordScoreTable = std::map<std::string, WordScore>;

struct ScoredPhrase {
  std::string phrase;  // space-joined word sequence
  double score = 0.0;
  long long support = 0;
};

// Maximal runs of content tokens between stopwords and segment
// boundaries; runs longer than max_phrase_len are discarded.
std::vector<CandidatePhrase> extract_candidates(const TokenizedDocument& doc,
                                                int max_phrase_len);

WordScoreTable score_words(const std::vector<CandidatePhrase>& candidates);

std::vector<ScoredPhrase> score_phrases(const std::vector<CandidatePhrase>& candidates,
                                        const WordScoreTable& table);

std::vector<ScoredPhrase> top_keywords(const Corpus& corpus, int top_n,
                                       int max_phrase_len);

std::string scored_phrases_csv(const std::vector<ScoredPhrase>& phrases);

}  // namespace narmine
