#include "narmine/rake.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace narmine {

std::vector<CandidatePhrase> extract_candidates(const TokenizedDocument& doc,
                                                int max_phrase_len) {
  if (max_phrase_len < 1) throw UsageError("max_phrase_len must be >= 1");
  std::vector<CandidatePhrase> out;
  int occurrence = 0;
  std::vector<std::string> run;
  auto flush = [&]() {
    if (run.empty()) return;
    if (static_cast<int>(run.size()) <= max_phrase_len) {
      out.push_back({std::move(run), doc.id, occurrence++});
    }
    run.clear();
  };
  for (const auto& seg : doc.segments) {
    for (const auto& tok : seg) {
      if (tok.is_stopword) {
        flush();
      } else {
        run.push_back(tok.text);
      }
    }
    flush();  // segment boundary also delimits
  }
  return out;
}

WordScoreTable score_words(const std::vector<CandidatePhrase>& candidates) {
  WordScoreTable table;
  for (const auto& cand : candidates) {
    const long long len = static_cast<long long>(cand.words.size());
    for (const auto& w : cand.words) {
      auto& entry = table[w];
      entry.freq += 1;
      entry.deg += len;
    }
  }
  return table;
}

std::vector<ScoredPhrase> score_phrases(const std::vector<CandidatePhrase>& candidates,
                                        const WordScoreTable& table) {
  std::map<std::string, ScoredPhrase> merged;
  for (const auto& cand : candidates) {
    std::string key;
    double score = 0.0;
    for (const auto& w : cand.words) {
      if (!key.empty()) key.push_back(' ');
      key += w;
      auto it = table.find(w);
      if (it == table.end()) {
        throw DataError("candidate word missing from score table: " + w);
      }
      score += it->second.score();
    }
    auto [it, inserted] = merged.try_emplace(key, ScoredPhrase{key, score, 0});
    it->second.support += 1;
  }
  std::vector<ScoredPhrase> out;
  out.reserve(merged.size());
  for (auto& [key, phrase] : merged) out.push_back(std::move(phrase));
  std::stable_sort(out.begin(), out.end(), [](const ScoredPhrase& a, const ScoredPhrase& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.phrase < b.phrase;
  });
  return out;
}

std::vector<ScoredPhrase> top_keywords(const Corpus& corpus, int top_n,
                                       int max_phrase_len) {
  if (top_n < 1) throw UsageError("top_n must be >= 1");
  std::vector<CandidatePhrase> pooled;
  for (const auto& doc : corpus.documents) {
    auto cands = extract_candidates(doc, max_phrase_len);
    pooled.insert(pooled.end(), std::make_move_iterator(cands.begin()),
                  std::make_move_iterator(cands.end()));
  }
  auto table = score_words(pooled);
  auto phrases = score_phrases(pooled, table);
  if (static_cast<int>(phrases.size()) > top_n) phrases.resize(top_n);
  return phrases;
}

std::string scored_phrases_csv(const std::vector<ScoredPhrase>& phrases) {
  std::ostringstream out;
  out << "phrase,score,support\n";
  char buf[32];
  for (const auto& p : phrases) {
    std::snprintf(buf, sizeof(buf), "%.4f", p.score);
    out << p.phrase << ',' << buf << ',' << p.support << '\n';
  }
  return out.str();
}

}  // namespace narmine
