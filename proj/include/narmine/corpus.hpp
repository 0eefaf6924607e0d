#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace narmine {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RawRecord {
  std::string id;
  std::string narrative;
  std::map<std::string, std::string> meta;
};

struct StopwordList {
  std::unordered_set<std::string> words;
  std::string source;

  bool contains(std::string_view token) const;
};

// source is "builtin" or a path to a one-token-per-line UTF-8 file.
StopwordList load_stopwords(const std::string& source);

struct CleanConfig {
  int min_token_len = 2;
  bool drop_numeric = true;
  std::string sentence_delimiters = ".!?;:,";
  bool keep_empty = false;
};

struct Token {
  std::string text;
  bool is_stopword = false;
};

struct TokenizedDocument {
  std::string id;
  std::vector<std::vector<Token>> segments;
};

struct IngestReport {
  long long rows_read = 0;
  long long rows_dropped_empty = 0;
  long long rows_failed = 0;
};

enum class InputFormat { Csv, Jsonl };

InputFormat parse_format(const std::string& label);

std::vector<RawRecord> ingest(const std::string& path, InputFormat format,
                              const std::string& narrative_field,
                              const std::string& id_field, bool keep_empty,
                              IngestReport* report = nullptr);

class Corpus {
 public:
  std::vector<TokenizedDocument> documents;

  int vocab_size() const { return static_cast<int>(id_to_word_.size()); }
  int vocab_id(const std::string& word) const;  // -1 if absent
  const std::string& vocab_word(int id) const;

  // content-token id stream per document, segment structure flattened
  const std::vector<std::vector<int>>& content_ids() const { return content_ids_; }
  long long content_token_count() const;

  // stable checksum over vocabulary and token streams
  std::uint64_t digest() const;

  void add_content_word(const std::string& word);  // used by clean()
  void finalize();

 private:
  std::unordered_map<std::string, int> word_to_id_;
  std::vector<std::string> id_to_word_;
  std::vector<std::vector<int>> content_ids_;
};

Corpus clean(const std::vector<RawRecord>& records, const CleanConfig& cfg,
             const StopwordList& stopwords);

struct FrequencyTable {
  std::vector<std::pair<std::string, long long>> entries;
  long long total_tokens = 0;
};

FrequencyTable term_frequencies(const Corpus& corpus, int top_n);

class DocFrequencies {
 public:
  explicit DocFrequencies(const Corpus& corpus);

  long long df(const std::string& word) const;
  long long pair_df(const std::string& w1, const std::string& w2) const;
  long long df(int word_id) const;
  long long pair_df(int id1, int id2) const;

 private:
  const Corpus* corpus_;
  std::vector<std::vector<int>> postings_;  // word id -> sorted doc indices
};

std::string frequency_table_csv(const FrequencyTable& table);

}  // namespace narmine
