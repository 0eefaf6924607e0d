#include "narmine/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace narmine {

namespace {

std::string lowercase_ascii(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

bool is_word_char(unsigned char c) {
  // ASCII letters and digits; bytes >= 0x80 are parts of multibyte
  // UTF-8 letters and pass through untouched.
  return std::isalnum(c) || c >= 0x80;
}

// RFC-4180 CSV: quoted fields may contain commas, doubled quotes and
// newlines. Returns one row per call; false at end of stream.
bool read_csv_row(std::istream& in, std::vector<std::string>& row,
                  long long& line_no, bool& blank) {
  row.clear();
  blank = true;
  int ch = in.get();
  if (ch == EOF) return false;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  while (true) {
    if (ch != EOF && ch != '\n' && ch != '\r') blank = false;
    if (ch == EOF) {
      if (in_quotes) throw DataError("unterminated quoted CSV field at line " + std::to_string(line_no));
      row.push_back(field);
      return true;
    }
    char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        int next = in.peek();
        if (next == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line_no;
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !any) {
      in_quotes = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      any = false;
      ch = in.get();
      continue;
    } else if (c == '\r') {
      // swallow; CRLF handled at '\n'
    } else if (c == '\n') {
      ++line_no;
      row.push_back(field);
      return true;
    } else {
      field.push_back(c);
      any = true;
    }
    any = any || !field.empty();
    ch = in.get();
  }
}

std::vector<RawRecord> ingest_csv(std::istream& in, const std::string& narrative_field,
                                  const std::string& id_field, bool keep_empty,
                                  IngestReport& report) {
  long long line_no = 1;
  bool blank = false;
  std::vector<std::string> header;
  if (!read_csv_row(in, header, line_no, blank)) {
    throw DataError("empty CSV input");
  }
  auto col_of = [&](const std::string& name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int narrative_col = col_of(narrative_field);
  if (narrative_col < 0) {
    throw DataError("narrative field '" + narrative_field + "' not found in CSV header");
  }
  const int id_col = id_field.empty() ? -1 : col_of(id_field);
  if (!id_field.empty() && id_col < 0) {
    throw DataError("id field '" + id_field + "' not found in CSV header");
  }

  std::vector<RawRecord> records;
  std::unordered_set<std::string> seen_ids;
  std::vector<std::string> row;
  long long ordinal = 0;
  while (read_csv_row(in, row, line_no, blank)) {
    if (blank) continue;
    ++report.rows_read;
    if (static_cast<int>(row.size()) <= narrative_col ||
        (id_col >= 0 && static_cast<int>(row.size()) <= id_col)) {
      throw DataError("short CSV row at line " + std::to_string(line_no));
    }
    RawRecord rec;
    rec.narrative = row[narrative_col];
    rec.id = id_col >= 0 ? row[id_col] : std::to_string(ordinal);
    for (size_t i = 0; i < row.size() && i < header.size(); ++i) {
      if (static_cast<int>(i) != narrative_col && static_cast<int>(i) != id_col) {
        rec.meta[header[i]] = row[i];
      }
    }
    ++ordinal;
    if (rec.id.empty()) throw DataError("empty id at line " + std::to_string(line_no));
    if (!seen_ids.insert(rec.id).second) {
      throw DataError("duplicate record id '" + rec.id + "'");
    }
    if (rec.narrative.empty() && !keep_empty) {
      ++report.rows_dropped_empty;
      continue;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<RawRecord> ingest_jsonl(std::istream& in, const std::string& narrative_field,
                                    const std::string& id_field, bool keep_empty,
                                    IngestReport& report) {
  std::vector<RawRecord> records;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  long long line_no = 0;
  long long ordinal = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++report.rows_read;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("malformed JSON at line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.contains(narrative_field)) {
      throw DataError("missing field '" + narrative_field + "' at line " + std::to_string(line_no));
    }
    RawRecord rec;
    rec.narrative = obj[narrative_field].is_string()
                        ? obj[narrative_field].get<std::string>()
                        : obj[narrative_field].dump();
    if (!id_field.empty()) {
      if (!obj.contains(id_field)) {
        throw DataError("missing field '" + id_field + "' at line " + std::to_string(line_no));
      }
      rec.id = obj[id_field].is_string() ? obj[id_field].get<std::string>() : obj[id_field].dump();
    } else {
      rec.id = std::to_string(ordinal);
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it.key() == narrative_field || it.key() == id_field) continue;
      rec.meta[it.key()] = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    }
    ++ordinal;
    if (rec.id.empty()) throw DataError("empty id at line " + std::to_string(line_no));
    if (!seen_ids.insert(rec.id).second) {
      throw DataError("duplicate record id '" + rec.id + "'");
    }
    if (rec.narrative.empty() && !keep_empty) {
      ++report.rows_dropped_empty;
      continue;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

bool StopwordList::contains(std::string_view token) const {
  return words.count(lowercase_ascii(token)) > 0;
}

InputFormat parse_format(const std::string& label) {
  if (label == "csv") return InputFormat::Csv;
  if (label == "jsonl") return InputFormat::Jsonl;
  throw UsageError("unknown input format '" + label + "' (expected csv or jsonl)");
}

std::vector<RawRecord> ingest(const std::string& path, InputFormat format,
                              const std::string& narrative_field,
                              const std::string& id_field, bool keep_empty,
                              IngestReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path);
  IngestReport local;
  IngestReport& rep = report ? *report : local;
  if (format == InputFormat::Csv) {
    return ingest_csv(in, narrative_field, id_field, keep_empty, rep);
  }
  return ingest_jsonl(in, narrative_field, id_field, keep_empty, rep);
}

int Corpus::vocab_id(const std::string& word) const {
  auto it = word_to_id_.find(word);
  return it == word_to_id_.end() ? -1 : it->second;
}

const std::string& Corpus::vocab_word(int id) const {
  if (id < 0 || id >= vocab_size()) throw std::out_of_range("vocabulary id out of range");
  return id_to_word_[id];
}

void Corpus::add_content_word(const std::string& word) {
  auto [it, inserted] = word_to_id_.try_emplace(word, vocab_size());
  if (inserted) id_to_word_.push_back(word);
}

long long Corpus::content_token_count() const {
  long long n = 0;
  for (const auto& doc : content_ids_) n += static_cast<long long>(doc.size());
  return n;
}

std::uint64_t Corpus::digest() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix_byte = [&](unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  auto mix_int = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>(v >> (8 * i)));
  };
  for (const auto& w : id_to_word_) {
    for (unsigned char c : w) mix_byte(c);
    mix_byte(0);
  }
  for (const auto& doc : content_ids_) {
    mix_int(doc.size());
    for (int id : doc) mix_int(static_cast<std::uint64_t>(id));
  }
  return h;
}

void Corpus::finalize() {
  content_ids_.clear();
  content_ids_.reserve(documents.size());
  for (const auto& doc : documents) {
    std::vector<int> ids;
    for (const auto& seg : doc.segments) {
      for (const auto& tok : seg) {
        if (!tok.is_stopword) ids.push_back(vocab_id(tok.text));
      }
    }
    content_ids_.push_back(std::move(ids));
  }
}

Corpus clean(const std::vector<RawRecord>& records, const CleanConfig& cfg,
             const StopwordList& stopwords) {
  if (cfg.min_token_len < 1) throw UsageError("min_token_len must be >= 1");
  if (cfg.sentence_delimiters.empty()) throw UsageError("sentence_delimiters must be non-empty");
  if (records.empty()) throw DataError("no records to clean");

  Corpus corpus;
  auto is_delim = [&](char c) {
    return cfg.sentence_delimiters.find(c) != std::string::npos;
  };

  long long total_tokens = 0;
  for (const auto& rec : records) {
    TokenizedDocument doc;
    doc.id = rec.id;
    std::vector<Token> segment;
    std::string cur;

    auto flush_token = [&]() {
      if (cur.empty()) return;
      std::string text = lowercase_ascii(cur);
      cur.clear();
      if (static_cast<int>(text.size()) < cfg.min_token_len) return;
      if (cfg.drop_numeric &&
          text.find_first_not_of("0123456789-") == std::string::npos) {
        return;
      }
      Token tok;
      tok.is_stopword = stopwords.words.count(text) > 0;
      tok.text = std::move(text);
      segment.push_back(std::move(tok));
    };
    auto flush_segment = [&]() {
      flush_token();
      if (!segment.empty()) doc.segments.push_back(std::move(segment));
      segment.clear();
    };

    const std::string& text = rec.narrative;
    for (size_t i = 0; i < text.size(); ++i) {
      unsigned char c = static_cast<unsigned char>(text[i]);
      if (is_word_char(c)) {
        cur.push_back(static_cast<char>(c));
      } else if (c == '-' && !cur.empty() && i + 1 < text.size() &&
                 is_word_char(static_cast<unsigned char>(text[i + 1]))) {
        cur.push_back('-');  // intra-word hyphen
      } else if (is_delim(static_cast<char>(c))) {
        flush_segment();
      } else {
        flush_token();
      }
    }
    flush_segment();

    for (const auto& seg : doc.segments) {
      for (const auto& tok : seg) {
        ++total_tokens;
        if (!tok.is_stopword) corpus.add_content_word(tok.text);
      }
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (total_tokens == 0) throw DataError("all documents empty after cleaning");
  corpus.finalize();
  return corpus;
}

FrequencyTable term_frequencies(const Corpus& corpus, int top_n) {
  if (top_n < 1) throw UsageError("top_n must be >= 1");
  std::vector<long long> counts(corpus.vocab_size(), 0);
  long long total = 0;
  for (const auto& doc : corpus.content_ids()) {
    for (int id : doc) {
      ++counts[id];
      ++total;
    }
  }
  std::vector<std::pair<std::string, long long>> entries;
  entries.reserve(counts.size());
  for (int id = 0; id < corpus.vocab_size(); ++id) {
    entries.emplace_back(corpus.vocab_word(id), counts[id]);
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(entries.size()) > top_n) entries.resize(top_n);
  return FrequencyTable{std::move(entries), total};
}

DocFrequencies::DocFrequencies(const Corpus& corpus) : corpus_(&corpus) {
  postings_.resize(corpus.vocab_size());
  const auto& docs = corpus.content_ids();
  for (int d = 0; d < static_cast<int>(docs.size()); ++d) {
    for (int id : docs[d]) {
      auto& p = postings_[id];
      if (p.empty() || p.back() != d) p.push_back(d);
    }
  }
}

long long DocFrequencies::df(int word_id) const {
  if (word_id < 0 || word_id >= static_cast<int>(postings_.size())) {
    throw DataError("word id out of vocabulary");
  }
  return static_cast<long long>(postings_[word_id].size());
}

long long DocFrequencies::pair_df(int id1, int id2) const {
  if (id1 < 0 || id1 >= static_cast<int>(postings_.size()) ||
      id2 < 0 || id2 >= static_cast<int>(postings_.size())) {
    throw DataError("word id out of vocabulary");
  }
  if (id1 == id2) return df(id1);
  const auto& a = postings_[id1];
  const auto& b = postings_[id2];
  long long n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else { ++n; ++ia; ++ib; }
  }
  return n;
}

long long DocFrequencies::df(const std::string& word) const {
  int id = corpus_->vocab_id(word);
  if (id < 0) throw DataError("word not in vocabulary: " + word);
  return df(id);
}

long long DocFrequencies::pair_df(const std::string& w1, const std::string& w2) const {
  int id1 = corpus_->vocab_id(w1);
  int id2 = corpus_->vocab_id(w2);
  if (id1 < 0) throw DataError("word not in vocabulary: " + w1);
  if (id2 < 0) throw DataError("word not in vocabulary: " + w2);
  return pair_df(id1, id2);
}

std::string frequency_table_csv(const FrequencyTable& table) {
  std::ostringstream out;
  out << "word,count\n";
  for (const auto& [word, count] : table.entries) {
    out << word << ',' << count << '\n';
  }
  return out.str();
}

}  // namespace narmine
