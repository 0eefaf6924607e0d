// Command-line front end for the narrative mining pipeline.
//
// Subcommands: freq, rake, wcn, lda, sweep, report. Options come from
// an optional JSON config file (--config); flags override config
// fields. Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "narmine/corpus.hpp"
#include "narmine/lda.hpp"
#include "narmine/rake.hpp"
#include "narmine/wcn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct PipelineConfig {
  // input
  std::string input_path;
  std::string format = "csv";
  std::string narrative_field = "narrative";
  std::string id_field;
  // cleaning
  narmine::CleanConfig clean;
  std::string stopwords = "builtin";
  // rake
  int rake_top_n = 20;
  int max_phrase_len = 4;
  // wcn
  narmine::WcnConfig wcn;
  std::vector<std::string> graph_formats = {"edgelist-csv"};
  // lda / sweep
  int fixed_k = 0;  // 0 = unset
  int k_min = 0;
  int k_max = 0;
  double alpha = 0.0;
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 800;
  std::uint64_t seed = narmine::kDefaultSeed;
  int top_m = 10;
  int top_words = 10;
  int freq_top_n = 50;
  // output
  std::string output_dir = "out";
  bool overwrite = false;

  bool sweep_set() const { return k_min > 0 || k_max > 0; }
};

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw narmine::UsageError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw narmine::UsageError(std::string("malformed config file: ") + e.what());
  }
  if (j.contains("input")) {
    const auto& in_j = j["input"];
    if (in_j.contains("path")) cfg.input_path = in_j["path"];
    if (in_j.contains("format")) cfg.format = in_j["format"];
    if (in_j.contains("narrative_field")) cfg.narrative_field = in_j["narrative_field"];
    if (in_j.contains("id_field")) cfg.id_field = in_j["id_field"];
  }
  if (j.contains("clean")) {
    const auto& c = j["clean"];
    if (c.contains("min_token_len")) cfg.clean.min_token_len = c["min_token_len"];
    if (c.contains("drop_numeric")) cfg.clean.drop_numeric = c["drop_numeric"];
    if (c.contains("sentence_delimiters")) cfg.clean.sentence_delimiters = c["sentence_delimiters"];
    if (c.contains("keep_empty")) cfg.clean.keep_empty = c["keep_empty"];
    if (c.contains("stopwords")) cfg.stopwords = c["stopwords"];
  }
  if (j.contains("rake")) {
    const auto& r = j["rake"];
    if (r.contains("top_n")) cfg.rake_top_n = r["top_n"];
    if (r.contains("max_phrase_len")) cfg.max_phrase_len = r["max_phrase_len"];
  }
  if (j.contains("wcn")) {
    const auto& w = j["wcn"];
    if (w.contains("window_n")) cfg.wcn.window_n = w["window_n"];
    if (w.contains("min_edge_weight")) cfg.wcn.min_edge_weight = w["min_edge_weight"];
    if (w.contains("content_only")) cfg.wcn.use_content_tokens_only = w["content_only"];
    if (w.contains("formats")) cfg.graph_formats = w["formats"].get<std::vector<std::string>>();
  }
  if (j.contains("freq") && j["freq"].contains("top_n")) cfg.freq_top_n = j["freq"]["top_n"];
  if (j.contains("lda")) {
    const auto& l = j["lda"];
    if (l.contains("fixed_k")) cfg.fixed_k = l["fixed_k"];
    if (l.contains("sweep")) {
      cfg.k_min = l["sweep"].value("k_min", 2);
      cfg.k_max = l["sweep"].value("k_max", 10);
      if (l["sweep"].contains("top_m")) cfg.top_m = l["sweep"]["top_m"];
    }
    if (l.contains("alpha")) cfg.alpha = l["alpha"];
    if (l.contains("beta")) cfg.beta = l["beta"];
    if (l.contains("iterations")) cfg.iterations = l["iterations"];
    if (l.contains("burn_in")) cfg.burn_in = l["burn_in"];
    if (l.contains("seed")) cfg.seed = l["seed"];
    if (l.contains("top_words")) cfg.top_words = l["top_words"];
  }
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"];
}

double round_sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

class ArtifactWriter {
 public:
  ArtifactWriter(std::string dir, bool overwrite)
      : dir_(std::move(dir)), overwrite_(overwrite) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw narmine::UsageError("cannot create output directory: " + dir_);
  }

  std::string write(const std::string& name, const std::string& content) {
    fs::path path = fs::path(dir_) / name;
    if (fs::exists(path) && !overwrite_) {
      throw narmine::UsageError("refusing to overwrite " + path.string() +
                                " (pass --overwrite)");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw narmine::UsageError("cannot write " + path.string());
    out << content;
    paths_.push_back(path.string());
    return path.string();
  }

  const std::vector<std::string>& paths() const { return paths_; }

 private:
  std::string dir_;
  bool overwrite_;
  std::vector<std::string> paths_;
};

struct LoadedCorpus {
  narmine::Corpus corpus;
  narmine::IngestReport report;
};

LoadedCorpus load_corpus(const PipelineConfig& cfg) {
  if (cfg.input_path.empty()) throw narmine::UsageError("no input path given (--input)");
  auto stopwords = narmine::load_stopwords(cfg.stopwords);
  LoadedCorpus loaded;
  auto records = narmine::ingest(cfg.input_path, narmine::parse_format(cfg.format),
                                 cfg.narrative_field, cfg.id_field,
                                 cfg.clean.keep_empty, &loaded.report);
  if (records.empty()) throw narmine::DataError("no usable records in " + cfg.input_path);
  loaded.corpus = narmine::clean(records, cfg.clean, stopwords);
  return loaded;
}

json ingest_json(const narmine::IngestReport& r) {
  return json{{"rows_read", r.rows_read},
              {"rows_dropped_empty", r.rows_dropped_empty},
              {"rows_failed", r.rows_failed}};
}

json frequencies_json(const narmine::FrequencyTable& table) {
  json arr = json::array();
  for (const auto& [word, count] : table.entries) {
    arr.push_back(json{{"word", word}, {"count", count}});
  }
  return json{{"entries", arr}, {"total_tokens", table.total_tokens}};
}

json keywords_json(const std::vector<narmine::ScoredPhrase>& phrases) {
  json arr = json::array();
  for (const auto& p : phrases) {
    arr.push_back(json{{"phrase", p.phrase}, {"score", round_sig6(p.score)},
                       {"support", p.support}});
  }
  return arr;
}

json wcn_summary_json(const narmine::CooccurrenceGraph& graph, int top_m_edges) {
  json edges = json::array();
  for (const auto& [wp, weight] : narmine::top_edges(graph, top_m_edges)) {
    edges.push_back(json{{"source", wp.first}, {"target", wp.second}, {"weight", weight}});
  }
  return json{{"nodes", graph.nodes.size()}, {"edges", graph.edges.size()},
              {"top_edges", edges}};
}

json topics_json(const narmine::LdaModel& model, const narmine::Corpus& corpus,
                 const narmine::CoherenceReport& coherence, int top_words) {
  json arr = json::array();
  for (int t = 0; t < model.config.k; ++t) {
    json words = json::array();
    for (const auto& [word, p] : narmine::top_words(model, corpus, t, top_words)) {
      words.push_back(json{{"word", word}, {"p", round_sig6(p)}});
    }
    arr.push_back(json{{"topic", t}, {"top_words", words},
                       {"coherence", round_sig6(coherence.per_topic[t])}});
  }
  return arr;
}

json sweep_json(const narmine::SweepResult& sweep) {
  json entries = json::array();
  for (const auto& e : sweep.entries) {
    entries.push_back(json{{"k", e.k}, {"mean_coherence", round_sig6(e.mean_coherence)},
                           {"seed", e.seed}});
  }
  return json{{"entries", entries}, {"best_k", sweep.best_k}};
}

narmine::LdaConfig lda_config(const PipelineConfig& cfg, int k) {
  narmine::LdaConfig lc;
  lc.k = k;
  lc.alpha = cfg.alpha;
  lc.beta = cfg.beta;
  lc.iterations = cfg.iterations;
  lc.burn_in = cfg.burn_in;
  lc.seed = cfg.seed;
  return lc;
}

int run_freq(const PipelineConfig& cfg) {
  auto loaded = load_corpus(cfg);
  auto table = narmine::term_frequencies(loaded.corpus, cfg.freq_top_n);
  ArtifactWriter out(cfg.output_dir, cfg.overwrite);
  auto csv_path = out.write("frequencies.csv", narmine::frequency_table_csv(table));
  out.write("frequencies.json", frequencies_json(table).dump(2) + "\n");
  out.write("ingest.json", ingest_json(loaded.report).dump(2) + "\n");
  std::cout << "freq: " << loaded.corpus.documents.size() << " docs, "
            << table.total_tokens << " content tokens -> " << csv_path << "\n";
  return 0;
}

int run_rake(const PipelineConfig& cfg) {
  auto loaded = load_corpus(cfg);
  auto phrases = narmine::top_keywords(loaded.corpus, cfg.rake_top_n, cfg.max_phrase_len);
  ArtifactWriter out(cfg.output_dir, cfg.overwrite);
  auto csv_path = out.write("keywords.csv", narmine::scored_phrases_csv(phrases));
  out.write("keywords.json", keywords_json(phrases).dump(2) + "\n");
  std::cout << "rake: " << phrases.size() << " keywords -> " << csv_path << "\n";
  return 0;
}

int run_wcn(const PipelineConfig& cfg) {
  auto loaded = load_corpus(cfg);
  auto graph = narmine::build_wcn(loaded.corpus, cfg.wcn);
  ArtifactWriter out(cfg.output_dir, cfg.overwrite);
  std::string last;
  for (const auto& format : cfg.graph_formats) {
    std::string name = format == "dot" ? "wcn.dot"
                       : format == "graphml" ? "wcn.graphml"
                       : format == "edgelist-csv" ? "wcn_edges.csv"
                       : throw narmine::UsageError("unknown graph format: " + format);
    last = out.write(name, narmine::export_graph(graph, format));
  }
  std::cout << "wcn: " << graph.nodes.size() << " nodes, " << graph.edges.size()
            << " edges -> " << last << "\n";
  return 0;
}

int run_lda(const PipelineConfig& cfg) {
  if (cfg.fixed_k < 1) throw narmine::UsageError("lda requires --k >= 1");
  auto loaded = load_corpus(cfg);
  auto model = narmine::fit_lda(loaded.corpus, lda_config(cfg, cfg.fixed_k));
  narmine::DocFrequencies docfreq(loaded.corpus);
  auto coherence = narmine::umass_coherence(model, loaded.corpus, docfreq, cfg.top_m);
  ArtifactWriter out(cfg.output_dir, cfg.overwrite);
  out.write("model.json", narmine::model_json(model, loaded.corpus));
  auto topics_path = out.write(
      "topics.json", topics_json(model, loaded.corpus, coherence, cfg.top_words).dump(2) + "\n");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", coherence.mean);
  std::cout << "lda: k=" << cfg.fixed_k << ", mean coherence " << buf << " -> "
            << topics_path << "\n";
  return 0;
}

int run_sweep(const PipelineConfig& cfg) {
  if (!cfg.sweep_set()) throw narmine::UsageError("sweep requires --k-min and --k-max");
  auto loaded = load_corpus(cfg);
  auto sweep = narmine::sweep_k(loaded.corpus, cfg.k_min, cfg.k_max,
                                lda_config(cfg, cfg.k_min), cfg.top_m);
  ArtifactWriter out(cfg.output_dir, cfg.overwrite);
  auto path = out.write("sweep.csv", narmine::sweep_csv(sweep));
  std::cout << "sweep: k in [" << cfg.k_min << "," << cfg.k_max << "], best_k="
            << sweep.best_k << " -> " << path << "\n";
  return 0;
}

int run_report(const PipelineConfig& cfg) {
  if (cfg.fixed_k >= 1 && cfg.sweep_set()) {
    throw narmine::UsageError("set either a fixed k or a sweep range, not both");
  }
  if (cfg.fixed_k < 1 && !cfg.sweep_set()) {
    throw narmine::UsageError("report requires --k or a sweep range (--k-min/--k-max)");
  }
  auto loaded = load_corpus(cfg);
  const auto& corpus = loaded.corpus;
  narmine::DocFrequencies docfreq(corpus);

  json report;
  report["ingest"] = ingest_json(loaded.report);
  report["frequencies"] = frequencies_json(narmine::term_frequencies(corpus, cfg.freq_top_n));
  report["keywords"] =
      keywords_json(narmine::top_keywords(corpus, cfg.rake_top_n, cfg.max_phrase_len));
  report["wcn_summary"] = wcn_summary_json(narmine::build_wcn(corpus, cfg.wcn), 20);

  narmine::SweepResult sweep;
  narmine::LdaModel model;
  if (cfg.sweep_set()) {
    sweep = narmine::sweep_k(corpus, cfg.k_min, cfg.k_max, lda_config(cfg, cfg.k_min), cfg.top_m);
    auto cfg_best = lda_config(cfg, sweep.best_k);
    cfg_best.seed = narmine::mix_seed(cfg.seed, sweep.best_k);
    model = narmine::fit_lda(corpus, cfg_best);
  } else {
    model = narmine::fit_lda(corpus, lda_config(cfg, cfg.fixed_k));
    auto coherence = narmine::umass_coherence(model, corpus, docfreq, cfg.top_m);
    sweep.entries = {{cfg.fixed_k, coherence.mean, cfg.seed}};
    sweep.best_k = cfg.fixed_k;
  }
  auto coherence = narmine::umass_coherence(model, corpus, docfreq, cfg.top_m);
  report["topics"] = topics_json(model, corpus, coherence, cfg.top_words);
  report["coherence_sweep"] = sweep_json(sweep);

  ArtifactWriter out(cfg.output_dir, cfg.overwrite);
  auto path = out.write("report.json", report.dump(2) + "\n");
  std::cout << "report: " << corpus.documents.size() << " docs, best_k="
            << sweep.best_k << " -> " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"narrative corpus mining: frequencies, RAKE keywords, "
               "co-occurrence networks, LDA topics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  PipelineConfig cfg;
  bool keep_numeric = false;
  bool all_tokens = false;

  app.add_option("--config", config_path, "JSON config file; flags override its fields");
  auto* opt_input = app.add_option("--input", cfg.input_path, "input corpus file");
  auto* opt_format = app.add_option("--format", cfg.format, "csv or jsonl")
                         ->check(CLI::IsMember({"csv", "jsonl"}));
  auto* opt_narr = app.add_option("--narrative-field", cfg.narrative_field,
                                  "column/key holding the narrative text");
  auto* opt_id = app.add_option("--id-field", cfg.id_field, "column/key holding record ids");
  auto* opt_out = app.add_option("--out", cfg.output_dir, "output directory");
  auto* opt_seed = app.add_option("--seed", cfg.seed, "base random seed");
  app.add_flag("--overwrite", cfg.overwrite, "overwrite existing artifact files");
  auto* opt_stop = app.add_option("--stopwords", cfg.stopwords, "'builtin' or a file path");
  auto* opt_mtl = app.add_option("--min-token-len", cfg.clean.min_token_len, "");
  auto* opt_kn = app.add_flag("--keep-numeric", keep_numeric, "keep purely numeric tokens");
  auto* opt_ke = app.add_flag("--keep-empty", cfg.clean.keep_empty, "keep empty narratives");
  auto* opt_sd = app.add_option("--sentence-delimiters", cfg.clean.sentence_delimiters, "");

  auto* cmd_freq = app.add_subcommand("freq", "term frequency table");
  auto* opt_ftn = cmd_freq->add_option("--top-n", cfg.freq_top_n, "entries to report");

  auto* cmd_rake = app.add_subcommand("rake", "RAKE keyword extraction");
  auto* opt_rtn = cmd_rake->add_option("--top-n", cfg.rake_top_n, "keywords to report");
  auto* opt_mpl = cmd_rake->add_option("--max-phrase-len", cfg.max_phrase_len, "");

  auto* cmd_wcn = app.add_subcommand("wcn", "word co-occurrence network");
  auto* opt_wn = cmd_wcn->add_option("--window-n", cfg.wcn.window_n, "n-gram window length");
  auto* opt_mew = cmd_wcn->add_option("--min-edge-weight", cfg.wcn.min_edge_weight, "");
  auto* opt_at = cmd_wcn->add_flag("--all-tokens", all_tokens, "include stopwords as nodes");
  auto* opt_gf = cmd_wcn->add_option("--graph-format", cfg.graph_formats,
                                     "dot, graphml and/or edgelist-csv");

  auto* cmd_lda = app.add_subcommand("lda", "fit an LDA topic model at fixed k");
  auto* opt_k = cmd_lda->add_option("--k", cfg.fixed_k, "number of topics");

  auto* cmd_sweep = app.add_subcommand("sweep", "coherence sweep over k");
  auto* opt_kmin = cmd_sweep->add_option("--k-min", cfg.k_min, "");
  auto* opt_kmax = cmd_sweep->add_option("--k-max", cfg.k_max, "");

  auto* cmd_report = app.add_subcommand("report", "run all analyses into one report.json");
  auto* opt_rk = cmd_report->add_option("--k", cfg.fixed_k, "fixed number of topics");
  auto* opt_rkmin = cmd_report->add_option("--k-min", cfg.k_min, "");
  auto* opt_rkmax = cmd_report->add_option("--k-max", cfg.k_max, "");

  std::vector<CLI::App*> lda_like{cmd_lda, cmd_sweep, cmd_report};
  std::vector<CLI::Option*> opt_alpha, opt_beta, opt_iters, opt_burn, opt_topm, opt_topw;
  for (auto* cmd : lda_like) {
    opt_alpha.push_back(cmd->add_option("--alpha", cfg.alpha, "document-topic prior (0 = 50/k)"));
    opt_beta.push_back(cmd->add_option("--beta", cfg.beta, "topic-word prior"));
    opt_iters.push_back(cmd->add_option("--iterations", cfg.iterations, "Gibbs sweeps"));
    opt_burn.push_back(cmd->add_option("--burn-in", cfg.burn_in, "sweeps discarded"));
    opt_topm.push_back(cmd->add_option("--top-m", cfg.top_m, "top words for coherence"));
    opt_topw.push_back(cmd->add_option("--top-words", cfg.top_words, "top words per topic"));
  }
  for (auto* cmd : {cmd_report}) {
    cmd->add_option("--freq-top-n", cfg.freq_top_n, "");
    cmd->add_option("--rake-top-n", cfg.rake_top_n, "");
    cmd->add_option("--max-phrase-len", cfg.max_phrase_len, "");
    cmd->add_option("--window-n", cfg.wcn.window_n, "");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!config_path.empty()) {
      // flags beat the config file: re-apply flag values after loading
      PipelineConfig flag_cfg = cfg;
      bool flag_keep_numeric = keep_numeric;
      bool flag_all_tokens = all_tokens;
      cfg = PipelineConfig{};
      apply_config_file(cfg, config_path);
      auto keep = [&](CLI::Option* opt, auto& dst, const auto& src) {
        if (opt->count() > 0) dst = src;
      };
      keep(opt_input, cfg.input_path, flag_cfg.input_path);
      keep(opt_format, cfg.format, flag_cfg.format);
      keep(opt_narr, cfg.narrative_field, flag_cfg.narrative_field);
      keep(opt_id, cfg.id_field, flag_cfg.id_field);
      keep(opt_out, cfg.output_dir, flag_cfg.output_dir);
      keep(opt_seed, cfg.seed, flag_cfg.seed);
      cfg.overwrite = cfg.overwrite || flag_cfg.overwrite;
      keep(opt_stop, cfg.stopwords, flag_cfg.stopwords);
      keep(opt_mtl, cfg.clean.min_token_len, flag_cfg.clean.min_token_len);
      keep(opt_ke, cfg.clean.keep_empty, flag_cfg.clean.keep_empty);
      keep(opt_sd, cfg.clean.sentence_delimiters, flag_cfg.clean.sentence_delimiters);
      if (opt_kn->count() > 0 && flag_keep_numeric) cfg.clean.drop_numeric = false;
      keep(opt_ftn, cfg.freq_top_n, flag_cfg.freq_top_n);
      keep(opt_rtn, cfg.rake_top_n, flag_cfg.rake_top_n);
      keep(opt_mpl, cfg.max_phrase_len, flag_cfg.max_phrase_len);
      keep(opt_wn, cfg.wcn.window_n, flag_cfg.wcn.window_n);
      keep(opt_mew, cfg.wcn.min_edge_weight, flag_cfg.wcn.min_edge_weight);
      if (opt_at->count() > 0 && flag_all_tokens) cfg.wcn.use_content_tokens_only = false;
      keep(opt_gf, cfg.graph_formats, flag_cfg.graph_formats);
      keep(opt_k, cfg.fixed_k, flag_cfg.fixed_k);
      keep(opt_rk, cfg.fixed_k, flag_cfg.fixed_k);
      keep(opt_kmin, cfg.k_min, flag_cfg.k_min);
      keep(opt_kmax, cfg.k_max, flag_cfg.k_max);
      keep(opt_rkmin, cfg.k_min, flag_cfg.k_min);
      keep(opt_rkmax, cfg.k_max, flag_cfg.k_max);
      for (size_t i = 0; i < lda_like.size(); ++i) {
        keep(opt_alpha[i], cfg.alpha, flag_cfg.alpha);
        keep(opt_beta[i], cfg.beta, flag_cfg.beta);
        keep(opt_iters[i], cfg.iterations, flag_cfg.iterations);
        keep(opt_burn[i], cfg.burn_in, flag_cfg.burn_in);
        keep(opt_topm[i], cfg.top_m, flag_cfg.top_m);
        keep(opt_topw[i], cfg.top_words, flag_cfg.top_words);
      }
    } else {
      if (keep_numeric) cfg.clean.drop_numeric = false;
      if (all_tokens) cfg.wcn.use_content_tokens_only = false;
    }

    if (cmd_freq->parsed()) return run_freq(cfg);
    if (cmd_rake->parsed()) return run_rake(cfg);
    if (cmd_wcn->parsed()) return run_wcn(cfg);
    if (cmd_lda->parsed()) return run_lda(cfg);
    if (cmd_sweep->parsed()) return run_sweep(cfg);
    if (cmd_report->parsed()) return run_report(cfg);
    return 1;
  } catch (const narmine::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const narmine::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
