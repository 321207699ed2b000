#include "artlang/commands.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "artlang/analysis.hpp"
#include "artlang/corpus.hpp"
#include "artlang/manifest.hpp"
#include "artlang/ngram.hpp"
#include "artlang/reports.hpp"

namespace artlang {

namespace fs = std::filesystem;

namespace {

Lexicon load_lexicon(const std::string& path) {
  return path.empty() ? builtin_lexicon() : parse_lexicon_file(path);
}

Grammar load_grammar(const std::string& spec, const Lexicon& lex) {
  return spec == "builtin" ? base_grammar(lex) : parse_grammar_file(spec);
}

// cmd_validate wants the parse to succeed even when the grammar breaks
// invariants, so it can print every diagnostic rather than just the first
// formatted exception.
Grammar load_grammar_unvalidated(const std::string& spec,
                                 const Lexicon& lex) {
  if (spec == "builtin") return base_grammar(lex);
  std::ifstream in(spec);
  if (!in) throw GrammarError("cannot open grammar file '" + spec + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grammar_unvalidated(buf.str());
}

Smoothing parse_smoothing(const std::string& text) {
  if (text == "mle") return Smoothing::mle();
  if (text == "kneser_ney" || text == "kn") return Smoothing::kneser_ney();
  if (text == "add_k") return Smoothing::add_k(1.0);
  if (text.rfind("add_k:", 0) == 0)
    return Smoothing::add_k(std::stod(text.substr(6)));
  throw NGramError("unknown smoothing '" + text +
                   "' (expected mle, add_k[:k], kneser_ney)");
}

int run(const char* what, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << what << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_generate(const GenerateOptions& opt) {
  return run("generate", [&] {
    Lexicon lex = load_lexicon(opt.lexicon);
    Grammar g = load_grammar(opt.grammar, lex);
    CorpusPlan plan;
    plan.sentences_total = opt.total;
    plan.num_splits = opt.splits;
    plan.train_fraction = opt.train_fraction;
    plan.dev_fraction = opt.dev_fraction;
    plan.test_fraction = opt.test_fraction;
    plan.seed = opt.seed;
    ParallelCorpus pc =
        generate_parallel(g, plan, opt.out, opt.max_expansions);
    std::cout << "wrote " << pc.grammar_names().size() << " grammars x "
              << plan.num_splits << " splits ("
              << pc.shape().train_lines << "/" << pc.shape().dev_lines
              << "/" << pc.shape().test_lines << " lines) under " << opt.out
              << '\n';
  });
}

int cmd_score(const ScoreOptions& opt) {
  return run("score", [&] {
    nlohmann::ordered_json corpus_manifest =
        read_manifest(fs::path(opt.corpus) / "manifest.json");
    CorpusPlan plan;
    plan.sentences_total = corpus_manifest["plan"]["sentences_total"];
    plan.num_splits = corpus_manifest["plan"]["num_splits"];
    plan.train_fraction = corpus_manifest["plan"]["fractions"][0];
    plan.dev_fraction = corpus_manifest["plan"]["fractions"][1];
    plan.test_fraction = corpus_manifest["plan"]["fractions"][2];
    plan.seed = corpus_manifest["seed"];
    int num_switches =
        static_cast<int>(corpus_manifest["switches"].size());
    ParallelCorpus pc(plan, num_switches);
    Smoothing smoothing = parse_smoothing(opt.smoothing);

    fs::create_directories(opt.out);
    std::string summary = "grammar,mean_perplexity,corpus_perplexity\n";
    for (const std::string& name : pc.grammar_names()) {
      fs::path score_dir = fs::path(opt.out) / ("grammar-" + name);
      fs::create_directories(score_dir);
      double sum_mean = 0, sum_corpus = 0;
      for (int split = 0; split < plan.num_splits; ++split) {
        NGramModel model = train_ngram(
            corpus_file_path(opt.corpus, name, split, Section::Train)
                .string(),
            opt.order, smoothing);
        std::vector<uint64_t> ids = pc.indices_for(split, Section::Test);
        CorpusScore cs = score_corpus(
            model,
            corpus_file_path(opt.corpus, name, split, Section::Test)
                .string(),
            name, &ids);
        write_scores(
            (score_dir / ("split-" + std::to_string(split) + ".tsv"))
                .string(),
            cs.sentences);
        sum_mean += cs.mean_perplexity;
        sum_corpus += cs.corpus_perplexity;
      }
      double mean = sum_mean / plan.num_splits;
      double corpus_mean = sum_corpus / plan.num_splits;
      summary += name + ',' + std::to_string(mean) + ',' +
                 std::to_string(corpus_mean) + '\n';
      std::cout << "grammar " << name << ": mean perplexity " << mean
                << '\n';
    }
    write_text_file(fs::path(opt.out) / "summary.csv", summary);

    nlohmann::ordered_json manifest;
    manifest["tool"] = tool_version();
    manifest["corpus"] = opt.corpus;
    manifest["corpus_seed"] = plan.seed;
    manifest["order"] = opt.order;
    manifest["smoothing"] = opt.smoothing;
    manifest["grammars"] = pc.grammar_names();
    manifest["splits"] = plan.num_splits;
    write_manifest(fs::path(opt.out) / "manifest.json", manifest);
  });
}

namespace {

std::vector<std::string> collect_score_files(
    const std::vector<std::string>& args) {
  std::vector<std::string> files;
  for (const std::string& arg : args) {
    if (fs::is_directory(arg)) {
      for (const auto& entry : fs::recursive_directory_iterator(arg))
        if (entry.is_regular_file() && entry.path().extension() == ".tsv")
          files.push_back(entry.path().string());
    } else {
      files.push_back(arg);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw AnalysisError("no score files found");
  return files;
}

}  // namespace

int cmd_analyze(const AnalyzeOptions& opt) {
  return run("analyze", [&] {
    PerplexityMatrix L = ingest_scores(collect_score_files(opt.scores));
    int K = static_cast<int>(L.grammar_names.front().size());
    for (const std::string& name : L.grammar_names)
      if (static_cast<int>(name.size()) != K)
        throw AnalysisError("grammar names disagree on switch count: '" +
                            name + "'");
    std::vector<std::string> expected;
    for (const SwitchVector& v : enumerate_switch_vectors(K))
      expected.push_back(v.name);
    if (L.grammar_names != expected)
      throw AnalysisError("scores do not cover all " +
                          std::to_string(expected.size()) +
                          " switch configurations exactly once");

    Coding coding;
    if (opt.coding == "binary")
      coding = Coding::Binary;
    else if (opt.coding == "pm1")
      coding = Coding::Pm1;
    else
      throw AnalysisError("unknown coding '" + opt.coding + "'");

    std::vector<std::string> labels;
    {
      Lexicon lex = builtin_lexicon();
      Grammar g = load_grammar(opt.grammar, lex);
      if (g.num_switches() == K) labels = g.switches();
    }
    DesignMatrix S = build_design(K, coding, labels);
    MixedModelFit fit = fit_mixed(L, S, {.reml = opt.reml});

    fs::create_directories(opt.out);
    fs::path out(opt.out);
    write_coefficients_csv(out / "coefficients.csv", fit);
    CoefficientHeatmap heat = coefficient_heatmap(fit, K);
    write_heatmap_csv(out / "heatmap.csv", heat);
    std::vector<GroupReportRow> groups = group_report(L);
    write_group_csv(out / "group_report.csv", groups);

    std::vector<DistributionReport> densities;
    std::string density_note;
    try {
      densities.push_back(distribution_report(grammar_means(L), opt.label));
    } catch (const AnalysisError& e) {
      density_note = e.what();
      std::cerr << "warning: skipping density table: " << e.what() << '\n';
    }
    write_density_csv(out / "density.csv", densities);

    if (opt.svg) {
      write_text_file(out / "heatmap.svg", heatmap_svg(heat));
      if (!densities.empty())
        write_text_file(out / "density.svg", density_svg(densities));
    }

    nlohmann::ordered_json fitj;
    fitj["tool"] = tool_version();
    fitj["coding"] = opt.coding;
    fitj["estimation"] = opt.reml ? "reml" : "ml";
    fitj["sentences"] = L.rows();
    fitj["grammars"] = L.cols();
    fitj["log_likelihood"] = fit.log_likelihood;
    fitj["sigma2"] = fit.sigma2;
    fitj["sigma2_dif"] = fit.sigma2_dif;
    fitj["variance_ratio"] = fit.ratio;
    fitj["degenerate"] = fit.degenerate;
    if (!fit.note.empty()) fitj["note"] = fit.note;
    if (!density_note.empty()) fitj["density_note"] = density_note;
    nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < fit.beta.size(); ++i)
      coeffs.push_back({{"label", fit.labels[static_cast<size_t>(i)]},
                        {"estimate", fit.beta(i)},
                        {"stderr", fit.se(i)}});
    fitj["coefficients"] = coeffs;
    write_manifest(out / "fit.json", fitj);

    std::cout << "fit: sigma2 = " << fit.sigma2
              << ", sigma2_dif = " << fit.sigma2_dif
              << ", log likelihood = " << fit.log_likelihood << '\n';
    for (const GroupReportRow& r : groups)
      std::cout << "group " << r.word_order << ": mean perplexity "
                << r.mean_perplexity << " over " << r.grammars
                << " grammars\n";
    std::cout << "reports under " << opt.out << '\n';
  });
}

int cmd_validate(const ValidateOptions& opt) {
  return run("validate", [&] {
    Lexicon lex = load_lexicon(opt.lexicon);
    Grammar g = load_grammar_unvalidated(opt.grammar, lex);
    std::vector<Diagnostic> diags = validate(g);
    for (const Diagnostic& d : diags)
      std::cerr << "invalid: [" << d.invariant << "] "
                << (d.subject.empty() ? "" : d.subject + ": ") << d.message
                << '\n';
    if (opt.dump_grammar) std::cout << serialize_grammar(g);
    if (opt.dump_lexicon) std::cout << serialize_lexicon(lex);
    if (!opt.dump_grammar && !opt.dump_lexicon)
      std::cout << "grammar: " << g.rules().size() << " rules, "
                << g.symbols().size() << " symbols, " << g.num_switches()
                << " switches; lexicon: " << lex.entries().size()
                << " entries\n";
    if (!diags.empty()) throw GrammarError("grammar failed validation");
  });
}

}  // namespace artlang
