#ifndef ARTLANG_ANALYSIS_HPP
#define ARTLANG_ANALYSIS_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "artlang/ngram.hpp"
#include "artlang/switching.hpp"

namespace artlang {

struct AnalysisError : std::runtime_error {
  explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

// Balanced N x G response: rows are sentences, columns grammars (sorted by
// name); every cell holds that sentence's perplexity under that grammar.
struct PerplexityMatrix {
  Eigen::MatrixXd values;
  std::vector<uint64_t> sentence_ids;     // ascending
  std::vector<std::string> grammar_names;  // lexicographic

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

// Builds the full grid from score rows; every (sentence, grammar) cell
// must appear exactly once with a finite perplexity >= 1, and errors name
// the offending cell.
PerplexityMatrix ingest_rows(const std::vector<SentenceScore>& rows);
PerplexityMatrix ingest_scores(const std::vector<std::string>& files);

enum class Coding { Binary, Pm1 };

// Rows follow lexicographic grammar-name order; columns are the intercept,
// K main effects, then the K(K-1)/2 pairwise interactions in (i,j) i<j
// order. Binary coding: main j = bit j (1 = head-initial), interaction
// (i,j) = 1 when bits i and j agree. Pm1 maps bits to -1/+1 and uses their
// product as the interaction.
struct DesignMatrix {
  Eigen::MatrixXd X;
  std::vector<std::string> labels;
  std::vector<std::string> row_names;
  Coding coding = Coding::Binary;
  int K = 0;
};

DesignMatrix build_design(int K, Coding coding = Coding::Binary,
                          const std::vector<std::string>& switch_names = {});

// Random-intercept model for a balanced matrix: L_nk = S_k . beta + u_n +
// eps_nk with u_n ~ N(0, sigma2_dif), eps ~ N(0, sigma2). Fitting profiles
// beta and sigma2 out in closed form (the row covariance is sigma2 (I +
// ratio J), invertible analytically) and maximizes the profiled likelihood
// over ratio = sigma2_dif / sigma2 by golden-section search, with the
// ratio = 0 boundary checked explicitly.
struct MixedModelFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  double sigma2 = 0.0;
  double sigma2_dif = 0.0;
  double ratio = 0.0;
  double log_likelihood = 0.0;
  bool reml = false;
  bool degenerate = false;  // zero-variance response; sigma2 = 0 reported
  std::string note;
  std::vector<std::string> labels;
};

struct FitOptions {
  bool reml = false;  // default is full maximum likelihood
  // Skips the ratio search and evaluates at this ratio (0 = plain GLS
  // with independent errors). Used by diagnostics and tests.
  std::optional<double> fixed_ratio;
};

MixedModelFit fit_mixed(const PerplexityMatrix& L, const DesignMatrix& S,
                        const FitOptions& options = {});

// Log-likelihood of (beta_gls(ratio), sigma2, ratio) for the same model;
// the fit's own reported likelihood equals this function at the optimum.
double mixed_loglik(const PerplexityMatrix& L, const DesignMatrix& S,
                    double ratio, double sigma2);

// K x K symmetric table: diagonal = main effects in switch order,
// off-diagonal (i,j) = pairwise interaction. The intercept is reported
// separately in the fit.
struct CoefficientHeatmap {
  Eigen::MatrixXd value;
  Eigen::MatrixXd se;
  std::vector<std::string> labels;
};

CoefficientHeatmap coefficient_heatmap(const MixedModelFit& fit, int K);

// Mean of the 16 per-grammar average perplexities in each word-order
// class, rows in SOV, SVO, OVS, VOS order.
struct GroupReportRow {
  std::string word_order;
  int grammars = 0;
  double mean_perplexity = 0.0;
};

std::vector<GroupReportRow> group_report(const PerplexityMatrix& L);

// Summary statistics plus a Gaussian kernel density (Silverman bandwidth
// 0.9 min(sd, IQR/1.34) n^(-1/5), 512 points spanning the data plus five
// bandwidths each side). Requires >= 2 values with nonzero spread.
struct DensityPoint {
  double x = 0.0;
  double density = 0.0;
};

struct DistributionReport {
  std::string label;
  size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance, n-1 denominator
  double bandwidth = 0.0;
  std::vector<DensityPoint> density;
};

DistributionReport distribution_report(const std::vector<double>& values,
                                       const std::string& label);

// Column means of L: the per-grammar average perplexities the reports
// aggregate.
std::vector<double> grammar_means(const PerplexityMatrix& L);

}  // namespace artlang

#endif  // ARTLANG_ANALYSIS_HPP
