#include "artlang/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace artlang {

namespace {

std::string cell_name(uint64_t id, const std::string& grammar) {
  return "(sentence " + std::to_string(id) + ", grammar " + grammar + ")";
}

}  // namespace

PerplexityMatrix ingest_rows(const std::vector<SentenceScore>& rows) {
  if (rows.empty()) throw AnalysisError("no score rows to ingest");
  std::set<uint64_t> id_set;
  std::set<std::string> name_set;
  for (const SentenceScore& r : rows) {
    id_set.insert(r.sentence_id);
    name_set.insert(r.grammar_name);
  }
  PerplexityMatrix M;
  M.sentence_ids.assign(id_set.begin(), id_set.end());
  M.grammar_names.assign(name_set.begin(), name_set.end());
  std::map<uint64_t, Eigen::Index> row_of;
  std::map<std::string, Eigen::Index> col_of;
  for (size_t i = 0; i < M.sentence_ids.size(); ++i)
    row_of[M.sentence_ids[i]] = static_cast<Eigen::Index>(i);
  for (size_t j = 0; j < M.grammar_names.size(); ++j)
    col_of[M.grammar_names[j]] = static_cast<Eigen::Index>(j);

  double nan = std::numeric_limits<double>::quiet_NaN();
  M.values.setConstant(static_cast<Eigen::Index>(M.sentence_ids.size()),
                       static_cast<Eigen::Index>(M.grammar_names.size()),
                       nan);
  for (const SentenceScore& r : rows) {
    if (!std::isfinite(r.perplexity) || r.perplexity < 1.0)
      throw AnalysisError("perplexity " + std::to_string(r.perplexity) +
                          " at " + cell_name(r.sentence_id, r.grammar_name) +
                          " is not a finite value >= 1");
    Eigen::Index i = row_of[r.sentence_id], j = col_of[r.grammar_name];
    if (!std::isnan(M.values(i, j)))
      throw AnalysisError("duplicate cell " +
                          cell_name(r.sentence_id, r.grammar_name));
    M.values(i, j) = r.perplexity;
  }
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (std::isnan(M.values(i, j)))
        throw AnalysisError(
            "missing cell " +
            cell_name(M.sentence_ids[static_cast<size_t>(i)],
                      M.grammar_names[static_cast<size_t>(j)]));
  return M;
}

PerplexityMatrix ingest_scores(const std::vector<std::string>& files) {
  std::vector<SentenceScore> rows;
  for (const std::string& f : files) {
    std::vector<SentenceScore> part = read_scores(f);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return ingest_rows(rows);
}

DesignMatrix build_design(int K, Coding coding,
                          const std::vector<std::string>& switch_names) {
  if (K < 2 || K > 20)
    throw AnalysisError("design needs 2 <= K <= 20, got " +
                        std::to_string(K));
  if (!switch_names.empty() && static_cast<int>(switch_names.size()) != K)
    throw AnalysisError("got " + std::to_string(switch_names.size()) +
                        " switch names for K=" + std::to_string(K));
  std::vector<std::string> names = switch_names;
  if (names.empty())
    for (int j = 0; j < K; ++j) names.push_back("s" + std::to_string(j));

  DesignMatrix D;
  D.K = K;
  D.coding = coding;
  D.labels.push_back("intercept");
  for (int j = 0; j < K; ++j) D.labels.push_back(names[j]);
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j)
      D.labels.push_back(names[i] + ":" + names[j]);

  std::vector<SwitchVector> vectors = enumerate_switch_vectors(K);
  Eigen::Index G = static_cast<Eigen::Index>(vectors.size());
  Eigen::Index p = 1 + K + K * (K - 1) / 2;
  D.X.resize(G, p);
  for (Eigen::Index g = 0; g < G; ++g) {
    const SwitchVector& v = vectors[static_cast<size_t>(g)];
    D.row_names.push_back(v.name);
    Eigen::Index col = 0;
    D.X(g, col++) = 1.0;
    for (int j = 0; j < K; ++j)
      D.X(g, col++) =
          coding == Coding::Binary ? (v.bit(j) ? 1.0 : 0.0)
                                   : (v.bit(j) ? 1.0 : -1.0);
    for (int i = 0; i < K; ++i)
      for (int j = i + 1; j < K; ++j) {
        if (coding == Coding::Binary)
          D.X(g, col++) = v.bit(i) == v.bit(j) ? 1.0 : 0.0;
        else
          D.X(g, col++) =
              (v.bit(i) ? 1.0 : -1.0) * (v.bit(j) ? 1.0 : -1.0);
      }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D.X);
  if (qr.rank() < p)
    throw AnalysisError("design matrix is rank deficient: rank " +
                        std::to_string(qr.rank()) + " of " +
                        std::to_string(p));
  return D;
}

namespace {

// Balanced-design sufficient statistics. The row covariance sigma2 (I +
// ratio J) inverts to (I - c J)/sigma2 with c = ratio/(1 + G ratio), so
// every likelihood quantity reduces to these scalars and p-vectors.
struct FitWork {
  double N = 0, G = 0;
  Eigen::Index p = 0;
  Eigen::MatrixXd XtX;
  Eigen::VectorXd s;  // X' 1
  Eigen::VectorXd m;  // X' ybar
  double ssq = 0;     // sum of squared entries of L
  double sum_t = 0;   // grand sum
  double sum_t2 = 0;  // sum of squared row sums
};

FitWork prepare(const PerplexityMatrix& L, const DesignMatrix& S) {
  Eigen::Index N = L.rows(), G = L.cols(), p = S.X.cols();
  if (S.X.rows() != G)
    throw AnalysisError("design has " + std::to_string(S.X.rows()) +
                        " rows for " + std::to_string(G) + " grammars");
  if (N < 2) throw AnalysisError("need at least 2 sentences");
  if (static_cast<double>(N) * static_cast<double>(G) <=
      static_cast<double>(p) + 2.0)
    throw AnalysisError("too few observations for " + std::to_string(p) +
                        " coefficients");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S.X);
  if (qr.rank() < p) throw AnalysisError("design matrix is rank deficient");

  FitWork w;
  w.N = static_cast<double>(N);
  w.G = static_cast<double>(G);
  w.p = p;
  w.XtX = S.X.transpose() * S.X;
  w.s = S.X.transpose() * Eigen::VectorXd::Ones(G);
  Eigen::VectorXd ybar = L.values.colwise().mean();
  w.m = S.X.transpose() * ybar;
  w.ssq = L.values.squaredNorm();
  Eigen::VectorXd t = L.values.rowwise().sum();
  w.sum_t = t.sum();
  w.sum_t2 = t.squaredNorm();
  return w;
}

struct ProfilePoint {
  Eigen::VectorXd beta;
  double q = 0;       // GLS-weighted residual sum of squares
  double sigma2 = 0;  // profiled
  double loglik = 0;
};

constexpr double kTwoPi = 6.283185307179586476925286766559;

ProfilePoint profile_at(const FitWork& w, double ratio, bool reml) {
  double c = ratio / (1.0 + w.G * ratio);
  Eigen::MatrixXd A = w.XtX - c * (w.s * w.s.transpose());
  Eigen::VectorXd rhs = w.m - c * w.s * (w.sum_t / w.N);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  ProfilePoint pp;
  pp.beta = ldlt.solve(rhs);
  double u = w.s.dot(pp.beta);
  pp.q = (w.ssq - 2.0 * w.N * pp.beta.dot(w.m) +
          w.N * pp.beta.dot(w.XtX * pp.beta)) -
         c * (w.sum_t2 - 2.0 * u * w.sum_t + w.N * u * u);
  pp.q = std::max(pp.q, 0.0);

  double ng = w.N * w.G;
  if (!reml) {
    pp.sigma2 = pp.q / ng;
    pp.loglik = -0.5 * (ng * std::log(kTwoPi * pp.sigma2) +
                        w.N * std::log1p(w.G * ratio) + ng);
    return pp;
  }
  double dof = ng - static_cast<double>(w.p);
  pp.sigma2 = pp.q / dof;
  double logdet_a = ldlt.vectorD().array().log().sum();
  pp.loglik = -0.5 * (dof * std::log(kTwoPi * pp.sigma2) +
                      w.N * std::log1p(w.G * ratio) + logdet_a +
                      static_cast<double>(w.p) * std::log(w.N) + dof);
  return pp;
}

double golden_ratio_search(const FitWork& w, bool reml) {
  auto value = [&](double r) { return profile_at(w, r, reml).loglik; };
  // Bracket by doubling until the profile stops improving, then refine.
  double hi = 1.0, f_hi = value(hi);
  while (hi < 1e12) {
    double f2 = value(2.0 * hi);
    if (f2 <= f_hi) break;
    hi *= 2.0;
    f_hi = f2;
  }
  hi *= 2.0;
  double a = 0.0, b = hi;
  const double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = value(x1), f2 = value(x2);
  while (b - a > 1e-9 * std::max(1.0, b)) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = value(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = value(x2);
    }
  }
  double mid = 0.5 * (a + b);
  // The zero boundary is a legal optimum; take it when it wins.
  return value(0.0) >= value(mid) ? 0.0 : mid;
}

}  // namespace

MixedModelFit fit_mixed(const PerplexityMatrix& L, const DesignMatrix& S,
                        const FitOptions& options) {
  FitWork w = prepare(L, S);
  MixedModelFit fit;
  fit.reml = options.reml;
  fit.labels = S.labels;

  double ng = w.N * w.G;
  double tss = w.ssq - w.sum_t * w.sum_t / ng;
  if (tss <= 1e-12 * std::max(1.0, w.ssq)) {
    // Constant response: the likelihood is unbounded in sigma2 -> 0, so
    // report the boundary rather than iterating into it.
    fit.degenerate = true;
    fit.note = "zero-variance response; sigma2 = sigma2_dif = 0 reported";
    Eigen::LDLT<Eigen::MatrixXd> ldlt(w.XtX);
    fit.beta = ldlt.solve(w.m);
    fit.se = Eigen::VectorXd::Zero(w.p);
    fit.log_likelihood = std::numeric_limits<double>::infinity();
    return fit;
  }

  double ratio = options.fixed_ratio ? *options.fixed_ratio
                                     : golden_ratio_search(w, options.reml);
  if (ratio < 0.0) throw AnalysisError("variance ratio must be >= 0");
  ProfilePoint pp = profile_at(w, ratio, options.reml);
  if (!std::isfinite(pp.loglik))
    throw AnalysisError("non-finite likelihood at ratio " +
                        std::to_string(ratio));

  fit.beta = pp.beta;
  fit.ratio = ratio;
  fit.sigma2 = pp.sigma2;
  fit.sigma2_dif = std::max(ratio * pp.sigma2, 0.0);
  fit.log_likelihood = pp.loglik;

  double c = ratio / (1.0 + w.G * ratio);
  Eigen::MatrixXd A = w.XtX - c * (w.s * w.s.transpose());
  Eigen::MatrixXd cov =
      pp.sigma2 *
      A.ldlt().solve(Eigen::MatrixXd::Identity(w.p, w.p)) / w.N;
  fit.se = cov.diagonal().array().max(0.0).sqrt().matrix();
  return fit;
}

double mixed_loglik(const PerplexityMatrix& L, const DesignMatrix& S,
                    double ratio, double sigma2) {
  if (!(sigma2 > 0.0)) throw AnalysisError("sigma2 must be positive");
  if (ratio < 0.0) throw AnalysisError("ratio must be >= 0");
  FitWork w = prepare(L, S);
  ProfilePoint pp = profile_at(w, ratio, /*reml=*/false);
  double ng = w.N * w.G;
  return -0.5 * (ng * std::log(kTwoPi * sigma2) +
                 w.N * std::log1p(w.G * ratio) + pp.q / sigma2);
}

namespace {

Eigen::Index pair_index(int i, int j, int K) {
  // (0,1), (0,2), ..., (0,K-1), (1,2), ... in i<j order.
  return static_cast<Eigen::Index>(i) * K - i * (i + 1) / 2 + (j - i - 1);
}

}  // namespace

CoefficientHeatmap coefficient_heatmap(const MixedModelFit& fit, int K) {
  Eigen::Index p = 1 + K + K * (K - 1) / 2;
  if (fit.beta.size() != p)
    throw AnalysisError("fit has " + std::to_string(fit.beta.size()) +
                        " coefficients, expected " + std::to_string(p) +
                        " for K=" + std::to_string(K));
  CoefficientHeatmap h;
  h.value.setZero(K, K);
  h.se.setZero(K, K);
  for (int i = 0; i < K; ++i) {
    h.value(i, i) = fit.beta(1 + i);
    h.se(i, i) = fit.se(1 + i);
    h.labels.push_back(fit.labels[static_cast<size_t>(1 + i)]);
  }
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      Eigen::Index col = 1 + K + pair_index(i, j, K);
      h.value(i, j) = h.value(j, i) = fit.beta(col);
      h.se(i, j) = h.se(j, i) = fit.se(col);
    }
  return h;
}

std::vector<double> grammar_means(const PerplexityMatrix& L) {
  Eigen::VectorXd means = L.values.colwise().mean();
  return {means.data(), means.data() + means.size()};
}

std::vector<GroupReportRow> group_report(const PerplexityMatrix& L) {
  std::vector<double> means = grammar_means(L);
  constexpr WordOrder kOrders[] = {WordOrder::SOV, WordOrder::SVO,
                                   WordOrder::OVS, WordOrder::VOS};
  double sums[4] = {0, 0, 0, 0};
  int counts[4] = {0, 0, 0, 0};
  for (size_t j = 0; j < means.size(); ++j) {
    WordOrder wo =
        word_order_of(SwitchVector::from_name(L.grammar_names[j]));
    sums[static_cast<int>(wo)] += means[j];
    counts[static_cast<int>(wo)] += 1;
  }
  std::vector<GroupReportRow> rows;
  for (WordOrder wo : kOrders) {
    int i = static_cast<int>(wo);
    if (counts[i] == 0)
      throw AnalysisError("word order " + std::string(word_order_name(wo)) +
                          " has no grammars in the matrix");
    rows.push_back({std::string(word_order_name(wo)), counts[i],
                    sums[i] / counts[i]});
  }
  return rows;
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  size_t lo = static_cast<size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

DistributionReport distribution_report(const std::vector<double>& values,
                                       const std::string& label) {
  if (values.size() < 2)
    throw AnalysisError("distribution '" + label + "' needs >= 2 values");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double n = static_cast<double>(sorted.size());

  DistributionReport rep;
  rep.label = label;
  rep.count = sorted.size();
  rep.min = sorted.front();
  rep.max = sorted.back();
  double sum = 0;
  for (double v : sorted) sum += v;
  rep.mean = sum / n;
  double ss = 0;
  for (double v : sorted) ss += (v - rep.mean) * (v - rep.mean);
  rep.variance = ss / (n - 1.0);

  double sd = std::sqrt(rep.variance);
  double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  if (!(spread > 0.0))
    throw AnalysisError("distribution '" + label +
                        "' has zero spread; no density bandwidth exists");
  rep.bandwidth = 0.9 * spread * std::pow(n, -0.2);

  constexpr int kPoints = 512;
  double lo = rep.min - 5.0 * rep.bandwidth;
  double hi = rep.max + 5.0 * rep.bandwidth;
  double step = (hi - lo) / (kPoints - 1);
  const double inv_norm = 1.0 / std::sqrt(kTwoPi);
  rep.density.reserve(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    double x = lo + step * i;
    double acc = 0;
    for (double v : sorted) {
      double z = (x - v) / rep.bandwidth;
      acc += std::exp(-0.5 * z * z);
    }
    rep.density.push_back({x, acc * inv_norm / (n * rep.bandwidth)});
  }
  return rep;
}

}  // namespace artlang
