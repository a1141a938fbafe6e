#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "om/boundedness.hpp"
#include "om/campanato.hpp"
#include "om/corpus.hpp"
#include "om/io.hpp"

namespace om {

struct SuiteConfig {
  std::uint64_t seed = 1;
  int depth = 3;
  int count = 50;
  std::string filtration_kind = "dyadic";  // "dyadic" | "random"
  int max_branching = 3;
  double skew = 0.5;
  OrliczFunction phi = OrliczFunction::power(0.5);
  std::vector<double> qs = {1, 2, 4};
  GapOptions gap;
  double tol = 1e-9;
};

struct SuiteResult {
  std::string name;
  bool pass = true;
  int cases = 0;
  int failures = 0;
  Json report;
};

const std::vector<std::string>& suite_names();  // orlicz norms atomic boundedness duality jn
SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg);

/// Tidy CSV flattening of a suite report: suite,path,value — one leaf per row.
std::string report_csv(const SuiteResult& result);

/// Empirical duality constant: max duality_ratio over the pairs
/// (corpus[2i], corpus[2i+1]); prefix-monotone, so corpus doubling at a
/// fixed seed only extends the pair list.
double duality_empirical_c(const std::vector<Martingale>& corpus,
                           const OrliczFunction& phi, const GapOptions& gap);

/// Five-quasi-norm table and the worst pairwise corpus ratio
/// (max over norm pairs of max_f norm_a(f)/norm_b(f)).
Json chain_corpus_report(const std::vector<Martingale>& corpus,
                         const OrliczFunction& phi);

/// Worker count: ORLICZ_MART_THREADS, else 1; results are index-ordered so
/// scheduling never changes output.
int thread_count();
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace om
