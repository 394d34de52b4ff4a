#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "limlab/colorings.hpp"
#include "limlab/order.hpp"

namespace limlab {

enum class SearchMode { total, partial_on_cofinal, strictly_increasing };

std::string to_string(SearchMode m);

struct PHInstance {
  QuasiOrder order;
  Coloring coloring;  // arity n+1, total on weakly increasing tuples
  int n = 1;
  SearchMode mode = SearchMode::total;

  // strictly-increasing mode: fixed base set; when absent, every
  // (n+1)-subset is tried in lexicographic order
  std::optional<std::vector<Elem>> strict_domain;

  // when set, the witness constant must come from this list
  std::optional<std::vector<int>> allowed_colors;

  Diagnostics validate() const;
};

enum class SearchStatus { witness_found, refuted_by_exhaustion, inconclusive };

std::string to_string(SearchStatus s);

struct SearchStats {
  long long nodes = 0;        // attempted assignments
  long long prunes = 0;       // law or color rejections
  long long budget = 0;
  double elapsed_ms = 0;
  int workers = 1;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::inconclusive;
  std::optional<CofinalFn> witness;
  std::optional<int> constant_color;
  SearchStats stats;
  std::string note;  // base-set choice, extension fallbacks, and the like
};

// Backtracking search for an F with both cofinality laws and constant chain
// color, variables in (length, lex) order, values in linear-extension order;
// the first witness found is the lexicographically least reachable one.
SearchOutcome find_witness(const PHInstance& inst, long long budget,
                           int workers = 1);

// Re-checks an outcome's function against the instance: cofinality laws,
// mode-specific strictness, and chain monochromaticity; lists every
// violation.
Diagnostics verify_witness(const PHInstance& inst, const CofinalFn& F);

// Product coloring (c(x), x strictly increasing?); its witnesses with an odd
// constant are exactly the strictly increasing monochromatic witnesses of c.
Coloring strictify(const QuasiOrder& P, const Coloring& c);

struct RefutationCertificate {
  int N = 0;
  long long pairs_scanned = 0;
  long long assignments = 0;
  long long monochromatic = 0;
};

// For every pair a < b < N and every value triple u < v < w in [0,N), the
// two chain colors f_w(u), f_w(v) differ; the certificate records the scan.
RefutationCertificate refute_injective_coloring(int N,
                                                const InjectionSystem& sys);

}  // namespace limlab
