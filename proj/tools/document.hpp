#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "qtaut/affine.hpp"
#include "qtaut/field.hpp"
#include "qtaut/lambda_model.hpp"

namespace qtaut::cli {

enum class Mode { torus, affine, both };

/// A parsed problem document. Pair keys are 1-based "i,j" in the text and
/// 0-based PairIndex here.
struct ProblemDocument {
  std::size_t n = 0;
  Mode mode = Mode::torus;
  std::optional<MultiparamSpec> lambda;
  std::optional<std::map<PairIndex, Rational>> rational_q;
  Field field;

  /// The torus data: `lambda` as given, or `rational_q` factored over Q.
  MultiparamSpec torus_spec() const;
  /// The multiparameter matrix over `field`. A lambda-only document is
  /// realized by sending p_s to the s-th prime.
  QMatrix q_matrix() const;
};

const char* to_string(Mode m);

/// Throws InvalidInput on malformed or inconsistent documents.
ProblemDocument parse_document(const std::string& text);
ProblemDocument load_document(const std::string& path);  // "-" reads stdin

/// "1,3" -> {0,2}; enforces 1 <= i < j <= n.
PairIndex parse_pair_key(const std::string& key, std::size_t n);
Rational parse_rational(const std::string& text);
/// Field spec: "Q", "rational", or a prime such as "5".
Field parse_field(const std::string& text);

}  // namespace qtaut::cli
