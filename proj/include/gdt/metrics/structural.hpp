#pragma once

#include <cstddef>

#include "gdt/flexscript/ast.hpp"

namespace gdt::metrics {

using flexscript::Script;

// Weights of the connection and object scores in SVR.
struct SvrWeights {
  double cs = 0.6;
  double os = 0.4;

  // Throws gdt::Error(InvalidArgument) unless both are >= 0 and sum to 1.
  void validate() const;
};

struct ConnectionScore {
  double cs = 0.0;
  std::size_t matched = 0;  // M
  std::size_t total = 0;    // N
};

struct ObjectScore {
  double os = 0.0;
  std::size_t valid = 0;     // K'
  std::size_t required = 0;  // K
};

struct StructuralScore {
  double cs = 0.0;
  double os = 0.0;
  double svr = 0.0;
  std::size_t n_truth_connections = 0;
  std::size_t m_matched_connections = 0;
  std::size_t k_required_objects = 0;
  std::size_t k_valid_objects = 0;
};

/// Fraction of the reference's distinct (from, to, port) triples reproduced by
/// the generated script. Throws gdt::Error(EmptyReference) if the reference
/// has no connections.
ConnectionScore connection_score(const Script& generated, const Script& truth);

/// Fraction of reference declarations matched in the generated script by
/// exact (case-sensitive) name and identical object type. Throws
/// gdt::Error(EmptyReference) if the reference declares nothing.
ObjectScore object_score(const Script& generated, const Script& truth);

double svr(double cs, double os, const SvrWeights& weights = {});

StructuralScore structural_score(const Script& generated, const Script& truth,
                                 const SvrWeights& weights = {});

}  // namespace gdt::metrics
