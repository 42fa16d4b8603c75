#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gdt::metrics {

// Word runs of [A-Za-z0-9_.] (and bytes >= 0x80) form one token; every other
// non-space byte is a token of its own.
std::vector<std::string> bleu_tokenize(std::string_view text);

// Sufficient statistics for BLEU-4; they add across sentences.
struct BleuStats {
  std::array<std::size_t, 4> matches{};  // clipped n-gram matches, n = 1..4
  std::array<std::size_t, 4> totals{};   // candidate n-grams, n = 1..4
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;  // closest reference length (ties -> shorter)

  BleuStats& operator+=(const BleuStats& other);
};

BleuStats bleu_stats(const std::vector<std::string>& hypothesis,
                     const std::vector<std::vector<std::string>>& references);

/// Geometric mean of the four modified precisions with uniform weights times
/// the brevity penalty. No smoothing: any order without matches gives 0.
double bleu_from_stats(const BleuStats& stats);

/// Sentence BLEU-4. Throws gdt::Error(EmptyInput) if the hypothesis or every
/// reference tokenizes to nothing.
double bleu4(std::string_view generated, std::span<const std::string> references);

/// Corpus BLEU-4 over aligned (hypothesis, references) pairs; clipped counts
/// and lengths are summed before the precisions are formed.
double corpus_bleu4(std::span<const std::string> generated,
                    std::span<const std::vector<std::string>> references);

}  // namespace gdt::metrics
