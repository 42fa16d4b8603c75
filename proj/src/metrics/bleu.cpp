#include "gdt/metrics/bleu.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

#include "gdt/error.hpp"

namespace gdt::metrics {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '.' || c >= 0x80;
}

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts out;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return out;
}

}  // namespace

std::vector<std::string> bleu_tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (is_word_byte(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
      out.emplace_back(text.substr(i, j - i));
      i = j;
    } else {
      out.emplace_back(1, text[i]);
      ++i;
    }
  }
  return out;
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (std::size_t n = 0; n < 4; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_length += other.hyp_length;
  ref_length += other.ref_length;
  return *this;
}

BleuStats bleu_stats(const std::vector<std::string>& hypothesis,
                     const std::vector<std::vector<std::string>>& references) {
  BleuStats s;
  s.hyp_length = hypothesis.size();
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto hyp = count_ngrams(hypothesis, n);
    NgramCounts max_ref;
    for (const auto& ref : references) {
      for (const auto& [gram, count] : count_ngrams(ref, n)) {
        auto& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    for (const auto& [gram, count] : hyp) {
      s.totals[n - 1] += count;
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) s.matches[n - 1] += std::min(count, it->second);
    }
  }
  // Closest reference length; ties go to the shorter reference.
  bool first = true;
  for (const auto& ref : references) {
    const std::size_t len = ref.size();
    const auto dist = [&](std::size_t l) {
      return l > s.hyp_length ? l - s.hyp_length : s.hyp_length - l;
    };
    if (first || dist(len) < dist(s.ref_length) ||
        (dist(len) == dist(s.ref_length) && len < s.ref_length)) {
      s.ref_length = len;
      first = false;
    }
  }
  return s;
}

double bleu_from_stats(const BleuStats& s) {
  if (s.hyp_length == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    if (s.matches[n] == 0 || s.totals[n] == 0) return 0.0;
    log_sum += 0.25 * std::log(static_cast<double>(s.matches[n]) /
                               static_cast<double>(s.totals[n]));
  }
  const double c = static_cast<double>(s.hyp_length);
  const double r = static_cast<double>(s.ref_length);
  const double log_bp = c > r ? 0.0 : 1.0 - r / c;
  return std::exp(log_bp + log_sum);
}

double bleu4(std::string_view generated, std::span<const std::string> references) {
  auto hyp = bleu_tokenize(generated);
  if (hyp.empty()) throw Error(ErrorCode::EmptyInput, "generated text has no tokens");
  std::vector<std::vector<std::string>> refs;
  for (const auto& r : references) {
    auto toks = bleu_tokenize(r);
    if (!toks.empty()) refs.push_back(std::move(toks));
  }
  if (refs.empty()) throw Error(ErrorCode::EmptyInput, "no non-empty reference");
  return bleu_from_stats(bleu_stats(hyp, refs));
}

double corpus_bleu4(std::span<const std::string> generated,
                    std::span<const std::vector<std::string>> references) {
  if (generated.size() != references.size()) {
    throw Error(ErrorCode::InvalidArgument, "hypotheses and references differ in count");
  }
  if (generated.empty()) throw Error(ErrorCode::EmptyInput, "empty corpus");
  BleuStats total;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    std::vector<std::vector<std::string>> refs;
    for (const auto& r : references[i]) refs.push_back(bleu_tokenize(r));
    total += bleu_stats(bleu_tokenize(generated[i]), refs);
  }
  if (total.hyp_length == 0) throw Error(ErrorCode::EmptyInput, "all hypotheses are empty");
  return bleu_from_stats(total);
}

}  // namespace gdt::metrics
