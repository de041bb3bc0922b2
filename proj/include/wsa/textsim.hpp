#pragma once

// String-based similarity between two definitions: set overlap, sequence
// alignment, edit distances and a handful of surface flags. Sequence
// functions are templated so the same code serves word and character mode.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "wsa/error.hpp"
#include "wsa/lexdata.hpp"
#include "wsa/text.hpp"

namespace wsa::textsim {

using TokenSet = std::set<std::string>;

inline TokenSet to_set(std::span<const std::string> tokens) {
  return {tokens.begin(), tokens.end()};
}

enum class OverlapKind { JACCARD, DICE, CONTAINMENT, SMOOTHED };

namespace detail {

template <class Set>
std::size_t intersection_size(const Set& a, const Set& b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

}  // namespace detail

/// Overlap coefficients over token sets. Two empty sets are identical (1);
/// exactly one empty set gives 0.
template <class Set>
double set_overlap(const Set& a, const Set& b, OverlapKind kind, double alpha = 0.5) {
  if (kind == OverlapKind::SMOOTHED && !(alpha > 0.0))
    throw Error(ErrorCode::NonPositiveAlpha, "smoothed Jaccard needs alpha > 0");
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const double inter = static_cast<double>(detail::intersection_size(a, b));
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double uni = na + nb - inter;
  switch (kind) {
    case OverlapKind::JACCARD: return inter / uni;
    case OverlapKind::DICE: return 2.0 * inter / (na + nb);
    case OverlapKind::CONTAINMENT: return inter / std::min(na, nb);
    case OverlapKind::SMOOTHED: {
      // Jaccard's |A|+|B|-|A n B| denominator with every count passed through
      // sigma; expm1 keeps precision as alpha -> 0, where this tends to Jaccard.
      const auto sigma = [alpha](double x) { return -std::expm1(-alpha * x); };
      return sigma(inter) / (sigma(na) + sigma(nb) - sigma(inter));
    }
  }
  return 0.0;
}

struct SequenceMetrics {
  double lcs_subsequence = 0;
  double lcs_substring = 0;
  double common_prefix = 0;
  double common_suffix = 0;
  double ngram = 0;
};

template <class T>
std::size_t lcs_subsequence_length(std::span<const T> a, std::span<const T> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

template <class T>
std::size_t lcs_substring_length(std::span<const T> a, std::span<const T> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

/// Multiset count of shared n-grams.
template <class T>
std::size_t matching_ngrams(std::span<const T> a, std::span<const T> b, std::size_t n) {
  if (a.size() < n || b.size() < n) return 0;
  std::map<std::vector<T>, std::size_t> counts;
  for (std::size_t i = 0; i + n <= a.size(); ++i)
    ++counts[std::vector<T>(a.begin() + i, a.begin() + i + n)];
  std::size_t matches = 0;
  for (std::size_t i = 0; i + n <= b.size(); ++i) {
    auto it = counts.find(std::vector<T>(b.begin() + i, b.begin() + i + n));
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++matches;
    }
  }
  return matches;
}

/// Each raw count is divided by the mean length of the two sequences; the
/// n-gram count by the mean number of n-grams (floored at 1). Identical
/// sequences score 1 everywhere.
template <class T>
SequenceMetrics sequence_metrics(std::span<const T> a, std::span<const T> b, std::size_t n = 2) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n-gram order must be >= 1");
  SequenceMetrics m;
  if (std::equal(a.begin(), a.end(), b.begin(), b.end())) {
    m = {1, 1, 1, 1, 1};
    return m;
  }
  if (a.empty() || b.empty()) return m;
  const double avg = (static_cast<double>(a.size()) + static_cast<double>(b.size())) / 2.0;
  std::size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < a.size() && suffix < b.size() &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix])
    ++suffix;
  const auto grams = [n](std::size_t len) {
    return len >= n ? static_cast<double>(len - n + 1) : 0.0;
  };
  const double ngram_den = std::max(1.0, (grams(a.size()) + grams(b.size())) / 2.0);
  const auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
  m.lcs_subsequence = clamp01(static_cast<double>(lcs_subsequence_length(a, b)) / avg);
  m.lcs_substring = clamp01(static_cast<double>(lcs_substring_length(a, b)) / avg);
  m.common_prefix = clamp01(static_cast<double>(prefix) / avg);
  m.common_suffix = clamp01(static_cast<double>(suffix) / avg);
  m.ngram = clamp01(static_cast<double>(matching_ngrams(a, b, n)) / ngram_den);
  return m;
}

// ---------------------------------------------------------------------------
// Edit-based metrics, over code points.

inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(text::decode_utf8(a), text::decode_utf8(b));
}

/// 1 - distance / max length; two empty strings are identical.
inline double levenshtein_similarity(std::string_view a, std::string_view b) {
  const auto ua = text::decode_utf8(a);
  const auto ub = text::decode_utf8(b);
  const std::size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(longest);
}

/// Match window floor(max(|A|,|B|)/2) - 1; t is half the transposition count.
inline double jaro(std::u32string_view a, std::u32string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t longest = std::max(a.size(), b.size());
  const std::size_t window = longest / 2 > 0 ? longest / 2 - 1 : 0;
  std::vector<bool> a_matched(a.size(), false), b_matched(b.size(), false);
  std::size_t m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(b.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (b_matched[j] || a[i] != b[j]) continue;
      a_matched[i] = b_matched[j] = true;
      ++m;
      break;
    }
  }
  if (m == 0) return 0.0;
  std::size_t half_transpositions = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a_matched[i]) continue;
    while (!b_matched[k]) ++k;
    if (a[i] != b[k]) ++half_transpositions;
    ++k;
  }
  const double md = static_cast<double>(m);
  const double t = static_cast<double>(half_transpositions) / 2.0;
  return (md / static_cast<double>(a.size()) + md / static_cast<double>(b.size()) +
          (md - t) / md) /
         3.0;
}

inline double jaro(std::string_view a, std::string_view b) {
  return jaro(text::decode_utf8(a), text::decode_utf8(b));
}

/// Standard prefix boost: ell capped at 4, scaling 0.1.
inline double jaro_winkler(std::string_view a, std::string_view b) {
  const auto ua = text::decode_utf8(a);
  const auto ub = text::decode_utf8(b);
  const double j = jaro(ua, ub);
  std::size_t ell = 0;
  while (ell < 4 && ell < ua.size() && ell < ub.size() && ua[ell] == ub[ell]) ++ell;
  return j + static_cast<double>(ell) * 0.1 * (1.0 - j);
}

/// Mean over tokens of A of the best match in B. Asymmetric.
template <class WordSim>
double monge_elkan(std::span<const std::string> a, std::span<const std::string> b,
                   WordSim&& sim) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  double total = 0;
  for (const auto& x : a) {
    double best = 0;
    for (const auto& y : b) best = std::max(best, static_cast<double>(sim(x, y)));
    total += best;
  }
  return total / static_cast<double>(a.size());
}

struct EditMetrics {
  std::size_t levenshtein_raw = 0;
  double levenshtein_norm = 0;
  double jaro = 0;
  double jaro_winkler = 0;
  double monge_elkan = 0;
};

inline EditMetrics edit_metrics(std::string_view a, std::string_view b) {
  EditMetrics m;
  const auto ua = text::decode_utf8(a);
  const auto ub = text::decode_utf8(b);
  m.levenshtein_raw = levenshtein(ua, ub);
  const std::size_t longest = std::max(ua.size(), ub.size());
  m.levenshtein_norm =
      longest == 0 ? 1.0
                   : 1.0 - static_cast<double>(m.levenshtein_raw) / static_cast<double>(longest);
  m.jaro = jaro(ua, ub);
  m.jaro_winkler = jaro_winkler(a, b);
  const auto ta = text::split_ws(a);
  const auto tb = text::split_ws(b);
  m.monge_elkan = monge_elkan(std::span<const std::string>(ta), std::span<const std::string>(tb),
                              [](const std::string& x, const std::string& y) {
                                return jaro_winkler(x, y);
                              });
  return m;
}

// ---------------------------------------------------------------------------
// Surface flags

struct SurfaceOptions {
  std::set<std::string> negation_words = {"no",      "not",     "never", "none",
                                          "nothing", "without", "n't"};
};

struct SurfaceFlags {
  double slr = 0;
  double avg_word_len_ratio = 0;
  double negation = 0;
  double number = 0;
  double bag_of_words = 0;
};

/// 1 - min/max; 0 when both are zero.
inline double length_ratio(double x, double y) {
  const double hi = std::max(x, y);
  if (hi <= 0) return 0.0;
  return 1.0 - std::min(x, y) / hi;
}

inline bool has_negation(std::span<const std::string> tokens, const SurfaceOptions& opts) {
  for (const auto& t : tokens) {
    if (opts.negation_words.count(t)) return true;
    if (t.size() > 3 && t.compare(t.size() - 3, 3, "n't") == 0 &&
        opts.negation_words.count("n't"))
      return true;
  }
  return false;
}

/// Maximal ASCII digit runs in the raw text.
inline std::set<std::string> extract_numbers(std::string_view s) {
  std::set<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] >= '0' && s[i] <= '9') {
      std::size_t j = i;
      while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
      out.emplace(s.substr(i, j - i));
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

inline double average_word_length(std::span<const std::string> tokens) {
  if (tokens.empty()) return 0.0;
  double chars = 0;
  for (const auto& t : tokens) chars += static_cast<double>(text::decode_utf8(t).size());
  return chars / static_cast<double>(tokens.size());
}

inline std::set<std::uint64_t> hashed_bag(std::span<const std::string> tokens) {
  std::set<std::uint64_t> out;
  for (const auto& t : tokens) out.insert(text::fnv1a64(t));
  return out;
}

inline SurfaceFlags surface_flags(const Sense& a, const Sense& b, const SurfaceOptions& opts = {}) {
  SurfaceFlags f;
  f.slr = length_ratio(static_cast<double>(a.tokens.size()), static_cast<double>(b.tokens.size()));
  f.avg_word_len_ratio = length_ratio(average_word_length(a.tokens), average_word_length(b.tokens));
  f.negation = has_negation(a.tokens, opts) == has_negation(b.tokens, opts) ? 1.0 : 0.0;
  f.number = extract_numbers(a.text) == extract_numbers(b.text) ? 1.0 : 0.0;
  f.bag_of_words = set_overlap(hashed_bag(a.tokens), hashed_bag(b.tokens), OverlapKind::JACCARD);
  return f;
}

// ---------------------------------------------------------------------------

struct TextSimOptions {
  double smoothing_alpha = 0.5;
  std::size_t ngram_order = 2;
  SurfaceOptions surface;
};

/// Full named metric set for a sense pair; word mode for sequence metrics,
/// character mode for edit metrics.
struct StringFeatureSet {
  std::map<std::string, double> values;

  double at(const std::string& name) const { return values.at(name); }
};

inline StringFeatureSet string_features(const Sense& a, const Sense& b,
                                        const TextSimOptions& opts = {}) {
  StringFeatureSet out;
  auto& v = out.values;
  const auto sa = to_set(a.tokens);
  const auto sb = to_set(b.tokens);
  v["jaccard"] = set_overlap(sa, sb, OverlapKind::JACCARD);
  v["dice"] = set_overlap(sa, sb, OverlapKind::DICE);
  v["containment"] = set_overlap(sa, sb, OverlapKind::CONTAINMENT);
  v["smoothed_jaccard"] = set_overlap(sa, sb, OverlapKind::SMOOTHED, opts.smoothing_alpha);
  const auto seq = sequence_metrics(std::span<const std::string>(a.tokens),
                                    std::span<const std::string>(b.tokens), opts.ngram_order);
  v["lcs_subsequence"] = seq.lcs_subsequence;
  v["lcs_substring"] = seq.lcs_substring;
  v["common_prefix"] = seq.common_prefix;
  v["common_suffix"] = seq.common_suffix;
  v["ngram"] = seq.ngram;
  const std::string ja = text::join(a.tokens);
  const std::string jb = text::join(b.tokens);
  const auto ed = edit_metrics(ja, jb);
  v["levenshtein_norm"] = ed.levenshtein_norm;
  v["jaro"] = ed.jaro;
  v["jaro_winkler"] = ed.jaro_winkler;
  v["monge_elkan"] = ed.monge_elkan;
  const auto sf = surface_flags(a, b, opts.surface);
  v["slr"] = sf.slr;
  v["avg_word_len_ratio"] = sf.avg_word_len_ratio;
  v["negation"] = sf.negation;
  v["number"] = sf.number;
  v["bag_of_words"] = sf.bag_of_words;
  return out;
}

inline const std::vector<std::string>& string_feature_names() {
  static const std::vector<std::string> names = {
      "jaccard",       "dice",          "containment",     "smoothed_jaccard",
      "lcs_subsequence", "lcs_substring", "common_prefix",   "common_suffix",
      "ngram",         "levenshtein_norm", "jaro",          "jaro_winkler",
      "monge_elkan",   "slr",           "avg_word_len_ratio", "negation",
      "number",        "bag_of_words"};
  return names;
}

}  // namespace wsa::textsim
