#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace srf {

/// Tokenizer settings. Tokenization is always lowercasing and splits on any
/// non-alphanumeric byte; an optional stopword set is applied after splitting.
struct TokenizerConfig {
    std::unordered_set<std::string> stopwords;
};

/// Split `text` into lowercased alphanumeric tokens. Total function:
/// empty input (or all-separator input) yields an empty sequence.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

/// Read a stopword file, one word per line (lowercased on load, blank lines ignored).
std::unordered_set<std::string> load_stopwords(const std::string& path);

}  // namespace srf
