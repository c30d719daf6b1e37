#include "srf/tokenizer.hpp"

#include <fstream>
#include <stdexcept>

namespace srf {

namespace {

// Locale-independent ASCII classification; bytes >= 0x80 are separators.
bool is_alnum(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char lower(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            if (config.stopwords.find(current) == config.stopwords.end()) {
                tokens.push_back(current);
            }
            current.clear();
        }
    };
    for (unsigned char c : text) {
        if (is_alnum(c)) {
            current.push_back(lower(c));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_stopwords: cannot open '" + path + "'");
    }
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string word;
        for (unsigned char c : line) {
            if (is_alnum(c)) word.push_back(lower(c));
        }
        if (!word.empty()) words.insert(word);
    }
    return words;
}

}  // namespace srf
