#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "srf/distribution.hpp"
#include "srf/tokenizer.hpp"

namespace srf {

/// A raw corpus document before indexing.
struct Document {
    std::string doc_id;
    std::string text;
};

struct Posting {
    std::int32_t doc;  // internal id, assigned by corpus order
    std::int32_t tf;

    bool operator==(const Posting&) const = default;
};

struct DocEntry {
    std::string doc_id;
    std::int32_t length;  // token count after tokenization
};

struct TermEntry {
    std::int64_t cf = 0;                // collection frequency, sum of tfs
    std::vector<Posting> postings;      // sorted by internal id, no duplicates
};

/// Inverted index with collection statistics. Immutable after build; any
/// number of concurrent readers is safe.
class InvertedIndex {
public:
    std::int32_t doc_count() const { return static_cast<std::int32_t>(docs_.size()); }
    std::int64_t total_tokens() const { return total_tokens_; }
    double avg_doc_length() const {
        return static_cast<double>(total_tokens_) / static_cast<double>(docs_.size());
    }

    const DocEntry& doc(std::int32_t internal_id) const { return docs_.at(static_cast<std::size_t>(internal_id)); }
    /// -1 when the external id is unknown.
    std::int32_t internal_id(const std::string& doc_id) const;

    /// nullptr when the term does not occur in the corpus.
    const TermEntry* term(const std::string& t) const;
    std::int32_t df(const std::string& t) const;
    std::int64_t cf(const std::string& t) const;
    std::size_t vocab_size() const { return terms_.size(); }

    const std::map<std::string, TermEntry>& terms() const { return terms_; }
    const std::vector<DocEntry>& docs() const { return docs_; }

    friend InvertedIndex build_index(const std::vector<Document>& corpus,
                                     const TokenizerConfig& config);
    friend InvertedIndex load_index(const std::string& path);

private:
    std::map<std::string, TermEntry> terms_;
    std::vector<DocEntry> docs_;
    std::unordered_map<std::string, std::int32_t> id_of_;
    std::int64_t total_tokens_ = 0;
};

/// Build an index over a corpus. Internal ids follow input order.
/// Errors: duplicate doc_id (named in the message), empty corpus.
InvertedIndex build_index(const std::vector<Document>& corpus,
                          const TokenizerConfig& config = {});

/// P(t|C) = cf(t) / |C|. Errors on an empty collection.
TermDistribution collection_model(const InvertedIndex& index);

/// Maximum-likelihood document model P(t|D) = tf(t,D) / |D| for one document,
/// recovered from the postings. Errors on empty documents.
TermDistribution doc_model(const InvertedIndex& index, std::int32_t internal_id);

/// Document models for a batch of documents in one pass over the postings.
/// Result is aligned with `internal_ids`; empty documents yield empty mass.
std::vector<TermDistribution> gather_doc_models(const InvertedIndex& index,
                                                const std::vector<std::int32_t>& internal_ids);

/// Versioned binary persistence (magic "SRFX"). load(save(I)) is observably
/// identical to I. Errors: bad magic / version mismatch (both named),
/// truncation.
void save_index(const InvertedIndex& index, const std::string& path);
InvertedIndex load_index(const std::string& path);

/// Corpus input: UTF-8 TSV, one `doc_id<TAB>text` per line.
std::vector<Document> read_corpus_tsv(const std::string& path);

}  // namespace srf
