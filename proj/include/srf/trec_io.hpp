#pragma once

#include <map>
#include <string>
#include <vector>

#include "srf/retrieval.hpp"

namespace srf {

/// TREC-format relevance judgments: (query, doc) -> grade, grades >= 0.
struct Qrels {
    std::map<std::string, std::map<std::string, std::int32_t>> grades;

    bool has_query(const std::string& query_id) const;
    std::int32_t grade(const std::string& query_id, const std::string& doc_id) const;
    /// Number of documents with grade >= 1 for the query.
    std::int32_t relevant_count(const std::string& query_id) const;
};

/// Write runs in the TREC exchange format, one line per entry:
/// `query_id Q0 doc_id rank score tag` (space separated, rank 1-based,
/// score with 6 decimal places). Queries are written in id order.
void write_trec_run(const std::string& path, const std::map<std::string, RankedList>& runs,
                    const std::string& tag);

/// Strict TREC run reader. Entries are ordered by the file's rank field;
/// malformed lines, duplicate documents and duplicate ranks are errors that
/// name the offending line.
std::map<std::string, RankedList> read_trec_run(const std::string& path);

/// One parsed run line, with the file's rank field preserved.
struct TrecRunEntry {
    std::int32_t rank;
    std::string doc_id;
    double score;
};

/// Parse a run file into per-query entries sorted by rank, keeping the raw
/// rank values (callers decide how to treat gaps).
std::map<std::string, std::vector<TrecRunEntry>> read_trec_run_raw(const std::string& path);

/// Qrels format: `query_id 0 doc_id grade`. Duplicate pairs and negative
/// grades are rejected.
Qrels read_qrels(const std::string& path);

}  // namespace srf
