#include "srf/trec_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace srf {

bool Qrels::has_query(const std::string& query_id) const {
    return grades.find(query_id) != grades.end();
}

std::int32_t Qrels::grade(const std::string& query_id, const std::string& doc_id) const {
    auto q = grades.find(query_id);
    if (q == grades.end()) return 0;
    auto d = q->second.find(doc_id);
    return d == q->second.end() ? 0 : d->second;
}

std::int32_t Qrels::relevant_count(const std::string& query_id) const {
    auto q = grades.find(query_id);
    if (q == grades.end()) return 0;
    std::int32_t n = 0;
    for (const auto& [doc, grade] : q->second) {
        (void)doc;
        if (grade >= 1) ++n;
    }
    return n;
}

void write_trec_run(const std::string& path, const std::map<std::string, RankedList>& runs,
                    const std::string& tag) {
    if (tag.empty() || tag.find_first_of(" \t") != std::string::npos) {
        throw std::invalid_argument("write_trec_run: tag must be a single non-empty token");
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("write_trec_run: cannot open '" + path + "' for writing");
    }
    char score_buf[64];
    for (const auto& [query_id, list] : runs) {
        std::int32_t rank = 0;
        for (const ScoredDoc& e : list.entries) {
            ++rank;
            std::snprintf(score_buf, sizeof(score_buf), "%.6f", e.score);
            out << query_id << " Q0 " << e.doc_id << ' ' << rank << ' ' << score_buf << ' ' << tag
                << '\n';
        }
    }
    if (!out) {
        throw std::runtime_error("write_trec_run: write failed for '" + path + "'");
    }
}

std::map<std::string, std::vector<TrecRunEntry>> read_trec_run_raw(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_trec_run: cannot open '" + path + "'");
    }
    std::map<std::string, std::vector<TrecRunEntry>> raw;
    std::map<std::string, std::set<std::string>> seen_docs;
    std::map<std::string, std::set<std::int32_t>> seen_ranks;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string query_id, q0, doc_id, rank_s, score_s, tag, extra;
        if (!(fields >> query_id >> q0 >> doc_id >> rank_s >> score_s >> tag)) {
            throw std::runtime_error("read_trec_run: malformed line " + std::to_string(line_no) +
                                     " in '" + path + "'");
        }
        if (fields >> extra) {
            throw std::runtime_error("read_trec_run: trailing fields on line " +
                                     std::to_string(line_no) + " in '" + path + "'");
        }
        std::int32_t rank;
        double score;
        try {
            std::size_t pos = 0;
            rank = std::stoi(rank_s, &pos);
            if (pos != rank_s.size() || rank < 1) throw std::invalid_argument("rank");
            score = std::stod(score_s, &pos);
            if (pos != score_s.size()) throw std::invalid_argument("score");
        } catch (const std::exception&) {
            throw std::runtime_error("read_trec_run: malformed line " + std::to_string(line_no) +
                                     " in '" + path + "'");
        }
        if (!seen_docs[query_id].insert(doc_id).second) {
            throw std::runtime_error("read_trec_run: duplicate document '" + doc_id +
                                     "' for query '" + query_id + "' at line " +
                                     std::to_string(line_no));
        }
        if (!seen_ranks[query_id].insert(rank).second) {
            throw std::runtime_error("read_trec_run: duplicate rank " + std::to_string(rank) +
                                     " for query '" + query_id + "' at line " +
                                     std::to_string(line_no));
        }
        raw[query_id].push_back(TrecRunEntry{rank, doc_id, score});
    }
    for (auto& [query_id, entries] : raw) {
        (void)query_id;
        std::sort(entries.begin(), entries.end(),
                  [](const TrecRunEntry& a, const TrecRunEntry& b) { return a.rank < b.rank; });
    }
    return raw;
}

std::map<std::string, RankedList> read_trec_run(const std::string& path) {
    auto raw = read_trec_run_raw(path);
    std::map<std::string, RankedList> runs;
    for (auto& [query_id, entries] : raw) {
        RankedList list;
        list.query_id = query_id;
        list.k = static_cast<std::int32_t>(entries.size());
        list.entries.reserve(entries.size());
        for (auto& e : entries) list.entries.push_back(ScoredDoc{std::move(e.doc_id), e.score});
        runs.emplace(query_id, std::move(list));
    }
    return runs;
}

Qrels read_qrels(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_qrels: cannot open '" + path + "'");
    }
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string query_id, iter, doc_id, grade_s, extra;
        if (!(fields >> query_id >> iter >> doc_id >> grade_s)) {
            throw std::runtime_error("read_qrels: malformed line " + std::to_string(line_no) +
                                     " in '" + path + "'");
        }
        if (fields >> extra) {
            throw std::runtime_error("read_qrels: trailing fields on line " +
                                     std::to_string(line_no) + " in '" + path + "'");
        }
        std::int32_t grade;
        try {
            std::size_t pos = 0;
            grade = std::stoi(grade_s, &pos);
            if (pos != grade_s.size()) throw std::invalid_argument("grade");
        } catch (const std::exception&) {
            throw std::runtime_error("read_qrels: non-integer grade at line " +
                                     std::to_string(line_no) + " in '" + path + "'");
        }
        if (grade < 0) {
            throw std::runtime_error("read_qrels: negative grade at line " +
                                     std::to_string(line_no) + " in '" + path + "'");
        }
        auto& docs = qrels.grades[query_id];
        if (!docs.emplace(doc_id, grade).second) {
            throw std::runtime_error("read_qrels: duplicate pair (" + query_id + ", " + doc_id +
                                     ") at line " + std::to_string(line_no));
        }
    }
    return qrels;
}

}  // namespace srf
