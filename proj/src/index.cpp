#include "srf/index.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "binary_io.hpp"

namespace srf {

namespace {
constexpr char kMagic[4] = {'S', 'R', 'F', 'X'};
constexpr std::uint8_t kFormatVersion = 1;
}  // namespace

std::int32_t InvertedIndex::internal_id(const std::string& doc_id) const {
    auto it = id_of_.find(doc_id);
    return it == id_of_.end() ? -1 : it->second;
}

const TermEntry* InvertedIndex::term(const std::string& t) const {
    auto it = terms_.find(t);
    return it == terms_.end() ? nullptr : &it->second;
}

std::int32_t InvertedIndex::df(const std::string& t) const {
    const TermEntry* e = term(t);
    return e ? static_cast<std::int32_t>(e->postings.size()) : 0;
}

std::int64_t InvertedIndex::cf(const std::string& t) const {
    const TermEntry* e = term(t);
    return e ? e->cf : 0;
}

InvertedIndex build_index(const std::vector<Document>& corpus, const TokenizerConfig& config) {
    if (corpus.empty()) {
        throw std::invalid_argument("build_index: empty corpus");
    }
    InvertedIndex index;
    index.docs_.reserve(corpus.size());
    for (const auto& doc : corpus) {
        if (index.id_of_.count(doc.doc_id)) {
            throw std::invalid_argument("build_index: duplicate doc_id '" + doc.doc_id + "'");
        }
        const auto id = static_cast<std::int32_t>(index.docs_.size());
        index.id_of_.emplace(doc.doc_id, id);

        auto tokens = tokenize(doc.text, config);
        std::map<std::string, std::int32_t> counts;
        for (const auto& t : tokens) ++counts[t];
        for (const auto& [t, tf] : counts) {
            TermEntry& entry = index.terms_[t];
            entry.postings.push_back(Posting{id, tf});
            entry.cf += tf;
        }
        index.docs_.push_back(DocEntry{doc.doc_id, static_cast<std::int32_t>(tokens.size())});
        index.total_tokens_ += static_cast<std::int64_t>(tokens.size());
    }
    return index;
}

TermDistribution collection_model(const InvertedIndex& index) {
    if (index.total_tokens() <= 0) {
        throw std::invalid_argument("collection_model: collection has no tokens");
    }
    TermDistribution dist;
    const double total = static_cast<double>(index.total_tokens());
    for (const auto& [t, entry] : index.terms()) {
        dist.mass[t] = static_cast<double>(entry.cf) / total;
    }
    return dist;
}

TermDistribution doc_model(const InvertedIndex& index, std::int32_t internal_id) {
    if (internal_id < 0 || internal_id >= index.doc_count()) {
        throw std::invalid_argument("doc_model: internal id out of range");
    }
    if (index.doc(internal_id).length == 0) {
        throw std::invalid_argument("doc_model: document '" + index.doc(internal_id).doc_id +
                                    "' is empty");
    }
    auto models = gather_doc_models(index, {internal_id});
    return models.front();
}

std::vector<TermDistribution> gather_doc_models(const InvertedIndex& index,
                                                const std::vector<std::int32_t>& internal_ids) {
    std::vector<TermDistribution> models(internal_ids.size());

    // position of each requested id, sorted for the merge against postings
    std::vector<std::pair<std::int32_t, std::size_t>> wanted;
    wanted.reserve(internal_ids.size());
    for (std::size_t i = 0; i < internal_ids.size(); ++i) {
        const auto id = internal_ids[i];
        if (id < 0 || id >= index.doc_count()) {
            throw std::invalid_argument("gather_doc_models: internal id out of range");
        }
        wanted.emplace_back(id, i);
    }
    std::sort(wanted.begin(), wanted.end());

    for (const auto& [t, entry] : index.terms()) {
        const auto& postings = entry.postings;
        std::size_t pi = 0;
        for (const auto& [id, slot] : wanted) {
            while (pi < postings.size() && postings[pi].doc < id) ++pi;
            if (pi == postings.size()) break;
            if (postings[pi].doc == id) {
                const double len = static_cast<double>(index.doc(id).length);
                models[slot].mass[t] += static_cast<double>(postings[pi].tf) / len;
            }
        }
    }
    return models;
}

void save_index(const InvertedIndex& index, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("save_index: cannot open '" + path + "' for writing");
    }
    out.write(kMagic, 4);
    detail::write_u8(out, kFormatVersion);
    detail::write_u64(out, static_cast<std::uint64_t>(index.doc_count()));
    detail::write_u64(out, static_cast<std::uint64_t>(index.total_tokens()));
    for (const auto& doc : index.docs()) {
        detail::write_string(out, doc.doc_id);
        detail::write_u64(out, static_cast<std::uint64_t>(doc.length));
    }
    detail::write_u64(out, index.vocab_size());
    for (const auto& [t, entry] : index.terms()) {
        detail::write_string(out, t);
        detail::write_u64(out, entry.postings.size());
        for (const Posting& p : entry.postings) {
            detail::write_u64(out, static_cast<std::uint64_t>(p.doc));
            detail::write_u64(out, static_cast<std::uint64_t>(p.tf));
        }
    }
    if (!out) {
        throw std::runtime_error("save_index: write failed for '" + path + "'");
    }
}

InvertedIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("load_index: cannot open '" + path + "'");
    }
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4) detail::truncated("index header");
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error(std::string("load_index: bad magic, expected 'SRFX', found '") +
                                 std::string(magic, 4) + "'");
    }
    const auto version = detail::read_u8(in, "index version");
    if (version != kFormatVersion) {
        throw std::runtime_error("load_index: format version mismatch, expected " +
                                 std::to_string(static_cast<int>(kFormatVersion)) + ", found " +
                                 std::to_string(static_cast<int>(version)));
    }

    InvertedIndex index;
    const auto n_docs = detail::read_u64(in, "document count");
    index.total_tokens_ = static_cast<std::int64_t>(detail::read_u64(in, "token count"));
    index.docs_.reserve(n_docs);
    for (std::uint64_t i = 0; i < n_docs; ++i) {
        DocEntry doc;
        doc.doc_id = detail::read_string(in, "doc_id");
        doc.length = static_cast<std::int32_t>(detail::read_u64(in, "doc length"));
        index.id_of_.emplace(doc.doc_id, static_cast<std::int32_t>(i));
        index.docs_.push_back(std::move(doc));
    }
    const auto n_terms = detail::read_u64(in, "vocabulary size");
    for (std::uint64_t i = 0; i < n_terms; ++i) {
        std::string t = detail::read_string(in, "term");
        const auto df = detail::read_u64(in, "df");
        TermEntry entry;
        entry.postings.reserve(df);
        for (std::uint64_t j = 0; j < df; ++j) {
            const auto doc = detail::read_u64(in, "posting doc");
            const auto tf = detail::read_u64(in, "posting tf");
            entry.postings.push_back(
                Posting{static_cast<std::int32_t>(doc), static_cast<std::int32_t>(tf)});
            entry.cf += static_cast<std::int64_t>(tf);
        }
        index.terms_.emplace(std::move(t), std::move(entry));
    }
    return index;
}

std::vector<Document> read_corpus_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_corpus_tsv: cannot open '" + path + "'");
    }
    std::vector<Document> corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw std::runtime_error("read_corpus_tsv: line " + std::to_string(line_no) +
                                     " has no tab separator");
        }
        corpus.push_back(Document{line.substr(0, tab), line.substr(tab + 1)});
    }
    return corpus;
}

}  // namespace srf
