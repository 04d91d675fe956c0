#include "arag/retriever.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace arag {

namespace {

const std::unordered_set<std::string>& stopword_set() {
    // the classic 33-word English list
    static const std::unordered_set<std::string> words = {
        "a",  "an",   "and",  "are",  "as",    "at",    "be",   "but", "by",
        "for", "if",   "in",   "into", "is",    "it",    "no",   "not", "of",
        "on",  "or",   "such", "that", "the",   "their", "then", "there",
        "these", "they", "this", "to",  "was",  "will",  "with"};
    return words;
}

bool all_ascii_letters(const std::string& w) {
    for (char c : w)
        if (c < 'a' || c > 'z') return false;
    return true;
}

// --- Porter stemmer helpers; word is lowercase a-z ---

bool is_consonant(const std::string& w, std::size_t i) {
    char c = w[i];
    switch (c) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 || !is_consonant(w, i - 1);
        default:
            return true;
    }
}

// number of VC sequences in the form [C](VC)^m[V]
int measure(const std::string& w) {
    std::size_t i = 0, n = w.size();
    while (i < n && is_consonant(w, i)) ++i;
    int m = 0;
    while (true) {
        while (i < n && !is_consonant(w, i)) ++i;
        if (i == n) break;
        ++m;
        while (i < n && is_consonant(w, i)) ++i;
    }
    return m;
}

bool contains_vowel(const std::string& w) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!is_consonant(w, i)) return true;
    return false;
}

bool ends_double_consonant(const std::string& w) {
    std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// consonant-vowel-consonant tail where the final consonant is not w, x or y
bool ends_cvc(const std::string& w) {
    std::size_t n = w.size();
    if (n < 3) return false;
    if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1))
        return false;
    char c = w[n - 1];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, const char* suffix) {
    std::size_t len = std::strlen(suffix);
    return w.size() >= len && w.compare(w.size() - len, len, suffix) == 0;
}

// replace suffix if present and measure(stem) satisfies min_m; returns true on match
bool replace_if(std::string& w, const char* suffix, const char* repl, int min_m) {
    if (!ends_with(w, suffix)) return false;
    std::string stem = w.substr(0, w.size() - std::strlen(suffix));
    if (measure(stem) > min_m) w = stem + repl;
    return true;  // suffix matched even if the m-condition blocked the rewrite
}

}  // namespace

std::string porter_stem(const std::string& term) {
    if (term.size() <= 2 || !all_ascii_letters(term)) return term;
    std::string w = term;

    // step 1a
    if (ends_with(w, "sses")) w.erase(w.size() - 2);
    else if (ends_with(w, "ies")) w.erase(w.size() - 2);
    else if (!ends_with(w, "ss") && ends_with(w, "s")) w.erase(w.size() - 1);

    // step 1b
    bool cleanup = false;
    if (ends_with(w, "eed")) {
        if (measure(w.substr(0, w.size() - 3)) > 0) w.erase(w.size() - 1);
    } else if (ends_with(w, "ed") && contains_vowel(w.substr(0, w.size() - 2))) {
        w.erase(w.size() - 2);
        cleanup = true;
    } else if (ends_with(w, "ing") && contains_vowel(w.substr(0, w.size() - 3))) {
        w.erase(w.size() - 3);
        cleanup = true;
    }
    if (cleanup) {
        if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
            w.push_back('e');
        } else if (ends_double_consonant(w)) {
            char c = w.back();
            if (c != 'l' && c != 's' && c != 'z') w.pop_back();
        } else if (measure(w) == 1 && ends_cvc(w)) {
            w.push_back('e');
        }
    }

    // step 1c
    if (ends_with(w, "y") && contains_vowel(w.substr(0, w.size() - 1)))
        w.back() = 'i';

    // step 2 (longest suffix first)
    static const std::array<std::pair<const char*, const char*>, 19> step2 = {{
        {"ization", "ize"}, {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"ational", "ate"}, {"tional", "tion"},
        {"biliti", "ble"},  {"ation", "ate"},   {"alism", "al"},
        {"aliti", "al"},    {"iviti", "ive"},   {"ousli", "ous"},
        {"entli", "ent"},   {"enci", "ence"},   {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},
        {"ator", "ate"},
    }};
    bool matched2 = false;
    for (const auto& [suf, repl] : step2) {
        if (replace_if(w, suf, repl, 0)) { matched2 = true; break; }
    }
    if (!matched2) replace_if(w, "eli", "e", 0);

    // step 3
    static const std::array<std::pair<const char*, const char*>, 7> step3 = {{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    for (const auto& [suf, repl] : step3)
        if (replace_if(w, suf, repl, 0)) break;

    // step 4 (plain removals at m > 1; "ion" needs a stem ending in s or t)
    static const std::array<const char*, 18> step4 = {
        "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent",
        "ion",   "ism",  "ate",  "iti",  "ous",  "ive",  "ize", "ou",
        "al",    "er",
    };
    for (const char* suf : step4) {
        if (!ends_with(w, suf)) continue;
        std::string stem = w.substr(0, w.size() - std::strlen(suf));
        bool ion_ok = std::strcmp(suf, "ion") != 0 || ends_with(stem, "s") || ends_with(stem, "t");
        if (ion_ok && measure(stem) > 1) w = stem;
        break;  // longest matching suffix decides the rule, fired or not
    }

    // step 5a
    if (ends_with(w, "e")) {
        std::string stem = w.substr(0, w.size() - 1);
        int m = measure(stem);
        if (m > 1 || (m == 1 && !ends_cvc(stem))) w = stem;
    }
    // step 5b
    if (measure(w) > 1 && ends_double_consonant(w) && w.back() == 'l')
        w.pop_back();

    return w;
}

bool is_stopword(const std::string& term) {
    return stopword_set().count(term) > 0;
}

std::vector<std::string> tokenize(const std::string& text, const TokenizerConfig& config) {
    std::vector<std::string> terms;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        if (!config.remove_stopwords || !is_stopword(cur))
            terms.push_back(config.stem ? porter_stem(cur) : cur);
        cur.clear();
    };
    for (unsigned char c : text) {
        if ((c >= '0' && c <= '9') || (c >= 'a' && c <= 'z')) {
            cur.push_back(static_cast<char>(c));
        } else if (c >= 'A' && c <= 'Z') {
            cur.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (c >= 0x80) {
            cur.push_back(static_cast<char>(c));  // keep UTF-8 continuation intact
        } else {
            flush();
        }
    }
    flush();
    return terms;
}

namespace {

inline double idf_plus_one(double num_docs, double df) {
    return std::log(1.0 + (num_docs - df + 0.5) / (df + 0.5));
}

inline double tf_component(double tf, const Bm25Params& p, double dl, double avgdl) {
    double ratio = avgdl > 0.0 ? dl / avgdl : 0.0;
    return tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * ratio));
}

}  // namespace

InvertedIndex InvertedIndex::build(const std::vector<Document>& docs,
                                   Bm25Params params, TokenizerConfig tok) {
    InvertedIndex idx;
    idx.params_ = params;
    idx.tok_ = tok;

    std::unordered_set<std::string> seen;
    std::uint64_t total_tokens = 0;
    for (std::size_t ord = 0; ord < docs.size(); ++ord) {
        const Document& d = docs[ord];
        if (!seen.insert(d.doc_id).second)
            throw std::runtime_error("duplicate doc_id \"" + d.doc_id + "\"");
        auto terms = tokenize(d.text, tok);
        total_tokens += terms.size();
        idx.doc_ids_.push_back(d.doc_id);
        idx.doc_lengths_.push_back(static_cast<std::uint32_t>(terms.size()));

        std::unordered_map<std::string, std::uint32_t> counts;
        for (const auto& t : terms) ++counts[t];
        for (const auto& [term, tf] : counts)
            idx.postings_[term].push_back({static_cast<std::uint32_t>(ord), tf});
    }
    // postings were appended in ascending ordinal order already; keep the
    // invariant explicit for snapshot round-trips
    for (auto& [term, plist] : idx.postings_)
        std::sort(plist.begin(), plist.end(),
                  [](const Posting& a, const Posting& b) { return a.doc_ordinal < b.doc_ordinal; });

    idx.stats_.doc_count = docs.size();
    idx.stats_.avg_doc_len =
        docs.empty() ? 0.0 : static_cast<double>(total_tokens) / static_cast<double>(docs.size());
    return idx;
}

double InvertedIndex::bm25_score(const std::vector<std::string>& query_terms,
                                 std::size_t doc_ordinal) const {
    if (doc_ordinal >= stats_.doc_count)
        throw std::out_of_range("doc_ordinal " + std::to_string(doc_ordinal) +
                                " out of range (doc_count " + std::to_string(stats_.doc_count) + ")");
    double score = 0.0;
    double dl = static_cast<double>(doc_lengths_[doc_ordinal]);
    for (const auto& term : query_terms) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const auto& plist = it->second;
        auto pit = std::lower_bound(plist.begin(), plist.end(), doc_ordinal,
                                    [](const Posting& p, std::size_t ord) { return p.doc_ordinal < ord; });
        if (pit == plist.end() || pit->doc_ordinal != doc_ordinal) continue;
        double idf = idf_plus_one(static_cast<double>(stats_.doc_count),
                                  static_cast<double>(plist.size()));
        score += idf * tf_component(static_cast<double>(pit->term_frequency),
                                    params_, dl, stats_.avg_doc_len);
    }
    return score;
}

std::vector<ScoredDoc> InvertedIndex::retrieve(const std::string& query, std::size_t k) const {
    std::vector<ScoredDoc> out;
    if (k == 0 || stats_.doc_count == 0) return out;
    auto terms = tokenize(query, tok_);

    std::vector<double> acc(stats_.doc_count, 0.0);
    std::vector<std::uint32_t> touched;
    for (const auto& term : terms) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const auto& plist = it->second;
        double idf = idf_plus_one(static_cast<double>(stats_.doc_count),
                                  static_cast<double>(plist.size()));
        for (const Posting& p : plist) {
            if (acc[p.doc_ordinal] == 0.0) touched.push_back(p.doc_ordinal);
            acc[p.doc_ordinal] += idf * tf_component(static_cast<double>(p.term_frequency), params_,
                                                     static_cast<double>(doc_lengths_[p.doc_ordinal]),
                                                     stats_.avg_doc_len);
        }
    }

    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    std::vector<std::pair<double, std::uint32_t>> scored;
    scored.reserve(touched.size());
    for (std::uint32_t ord : touched)
        if (acc[ord] > 0.0) scored.push_back({acc[ord], ord});

    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (scored.size() > k) scored.resize(k);

    out.reserve(scored.size());
    for (std::size_t i = 0; i < scored.size(); ++i)
        out.push_back({doc_ids_[scored[i].second], scored[i].first, i + 1});
    return out;
}

namespace {

constexpr char kIndexMagic[8] = {'A', 'R', 'A', 'G', 'I', 'D', 'X', '1'};

// plain little-endian binary writers; the snapshot format targets
// little-endian hosts (documented in the README)
template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_str(std::ofstream& out, const std::string& s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw std::runtime_error("truncated index snapshot");
    return v;
}

std::string get_str(std::ifstream& in) {
    auto len = get<std::uint32_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw std::runtime_error("truncated index snapshot");
    return s;
}

}  // namespace

void InvertedIndex::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open index snapshot for write: " + path);
    out.write(kIndexMagic, sizeof(kIndexMagic));
    std::uint32_t flags = (tok_.stem ? 1u : 0u) | (tok_.remove_stopwords ? 2u : 0u);
    put(out, flags);
    put(out, params_.k1);
    put(out, params_.b);
    put(out, static_cast<std::uint64_t>(stats_.doc_count));
    put(out, stats_.avg_doc_len);
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
        put_str(out, doc_ids_[i]);
        put(out, doc_lengths_[i]);
    }
    put(out, static_cast<std::uint64_t>(postings_.size()));
    for (const auto& [term, plist] : postings_) {
        put_str(out, term);
        put(out, static_cast<std::uint32_t>(plist.size()));
        for (const Posting& p : plist) {
            put(out, p.doc_ordinal);
            put(out, p.term_frequency);
        }
    }
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

InvertedIndex InvertedIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open index snapshot: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0)
        throw std::runtime_error(path + ": not an index snapshot of a supported version");

    InvertedIndex idx;
    auto flags = get<std::uint32_t>(in);
    idx.tok_.stem = (flags & 1u) != 0;
    idx.tok_.remove_stopwords = (flags & 2u) != 0;
    idx.params_.k1 = get<double>(in);
    idx.params_.b = get<double>(in);
    auto doc_count = get<std::uint64_t>(in);
    idx.stats_.doc_count = static_cast<std::size_t>(doc_count);
    idx.stats_.avg_doc_len = get<double>(in);
    idx.doc_ids_.reserve(doc_count);
    idx.doc_lengths_.reserve(doc_count);
    for (std::uint64_t i = 0; i < doc_count; ++i) {
        idx.doc_ids_.push_back(get_str(in));
        idx.doc_lengths_.push_back(get<std::uint32_t>(in));
    }
    auto term_count = get<std::uint64_t>(in);
    for (std::uint64_t t = 0; t < term_count; ++t) {
        std::string term = get_str(in);
        auto n = get<std::uint32_t>(in);
        std::vector<Posting> plist;
        plist.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            Posting p;
            p.doc_ordinal = get<std::uint32_t>(in);
            p.term_frequency = get<std::uint32_t>(in);
            plist.push_back(p);
        }
        idx.postings_.emplace(std::move(term), std::move(plist));
    }
    return idx;
}

Bm25Retriever::Bm25Retriever(const InvertedIndex& index, const std::vector<Document>& docs)
    : index_(&index), docs_(&docs) {
    for (std::size_t i = 0; i < docs.size(); ++i) by_id_[docs[i].doc_id] = i;
}

std::vector<ScoredDoc> Bm25Retriever::retrieve(const std::string& query, std::size_t k) const {
    return index_->retrieve(query, k);
}

const Document* Bm25Retriever::find_document(const std::string& doc_id) const {
    auto it = by_id_.find(doc_id);
    return it == by_id_.end() ? nullptr : &(*docs_)[it->second];
}

}  // namespace arag
