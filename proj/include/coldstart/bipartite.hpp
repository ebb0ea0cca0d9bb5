#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace coldstart {

enum class Side { user, item };

using Edge = std::pair<std::uint32_t, std::uint32_t>;  // (user index, item index)

// Immutable binary user-item purchase graph with adjacency stored in both
// directions (CSR layout). Users and items are dense 0-based indices; the
// original external identifiers are kept alongside for traceability.
class BipartiteNetwork {
public:
    BipartiteNetwork() = default;

    // Edges must be unique; adjacency is built sorted. Throws on out-of-range
    // indices or duplicate edges.
    static BipartiteNetwork from_edges(std::size_t user_count, std::size_t item_count,
                                       std::vector<Edge> edges,
                                       std::vector<std::string> user_ids = {},
                                       std::vector<std::string> item_ids = {}) {
        std::sort(edges.begin(), edges.end());
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (edges[e].first >= user_count || edges[e].second >= item_count)
                throw std::invalid_argument("edge index out of range");
            if (e > 0 && edges[e] == edges[e - 1])
                throw std::invalid_argument("duplicate edge in input");
        }
        BipartiteNetwork net;
        net.users_ = user_count;
        net.items_ = item_count;
        net.links_ = edges.size();
        net.user_ids_ = normalize_ids(std::move(user_ids), user_count);
        net.item_ids_ = normalize_ids(std::move(item_ids), item_count);

        net.user_degrees_.assign(user_count, 0);
        net.item_degrees_.assign(item_count, 0);
        for (const auto& [u, o] : edges) {
            ++net.user_degrees_[u];
            ++net.item_degrees_[o];
        }
        net.user_offsets_ = offsets_from_degrees(net.user_degrees_);
        net.item_offsets_ = offsets_from_degrees(net.item_degrees_);
        net.user_items_.resize(edges.size());
        net.item_users_.resize(edges.size());

        std::vector<std::uint64_t> cursor(net.user_offsets_.begin(), net.user_offsets_.end() - 1);
        for (const auto& [u, o] : edges) net.user_items_[cursor[u]++] = o;
        cursor.assign(net.item_offsets_.begin(), net.item_offsets_.end() - 1);
        for (const auto& [u, o] : edges) net.item_users_[cursor[o]++] = u;  // u ascending per item
        return net;
    }

    // Builds directly from the two adjacency views without any consistency
    // checking. Exists so validate() can be exercised on broken instances.
    static BipartiteNetwork from_adjacency(std::vector<std::vector<std::uint32_t>> user_adj,
                                           std::vector<std::vector<std::uint32_t>> item_adj,
                                           std::vector<std::string> user_ids = {},
                                           std::vector<std::string> item_ids = {}) {
        BipartiteNetwork net;
        net.users_ = user_adj.size();
        net.items_ = item_adj.size();
        net.user_ids_ = normalize_ids(std::move(user_ids), net.users_);
        net.item_ids_ = normalize_ids(std::move(item_ids), net.items_);
        net.user_degrees_.reserve(net.users_);
        for (const auto& row : user_adj) net.user_degrees_.push_back(static_cast<std::uint32_t>(row.size()));
        net.item_degrees_.reserve(net.items_);
        for (const auto& row : item_adj) net.item_degrees_.push_back(static_cast<std::uint32_t>(row.size()));
        net.user_offsets_ = offsets_from_degrees(net.user_degrees_);
        net.item_offsets_ = offsets_from_degrees(net.item_degrees_);
        for (const auto& row : user_adj) net.user_items_.insert(net.user_items_.end(), row.begin(), row.end());
        for (const auto& row : item_adj) net.item_users_.insert(net.item_users_.end(), row.begin(), row.end());
        net.links_ = net.user_items_.size();
        return net;
    }

    std::size_t user_count() const { return users_; }
    std::size_t item_count() const { return items_; }
    std::size_t link_count() const { return links_; }

    std::span<const std::uint32_t> items_of(std::uint32_t user) const {
        return {user_items_.data() + user_offsets_[user],
                user_items_.data() + user_offsets_[user + 1]};
    }
    std::span<const std::uint32_t> users_of(std::uint32_t item) const {
        return {item_users_.data() + item_offsets_[item],
                item_users_.data() + item_offsets_[item + 1]};
    }

    std::uint32_t user_degree(std::uint32_t user) const { return user_degrees_[user]; }
    std::uint32_t item_degree(std::uint32_t item) const { return item_degrees_[item]; }

    std::span<const std::uint32_t> degrees(Side side) const {
        const auto& d = side == Side::user ? user_degrees_ : item_degrees_;
        return {d.data(), d.size()};
    }

    const std::vector<std::string>& ids(Side side) const {
        return side == Side::user ? user_ids_ : item_ids_;
    }

    bool has_edge(std::uint32_t user, std::uint32_t item) const {
        auto row = items_of(user);
        return std::binary_search(row.begin(), row.end(), item);
    }

    // Edges sorted by (user index, item index).
    std::vector<Edge> edge_list() const {
        std::vector<Edge> edges;
        edges.reserve(links_);
        for (std::uint32_t u = 0; u < users_; ++u)
            for (std::uint32_t o : items_of(u)) edges.emplace_back(u, o);
        return edges;
    }

private:
    static std::vector<std::string> normalize_ids(std::vector<std::string> ids, std::size_t count) {
        if (ids.empty()) {
            ids.reserve(count);
            for (std::size_t i = 0; i < count; ++i) ids.push_back(std::to_string(i));
        } else if (ids.size() != count) {
            throw std::invalid_argument("id list size does not match node count");
        }
        return ids;
    }

    static std::vector<std::uint64_t> offsets_from_degrees(const std::vector<std::uint32_t>& deg) {
        std::vector<std::uint64_t> off(deg.size() + 1, 0);
        for (std::size_t i = 0; i < deg.size(); ++i) off[i + 1] = off[i] + deg[i];
        return off;
    }

    std::size_t users_ = 0, items_ = 0, links_ = 0;
    std::vector<std::uint64_t> user_offsets_, item_offsets_;
    std::vector<std::uint32_t> user_items_, item_users_;
    std::vector<std::uint32_t> user_degrees_, item_degrees_;
    std::vector<std::string> user_ids_, item_ids_;
};

inline std::span<const std::uint32_t> degrees(const BipartiteNetwork& net, Side side) {
    return net.degrees(side);
}

// --- ingestion ---------------------------------------------------------------

namespace detail {

inline bool parse_edge_line(const std::string& raw, std::size_t line_no,
                            std::string& user_id, std::string& item_id) {
    std::size_t begin = raw.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return false;      // blank line
    if (raw[begin] == '#') return false;               // comment
    std::istringstream tokens(raw);
    std::string extra;
    if (!(tokens >> user_id >> item_id)) {
        throw std::runtime_error("malformed edge at line " + std::to_string(line_no) +
                                 ": expected \"user_id item_id\"");
    }
    if (tokens >> extra) {
        throw std::runtime_error("malformed edge at line " + std::to_string(line_no) +
                                 ": trailing token \"" + extra + "\"");
    }
    return true;
}

}  // namespace detail

// Reads "user_id<TAB or space>item_id" lines. Blank lines and '#' comments are
// skipped. Dense indices are assigned by order of first appearance per side;
// repeated (user,item) pairs collapse to one edge and are counted through
// `duplicates_collapsed` when provided.
inline BipartiteNetwork ingest_edge_list(std::istream& in, std::size_t* duplicates_collapsed = nullptr) {
    std::unordered_map<std::string, std::uint32_t> user_index, item_index;
    std::vector<std::string> user_ids, item_ids;
    std::vector<Edge> edges;
    std::string line, uid, oid;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::parse_edge_line(line, line_no, uid, oid)) continue;
        auto [uit, unew] = user_index.try_emplace(uid, static_cast<std::uint32_t>(user_ids.size()));
        if (unew) user_ids.push_back(uid);
        auto [oit, onew] = item_index.try_emplace(oid, static_cast<std::uint32_t>(item_ids.size()));
        if (onew) item_ids.push_back(oid);
        edges.emplace_back(uit->second, oit->second);
    }
    if (edges.empty()) throw std::runtime_error("empty network: no edges in input");

    std::sort(edges.begin(), edges.end());
    std::size_t before = edges.size();
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (duplicates_collapsed) *duplicates_collapsed = before - edges.size();

    const std::size_t n = user_ids.size();
    const std::size_t m = item_ids.size();
    return BipartiteNetwork::from_edges(n, m, std::move(edges), std::move(user_ids),
                                        std::move(item_ids));
}

// Ingest against pinned id->index mappings (as written by write_mapping), so a
// serialized network reloads with the exact same dense numbering.
inline BipartiteNetwork ingest_edge_list(std::istream& in,
                                         const std::vector<std::string>& user_ids,
                                         const std::vector<std::string>& item_ids,
                                         std::size_t* duplicates_collapsed = nullptr) {
    std::unordered_map<std::string, std::uint32_t> user_index, item_index;
    for (std::size_t i = 0; i < user_ids.size(); ++i) user_index[user_ids[i]] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < item_ids.size(); ++i) item_index[item_ids[i]] = static_cast<std::uint32_t>(i);

    std::vector<Edge> edges;
    std::string line, uid, oid;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::parse_edge_line(line, line_no, uid, oid)) continue;
        auto uit = user_index.find(uid);
        auto oit = item_index.find(oid);
        if (uit == user_index.end() || oit == item_index.end())
            throw std::runtime_error("unknown id at line " + std::to_string(line_no));
        edges.emplace_back(uit->second, oit->second);
    }
    if (edges.empty()) throw std::runtime_error("empty network: no edges in input");

    std::sort(edges.begin(), edges.end());
    std::size_t before = edges.size();
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (duplicates_collapsed) *duplicates_collapsed = before - edges.size();

    return BipartiteNetwork::from_edges(user_ids.size(), item_ids.size(), std::move(edges),
                                        user_ids, item_ids);
}

// --- serialization -----------------------------------------------------------

// One edge per line, external ids, sorted by (user index, item index).
inline void write_edge_list(const BipartiteNetwork& net, std::ostream& out) {
    const auto& uids = net.ids(Side::user);
    const auto& oids = net.ids(Side::item);
    for (std::uint32_t u = 0; u < net.user_count(); ++u)
        for (std::uint32_t o : net.items_of(u))
            out << uids[u] << '\t' << oids[o] << '\n';
}

// "dense_index<TAB>external_id" per line.
inline void write_mapping(const BipartiteNetwork& net, Side side, std::ostream& out) {
    const auto& ids = net.ids(side);
    for (std::size_t i = 0; i < ids.size(); ++i) out << i << '\t' << ids[i] << '\n';
}

inline std::vector<std::string> read_mapping(std::istream& in) {
    std::vector<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream tokens(line);
        std::size_t index;
        std::string id;
        if (!(tokens >> index >> id))
            throw std::runtime_error("malformed mapping at line " + std::to_string(line_no));
        if (index != ids.size())
            throw std::runtime_error("mapping indices must be contiguous from 0 (line " +
                                     std::to_string(line_no) + ")");
        ids.push_back(id);
    }
    return ids;
}

// --- validation ---------------------------------------------------------------

struct ValidationCheck {
    std::string name;
    bool passed = true;
    std::string detail;  // names offending indices on failure
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool ok() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    const ValidationCheck& check(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw std::logic_error("unknown validation check: " + name);
    }
};

// Report-only integrity check: minimum degrees, sorted duplicate-free
// adjacency, transpose consistency of the two views, and degree sums.
inline ValidationReport validate(const BipartiteNetwork& net) {
    ValidationReport report;

    auto offenders = [](std::vector<std::size_t>& idx) {
        std::string s;
        for (std::size_t i = 0; i < idx.size() && i < 8; ++i) {
            if (i) s += ',';
            s += std::to_string(idx[i]);
        }
        if (idx.size() > 8) s += ",...";
        return s;
    };

    {
        ValidationCheck c{"min_degree", true, ""};
        std::vector<std::size_t> bad;
        for (std::uint32_t u = 0; u < net.user_count(); ++u)
            if (net.user_degree(u) == 0) bad.push_back(u);
        if (!bad.empty()) {
            c.passed = false;
            c.detail = "users with degree 0: " + offenders(bad);
        }
        bad.clear();
        for (std::uint32_t o = 0; o < net.item_count(); ++o)
            if (net.item_degree(o) == 0) bad.push_back(o);
        if (!bad.empty()) {
            c.passed = false;
            c.detail += (c.detail.empty() ? "" : "; ");
            c.detail += "items with degree 0: " + offenders(bad);
        }
        report.checks.push_back(std::move(c));
    }

    {
        ValidationCheck c{"sorted_adjacency", true, ""};
        std::vector<std::size_t> bad;
        for (std::uint32_t u = 0; u < net.user_count(); ++u) {
            auto row = net.items_of(u);
            for (std::size_t i = 1; i < row.size(); ++i)
                if (row[i] <= row[i - 1]) {
                    bad.push_back(u);
                    break;
                }
        }
        for (std::uint32_t o = 0; o < net.item_count(); ++o) {
            auto row = net.users_of(o);
            for (std::size_t i = 1; i < row.size(); ++i)
                if (row[i] <= row[i - 1]) {
                    bad.push_back(net.user_count() + o);
                    break;
                }
        }
        if (!bad.empty()) {
            c.passed = false;
            c.detail = "rows unsorted or with duplicates: " + offenders(bad);
        }
        report.checks.push_back(std::move(c));
    }

    {
        ValidationCheck c{"transpose_consistent", true, ""};
        std::vector<Edge> from_users, from_items;
        for (std::uint32_t u = 0; u < net.user_count(); ++u)
            for (std::uint32_t o : net.items_of(u)) from_users.emplace_back(u, o);
        for (std::uint32_t o = 0; o < net.item_count(); ++o)
            for (std::uint32_t u : net.users_of(o)) from_items.emplace_back(u, o);
        std::sort(from_users.begin(), from_users.end());
        std::sort(from_items.begin(), from_items.end());
        if (from_users != from_items) {
            c.passed = false;
            c.detail = "user view and item view describe different edge sets";
        }
        report.checks.push_back(std::move(c));
    }

    {
        ValidationCheck c{"degree_sums", true, ""};
        std::uint64_t su = 0, so = 0;
        for (auto d : net.degrees(Side::user)) su += d;
        for (auto d : net.degrees(Side::item)) so += d;
        if (su != net.link_count() || so != net.link_count()) {
            c.passed = false;
            c.detail = "sum(user degrees)=" + std::to_string(su) + ", sum(item degrees)=" +
                       std::to_string(so) + ", links=" + std::to_string(net.link_count());
        }
        report.checks.push_back(std::move(c));
    }

    return report;
}

}  // namespace coldstart
