#include "subposet/io.hpp"

#include <bit>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace subposet {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw std::invalid_argument("parse error at line " + std::to_string(line) + ": " + what);
}

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// "k1=v1,k2=v2" -> map; bare tokens map to empty values
std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            kv[strip(item)] = "";
        else
            kv[strip(item.substr(0, eq))] = strip(item.substr(eq + 1));
    }
    return kv;
}

int to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw std::invalid_argument("bad integer for " + what + ": '" + s + "'");
    }
}

}  // namespace

SetFamily load_family(std::istream& in) {
    std::string line;
    int lineno = 0;
    int n = -1;
    std::vector<std::uint32_t> members;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        if (n < 0) {
            std::istringstream head(t);
            std::string word;
            head >> word;
            if (word != "family") parse_fail(lineno, "expected 'family <n>'");
            if (!(head >> n) || n < 1 || n > 30) parse_fail(lineno, "bad ground size");
            std::string extra;
            if (head >> extra) parse_fail(lineno, "trailing tokens after ground size");
            continue;
        }
        if (t == "{}") {
            members.push_back(0);
            continue;
        }
        std::uint32_t mask = 0;
        std::stringstream ss(t);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const std::string e = strip(tok);
            int v = 0;
            try {
                v = to_int(e, "element");
            } catch (const std::invalid_argument&) {
                parse_fail(lineno, "bad element '" + e + "'");
            }
            if (v < 1 || v > n) parse_fail(lineno, "element " + std::to_string(v) + " outside [n]");
            if ((mask >> (v - 1)) & 1u) parse_fail(lineno, "repeated element " + std::to_string(v));
            mask |= 1u << (v - 1);
        }
        members.push_back(mask);
    }
    if (n < 0) parse_fail(lineno, "missing 'family <n>' header");
    try {
        return SetFamily(n, std::move(members));
    } catch (const std::invalid_argument& e) {
        parse_fail(lineno, e.what());
    }
}

SetFamily load_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open family file: " + path);
    return load_family(in);
}

namespace {

std::string member_string(std::uint32_t mask) {
    if (mask == 0) return "{}";
    std::string s;
    while (mask) {
        const int i = std::countr_zero(mask);
        mask &= mask - 1;
        if (!s.empty()) s += ',';
        s += std::to_string(i + 1);
    }
    return s;
}

}  // namespace

void store_family(std::ostream& out, const SetFamily& f) {
    out << "family " << f.n << "\n";
    for (auto m : f.members) out << member_string(m) << "\n";
}

std::string family_to_string(const SetFamily& f) {
    std::ostringstream out;
    store_family(out, f);
    return out.str();
}

PosetPattern load_pattern(std::istream& in) {
    std::string line;
    int lineno = 0;
    int n = -1;
    std::string name;
    PairList pairs;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        if (n < 0) {
            std::string word;
            ss >> word;
            if (word != "poset") parse_fail(lineno, "expected 'poset <name> <element_count>'");
            if (!(ss >> name >> n) || n < 0) parse_fail(lineno, "bad poset header");
            continue;
        }
        int u = 0, v = 0;
        std::string rel;
        if (!(ss >> u >> rel >> v) || rel != "<") parse_fail(lineno, "expected '<u> < <v>'");
        pairs.emplace_back(u, v);
    }
    if (n < 0) parse_fail(lineno, "missing 'poset' header");
    try {
        return PosetPattern::from_pairs(n, pairs, name);
    } catch (const std::invalid_argument& e) {
        parse_fail(lineno, e.what());
    }
}

PosetPattern load_pattern_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open pattern file: " + path);
    return load_pattern(in);
}

std::string pattern_to_string(const PosetPattern& p) {
    std::ostringstream out;
    out << "poset " << (p.name().empty() ? std::string("unnamed") : p.name()) << " " << p.size()
        << "\n";
    for (auto [u, v] : p.pairs()) out << u << " < " << v << "\n";
    return out.str();
}

PosetPattern parse_pattern_spec(const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') return load_pattern_file(spec.substr(1));
    const auto colon = spec.find(':');
    const std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto needs_int = [&](const std::string& what) {
        if (args.empty()) throw std::invalid_argument("pattern spec '" + head + "' needs " + what);
        return to_int(args, what);
    };
    if (head == "chain") return PosetPattern::chain(needs_int("k"));
    if (head == "diamond") return PosetPattern::diamond(needs_int("k"));
    if (head == "fork") return PosetPattern::fork(needs_int("r"));
    if (head == "butterfly") return PosetPattern::butterfly();
    if (head == "nposet") return PosetPattern::n_poset();
    if (head == "jposet") return PosetPattern::j_poset();
    if (head == "harp") {
        std::vector<int> lengths;
        std::stringstream ss(args);
        std::string tok;
        while (std::getline(ss, tok, ',')) lengths.push_back(to_int(strip(tok), "harp length"));
        return PosetPattern::harp(lengths);
    }
    throw std::invalid_argument("unknown pattern spec: '" + spec + "'");
}

SetFamily parse_family_construct_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
    const auto kv = parse_kv(colon == std::string::npos ? "" : spec.substr(colon + 1));
    auto need = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("construct spec '" + head + "' needs " + key + "=");
        return to_int(it->second, key);
    };
    if (head == "c1" || head == "c2" || head == "c3") {
        const int s = need("s"), n = need("n");
        if (n < 2 || n > 30 || s < 1 || s >= n)
            throw std::invalid_argument("construct spec needs 1 <= s < n <= 30");
        const std::uint32_t smask = (1u << s) - 1;
        const std::uint32_t tmask = ((n == 32 ? ~0u : (1u << n) - 1)) & ~smask;
        if (head == "c1") return construct_c1(smask, tmask);
        if (head == "c2") return construct_c2(smask, tmask);
        return construct_c3(smask, tmask);
    }
    if (head == "middle") {
        const int n = need("n"), k = need("k");
        LevelVariant variant = LevelVariant::low;
        if (auto it = kv.find("variant"); it != kv.end()) {
            if (it->second == "low")
                variant = LevelVariant::low;
            else if (it->second == "high")
                variant = LevelVariant::high;
            else
                throw std::invalid_argument("variant must be low or high");
        }
        return middle_levels(n, k, variant);
    }
    throw std::invalid_argument("unknown construct spec: '" + spec + "'");
}

std::string serialize_outcome(const SearchOutcome& outcome, const std::string& objective_name,
                              int n, const std::string& pattern_name) {
    std::ostringstream out;
    out << "search " << objective_name << " n=" << n << " pattern=" << pattern_name
        << " optimum=" << rat_string(outcome.optimum) << " completed="
        << (outcome.completed ? "true" : "false") << " nodes=" << outcome.nodes_explored << "\n";
    for (const auto& w : outcome.witnesses) out << family_to_string(w);
    return out.str();
}

}  // namespace subposet
