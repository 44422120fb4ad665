#include "mispolar/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "mispolar/accum.hpp"
#include "mispolar/detail/merge.hpp"
#include "mispolar/errors.hpp"

namespace mispolar {

namespace {

constexpr double kMassTol = 1e-12;
constexpr double kRowTol = 1e-9;

void validate(const std::vector<OutputSymbol>& symbols) {
    if (symbols.empty()) throw EmptyAlphabetError("channel has no output symbols");
    Accum mass, row0, row1;
    for (const auto& s : symbols) {
        if (!(s.q >= 0.0)) throw NonStochasticError("negative symbol mass");
        if (!(s.delta >= -1.0 && s.delta <= 1.0)) throw OutOfRangeError("delta outside [-1,1]");
        mass.add(s.q);
        row0.add(s.q * (1.0 + s.delta));
        row1.add(s.q * (1.0 - s.delta));
    }
    if (std::abs(mass.value() - 1.0) > kMassTol) throw NonStochasticError("symbol masses do not sum to 1");
    if (std::abs(row0.value() - 1.0) > kMassTol || std::abs(row1.value() - 1.0) > kMassTol)
        throw NonStochasticError("recovered transition rows do not sum to 1");
}

double parse_probability(const std::string& text, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw SpecParseError(std::string("cannot parse ") + what + ": " + text);
    }
    if (used != text.size()) throw SpecParseError(std::string("trailing junk in ") + what + ": " + text);
    if (!(v >= 0.0 && v <= 1.0)) throw OutOfRangeError(std::string(what) + " outside [0,1]: " + text);
    return v;
}

Bdmc load_file_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecParseError("cannot open channel file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SpecParseError("bad JSON in " + path + ": " + e.what());
    }
    if (!j.contains("w") || !j["w"].is_array() || j["w"].size() != 2)
        throw SpecParseError("channel file needs a 2-row \"w\" matrix: " + path);
    auto row = [&](int r) {
        std::vector<double> out;
        for (const auto& v : j["w"][r]) out.push_back(v.get<double>());
        return out;
    };
    return Bdmc::from_rows(row(0), row(1));
}

}  // namespace

Bdmc Bdmc::from_rows(const std::vector<double>& row0, const std::vector<double>& row1) {
    if (row0.size() != row1.size()) throw NonStochasticError("rows have different widths");
    if (row0.empty()) throw EmptyAlphabetError("empty transition matrix");
    for (std::size_t y = 0; y < row0.size(); ++y)
        if (row0[y] < 0.0 || row1[y] < 0.0) throw NonStochasticError("negative transition probability");
    Accum s0, s1;
    for (double v : row0) s0.add(v);
    for (double v : row1) s1.add(v);
    if (std::abs(s0.value() - 1.0) > kRowTol || std::abs(s1.value() - 1.0) > kRowTol)
        throw NonStochasticError("transition rows must each sum to 1");

    std::vector<OutputSymbol> symbols(row0.size());
    for (std::size_t y = 0; y < row0.size(); ++y) {
        double total = row0[y] + row1[y];
        symbols[y].q = total / 2.0;
        symbols[y].delta = total > 0.0 ? std::clamp((row0[y] - row1[y]) / total, -1.0, 1.0) : 0.0;
    }
    // Renormalize the row-sum slack (<= 1e-9) so downstream identities hold at 1e-12.
    double mass = (s0.value() + s1.value()) / 2.0;
    for (auto& s : symbols) s.q /= mass;
    return from_symbols(std::move(symbols));
}

Bdmc Bdmc::from_symbols(std::vector<OutputSymbol> symbols) {
    validate(symbols);
    Bdmc w;
    w.symbols_ = std::move(symbols);
    return w;
}

Bdmc make_channel(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw SpecParseError("channel spec needs a prefix: " + spec);
    std::string kind = spec.substr(0, colon);
    std::string arg = spec.substr(colon + 1);
    if (kind == "bsc") {
        double p = parse_probability(arg, "bsc crossover");
        return Bdmc::from_symbols({{0.5, 1.0 - 2.0 * p}, {0.5, 2.0 * p - 1.0}});
    }
    if (kind == "bec") {
        double e = parse_probability(arg, "bec erasure rate");
        return Bdmc::from_symbols({{(1.0 - e) / 2.0, 1.0}, {(1.0 - e) / 2.0, -1.0}, {e, 0.0}});
    }
    if (kind == "file") return load_file_channel(arg);
    throw SpecParseError("unknown channel family: " + kind);
}

MatchedParams matched_params(const Bdmc& w) {
    Accum i, z, t, d;
    for (const auto& s : w.symbols()) {
        if (s.q == 0.0) continue;
        double w0 = s.q * (1.0 + s.delta);
        double w1 = s.q * (1.0 - s.delta);
        if (w0 > 0.0) i.add(0.5 * w0 * std::log2(1.0 + s.delta));
        if (w1 > 0.0) i.add(0.5 * w1 * std::log2(1.0 - s.delta));
        z.add(s.q * std::sqrt((1.0 + s.delta) * (1.0 - s.delta)));
        t.add(s.q * std::abs(s.delta));
        d.add(s.q * std::sqrt(std::abs(s.delta)));
    }
    return {i.value(), z.value(), t.value(), d.value()};
}

double matched_t_k(const Bdmc& w, int k) {
    if (k < 1) throw OutOfRangeError("t_k needs k >= 1");
    Accum t;
    for (const auto& s : w.symbols())
        if (s.q > 0.0) t.add(s.q * std::pow(std::abs(s.delta), k));
    return t.value();
}

Bdmc canonicalize(const Bdmc& w, double tol) {
    if (!(tol >= 0.0)) throw OutOfRangeError("merge tolerance must be >= 0");
    struct Key {
        detail::ValClass cls;
        std::int64_t bucket;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return detail::mix64(static_cast<std::uint64_t>(k.bucket) +
                                 (static_cast<std::uint64_t>(static_cast<std::uint8_t>(k.cls)) << 48));
        }
    };
    struct Group {
        double q = 0.0;
        double qdelta = 0.0;
    };
    std::unordered_map<Key, Group, KeyHash> groups;
    groups.reserve(w.symbols().size() * 2);
    for (const auto& s : w.symbols()) {
        if (s.q == 0.0) continue;
        auto cls = detail::classify(s.delta);
        Key key{cls, cls == detail::ValClass::Interior ? detail::bucket_of(s.delta, tol) : 0};
        auto& g = groups[key];
        g.q += s.q;
        g.qdelta += s.q * s.delta;
    }
    std::vector<OutputSymbol> merged;
    merged.reserve(groups.size());
    for (const auto& [key, g] : groups) {
        double delta;
        switch (key.cls) {
            case detail::ValClass::Zero: delta = 0.0; break;
            case detail::ValClass::PosOne: delta = 1.0; break;
            case detail::ValClass::NegOne: delta = -1.0; break;
            default:
                delta = std::clamp(g.qdelta / g.q, -1.0, 1.0);
                // an interior group's mean must stay interior
                if (std::abs(delta) == 1.0) delta = std::copysign(0x1.fffffffffffffp-1, delta);
                break;
        }
        merged.push_back({g.q, delta});
    }
    std::sort(merged.begin(), merged.end(), [](const OutputSymbol& a, const OutputSymbol& b) {
        if (a.delta != b.delta) return a.delta < b.delta;
        return a.q > b.q;
    });
    return Bdmc::from_symbols(std::move(merged));
}

}  // namespace mispolar
