#include "mispolar/mismatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mispolar/accum.hpp"
#include "mispolar/detail/merge.hpp"
#include "mispolar/errors.hpp"

namespace mispolar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool symbol_breaks_support(const PairSymbol& s) {
    if (s.q <= 0.0) return false;
    if (std::isnan(s.dv)) return true;
    if (s.dv == 1.0 && s.dw != 1.0) return true;    // V(y|1)=0 but W(y|1)>0
    if (s.dv == -1.0 && s.dw != -1.0) return true;  // V(y|0)=0 but W(y|0)>0
    return false;
}

bool pair_less(const PairSymbol& a, const PairSymbol& b) {
    if (a.dw != b.dw) return a.dw < b.dw;
    bool an = std::isnan(a.dv), bn = std::isnan(b.dv);
    if (an != bn) return bn;  // undefined dv sorts last
    if (!an && a.dv != b.dv) return a.dv < b.dv;
    return a.q > b.q;
}

}  // namespace

ChannelPair ChannelPair::from_symbols(std::vector<PairSymbol> symbols) {
    Accum mass;
    bool null_support = false;
    for (const auto& s : symbols) {
        if (!(s.q >= 0.0)) throw NonStochasticError("negative pair symbol mass");
        if (!(std::abs(s.dw) <= 1.0)) throw OutOfRangeError("dw outside [-1,1]");
        if (!std::isnan(s.dv) && !(std::abs(s.dv) <= 1.0)) throw OutOfRangeError("dv outside [-1,1]");
        mass.add(s.q);
        null_support = null_support || symbol_breaks_support(s);
    }
    // Deep transforms stream K^2 products through the accumulator; allow the
    // rounding slack to scale with alphabet size past ~2^12 symbols.
    double mass_tol = std::max(1e-12, 4e-16 * static_cast<double>(symbols.size()));
    if (std::abs(mass.value() - 1.0) > mass_tol) throw NonStochasticError("pair masses do not sum to 1");
    ChannelPair p;
    p.symbols_ = std::move(symbols);
    p.v_null_ = null_support;
    return p;
}

ChannelPair make_pair(const Bdmc& w, const Bdmc& v) {
    if (w.alphabet_size() != v.alphabet_size())
        throw AlphabetMismatchError("channel pair needs matching output alphabets");
    std::vector<PairSymbol> symbols;
    symbols.reserve(w.alphabet_size());
    for (std::size_t y = 0; y < w.alphabet_size(); ++y) {
        const auto& sw = w.symbols()[y];
        if (sw.q == 0.0) continue;  // never observed, irrelevant to every parameter
        const auto& sv = v.symbols()[y];
        double dv = sv.q > 0.0 ? sv.delta : std::numeric_limits<double>::quiet_NaN();
        symbols.push_back({sw.q, sw.delta, dv});
    }
    return ChannelPair::from_symbols(std::move(symbols));
}

double mmi(const ChannelPair& p) {
    if (p.v_has_null_support()) return -kInf;
    Accum acc;
    for (const auto& s : p.symbols()) {
        if (s.q == 0.0) continue;
        double w0 = s.q * (1.0 + s.dw);
        double w1 = s.q * (1.0 - s.dw);
        if (w0 > 0.0) acc.add(0.5 * w0 * std::log2(1.0 + s.dv));
        if (w1 > 0.0) acc.add(0.5 * w1 * std::log2(1.0 - s.dv));
    }
    return acc.value();
}

double d_param(const ChannelPair& p) {
    Accum acc;
    for (const auto& s : p.symbols())
        if (s.q > 0.0 && !std::isnan(s.dv)) acc.add(s.q * std::sqrt(std::abs(s.dv)));
    return acc.value();
}

double t_param(const ChannelPair& p, int k) {
    if (k < 1) throw OutOfRangeError("t_param needs k >= 1");
    Accum acc;
    for (const auto& s : p.symbols()) {
        if (s.q == 0.0 || std::isnan(s.dv)) continue;
        acc.add(k == 1 ? s.q * std::abs(s.dv) : s.q * std::pow(std::abs(s.dv), k));
    }
    return acc.value();
}

double z_mismatch(const ChannelPair& p) {
    if (p.v_has_null_support()) return kInf;
    Accum acc;
    for (const auto& s : p.symbols()) {
        if (s.q == 0.0) continue;
        double w0 = s.q * (1.0 + s.dw);
        double w1 = s.q * (1.0 - s.dw);
        // sqrt(L_V) = sqrt((1-dv)/(1+dv)); zero weight skips the 0*inf corners
        if (w0 > 0.0) acc.add(0.5 * w0 * std::sqrt((1.0 - s.dv) / (1.0 + s.dv)));
        if (w1 > 0.0) acc.add(0.5 * w1 * std::sqrt((1.0 + s.dv) / (1.0 - s.dv)));
    }
    return acc.value();
}

double pe_ml(const ChannelPair& p) {
    Accum acc;
    for (const auto& s : p.symbols()) {
        if (s.q == 0.0) continue;
        double dv = std::isnan(s.dv) ? 0.0 : s.dv;
        if (dv > 0.0)
            acc.add(0.5 * s.q * (1.0 - s.dw));  // decided 0, wrong when input was 1
        else if (dv < 0.0)
            acc.add(0.5 * s.q * (1.0 + s.dw));
        else
            acc.add(0.5 * s.q);  // tie: fair coin errs half the time either way
    }
    return acc.value();
}

PairParams pair_params(const ChannelPair& p) {
    return {mmi(p), d_param(p), t_param(p, 1), z_mismatch(p), pe_ml(p)};
}

MatchedParams w_params(const ChannelPair& p) {
    Accum i, z, t, d;
    for (const auto& s : p.symbols()) {
        if (s.q == 0.0) continue;
        double w0 = s.q * (1.0 + s.dw);
        double w1 = s.q * (1.0 - s.dw);
        if (w0 > 0.0) i.add(0.5 * w0 * std::log2(1.0 + s.dw));
        if (w1 > 0.0) i.add(0.5 * w1 * std::log2(1.0 - s.dw));
        z.add(s.q * std::sqrt((1.0 + s.dw) * (1.0 - s.dw)));
        t.add(s.q * std::abs(s.dw));
        d.add(s.q * std::sqrt(std::abs(s.dw)));
    }
    return {i.value(), z.value(), t.value(), d.value()};
}

ChannelPair canonicalize(const ChannelPair& p, double tol) {
    if (!(tol >= 0.0)) throw OutOfRangeError("merge tolerance must be >= 0");
    struct Group {
        double q = 0.0;
        double qdw = 0.0;
        double qdv = 0.0;
    };
    struct KeyHash {
        std::size_t operator()(const detail::SymbolKey& k) const { return detail::hash_key(k); }
    };
    std::unordered_map<detail::SymbolKey, Group, KeyHash> groups;
    groups.reserve(p.symbols().size() * 2);
    for (const auto& s : p.symbols()) {
        if (s.q == 0.0) continue;
        auto& g = groups[detail::make_key(s.dw, s.dv, tol)];
        g.q += s.q;
        g.qdw += s.q * s.dw;
        if (!std::isnan(s.dv)) g.qdv += s.q * s.dv;
    }
    std::vector<PairSymbol> merged;
    merged.reserve(groups.size());
    for (const auto& [key, g] : groups) {
        auto value_of = [&](detail::ValClass cls, double weighted) {
            switch (cls) {
                case detail::ValClass::Zero: return 0.0;
                case detail::ValClass::PosOne: return 1.0;
                case detail::ValClass::NegOne: return -1.0;
                case detail::ValClass::Undef: return std::numeric_limits<double>::quiet_NaN();
                default: {
                    double m = std::clamp(weighted / g.q, -1.0, 1.0);
                    // an interior group's mean must stay interior
                    if (std::abs(m) == 1.0) m = std::copysign(0x1.fffffffffffffp-1, m);
                    return m;
                }
            }
        };
        merged.push_back({g.q, value_of(key.cw, g.qdw), value_of(key.cv, g.qdv)});
    }
    std::sort(merged.begin(), merged.end(), pair_less);
    return ChannelPair::from_symbols(std::move(merged));
}

}  // namespace mispolar
