#include "subposet/rational.hpp"

#include <stdexcept>

namespace subposet {

Int binomial(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

std::uint64_t binomial_u64(int n, int k) {
    if (n > 61) throw std::invalid_argument("binomial_u64: n > 61");
    if (k < 0 || k > n || n < 0) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

std::string to_string(const Int& v) { return v.str(); }

std::string rat_string(const Rat& v) {
    return numerator(v).str() + "/" + denominator(v).str();
}

Rat parse_rational(const std::string& text) {
    auto bad = [&] { throw std::invalid_argument("not a rational: '" + text + "'"); };
    if (text.empty()) bad();
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(text));
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty()) bad();
        Int d(den);
        if (d == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
        return Rat(Int(num), d);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rat();  // unreachable
}

}  // namespace subposet
