#include "eucalc/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace eucalc {

namespace {

bool is_signed_integer(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

BigRational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    const auto slash = text.find('/');
    std::string_view num = trim(text.substr(0, slash));
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : trim(text.substr(slash + 1));
    if (!is_signed_integer(num) || !is_signed_integer(den) || den.front() == '-' || den.front() == '+') {
        throw std::invalid_argument("not an exact rational: '" + std::string(text) + "'");
    }
    if (num.front() == '+') num.remove_prefix(1);
    BigInt n(std::string(num), 10);
    BigInt d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    BigRational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const BigInt& value) { return value.get_str(10); }

std::string to_string(const BigRational& value) { return value.get_str(10); }

}  // namespace eucalc
