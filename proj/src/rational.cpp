#include "fairassign/rational.hpp"

#include "fairassign/error.hpp"

#include <cctype>

namespace fairassign {

namespace {

bool is_integer_text(std::string_view text) {
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return false;
    }
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den)) {
        throw InputError("malformed rational '" + std::string(text) + "' (expected \"num/den\")");
    }
    if (num.front() == '+') {
        num.remove_prefix(1);
    }
    if (den.front() == '+') {
        den.remove_prefix(1);
    }
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) {
        throw InputError("rational '" + std::string(text) + "' has a zero denominator");
    }
    Rational value(n, d);
    value.canonicalize();
    return value;
}

std::string format_rational(const Rational& value) {
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational sum(const std::vector<Rational>& values) {
    Rational total = 0;
    for (const auto& v : values) {
        total += v;
    }
    return total;
}

}  // namespace fairassign
