#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace hypergeo::io {

inline double parse_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw domain_error("cannot parse number '" + std::string(s) + "'");
    return v;
}

// "a", "bi", "a+bi", "a-bi", "i", "-i"; no whitespace.
inline cplx parse_complex(std::string_view s) {
    if (s.empty()) throw domain_error("empty complex literal");
    if (s.back() != 'i') return {parse_double(s), 0.0};
    const std::string_view body = s.substr(0, s.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    auto imag_of = [](std::string_view v) {
        if (v.empty() || v == "+") return 1.0;
        if (v == "-") return -1.0;
        return parse_double(v);
    };
    if (split == std::string_view::npos) return {0.0, imag_of(body)};
    return {parse_double(body.substr(0, split)), imag_of(body.substr(split))};
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t b = 0;
    while (true) {
        const auto e = s.find(sep, b);
        out.push_back(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
        if (e == std::string_view::npos) break;
        b = e + 1;
    }
    return out;
}

inline std::vector<cplx> parse_complex_list(std::string_view s) {
    std::vector<cplx> out;
    for (auto tok : split(s, ',')) out.push_back(parse_complex(tok));
    return out;
}

// "start:stop:count" (inclusive linspace) or a comma list.
inline std::vector<double> parse_real_list(std::string_view s) {
    if (s.find(':') != std::string_view::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw domain_error("grid must be start:stop:count");
        const double a = parse_double(parts[0]), b = parse_double(parts[1]);
        const double cnt = parse_double(parts[2]);
        if (cnt < 1 || cnt != std::floor(cnt)) throw domain_error("grid count must be a positive integer");
        const int n = int(cnt);
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
        return out;
    }
    std::vector<double> out;
    for (auto tok : split(s, ',')) out.push_back(parse_double(tok));
    return out;
}

// 17 significant digits: reparses to the same double.
inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt(cplx z) {
    std::string s = fmt(z.real());
    const double im = z.imag();
    s += std::signbit(im) ? "-" : "+";
    s += fmt(std::abs(im));
    s += "i";
    return s;
}

template <class T>
std::string join(const std::vector<T>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += fmt(v[i]);
    }
    return s;
}

}  // namespace hypergeo::io
