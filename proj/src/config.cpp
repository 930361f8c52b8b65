#include "nodegen/config.hpp"

#include <cstdio>
#include <optional>
#include <sstream>

#include "nodegen/expr.hpp"

namespace nodegen {

namespace {

std::vector<std::string> tokenize(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

bool parse_number(const std::string& tok, double& out) {
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size() && !tok.empty();
}

// Recursive-descent over the token stream for a fixed dimension; returns
// nullopt when the stream does not fit.
std::optional<DomainSpec> parse_shape(const std::vector<std::string>& tokens, std::size_t& pos,
                                      int dim) {
    if (pos >= tokens.size()) return std::nullopt;
    const std::string& head = tokens[pos];
    auto numbers = [&](std::size_t pos0, int n, std::vector<double>& out) {
        out.clear();
        for (int i = 0; i < n; ++i) {
            double v;
            if (pos0 + i >= tokens.size() || !parse_number(tokens[pos0 + i], v)) return false;
            out.push_back(v);
        }
        return true;
    };
    DomainSpec spec;
    spec.dim = dim;
    if (head == "box") {
        spec.kind = DomainSpec::Kind::box;
        if (!numbers(pos + 1, 2 * dim, spec.params)) return std::nullopt;
        pos += 1 + 2 * dim;
        return spec;
    }
    if (head == "ball") {
        spec.kind = DomainSpec::Kind::ball;
        if (!numbers(pos + 1, dim + 1, spec.params)) return std::nullopt;
        pos += 1 + dim + 1;
        return spec;
    }
    if (head == "diff") {
        spec.kind = DomainSpec::Kind::diff;
        ++pos;
        auto a = parse_shape(tokens, pos, dim);
        if (!a) return std::nullopt;
        auto b = parse_shape(tokens, pos, dim);
        if (!b) return std::nullopt;
        spec.a = std::make_shared<DomainSpec>(std::move(*a));
        spec.b = std::make_shared<DomainSpec>(std::move(*b));
        return spec;
    }
    return std::nullopt;
}

std::optional<DomainSpec> try_dim(const std::vector<std::string>& tokens, int dim) {
    std::size_t pos = 0;
    auto spec = parse_shape(tokens, pos, dim);
    if (spec && pos == tokens.size()) return spec;
    return std::nullopt;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

DomainSpec DomainSpec::parse(const std::string& text, int dim_hint) {
    std::vector<std::string> tokens = tokenize(text);
    if (tokens.empty()) throw std::invalid_argument("domain: empty description");
    if (dim_hint > 0) {
        auto spec = try_dim(tokens, dim_hint);
        if (!spec)
            throw std::invalid_argument("domain '" + text + "' does not parse in dimension " +
                                        std::to_string(dim_hint));
        return *spec;
    }
    std::vector<DomainSpec> matches;
    for (int dim = 1; dim <= 3; ++dim)
        if (auto spec = try_dim(tokens, dim)) matches.push_back(*spec);
    if (matches.empty()) throw std::invalid_argument("domain '" + text + "' does not parse (dims 1-3)");
    if (matches.size() > 1)
        throw std::invalid_argument("domain '" + text + "' is dimensionally ambiguous; pass --dim");
    return matches.front();
}

std::string DomainSpec::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::box:
        case Kind::ball: {
            os << (kind == Kind::box ? "box" : "ball");
            for (double v : params) os << ' ' << fmt_short(v);
            break;
        }
        case Kind::diff:
            os << "diff " << a->to_string() << ' ' << b->to_string();
            break;
    }
    return os.str();
}

SpacingSpec SpacingSpec::parse(const std::string& text) {
    SpacingSpec spec;
    if (text.rfind("img:", 0) == 0) {
        auto rest = text.substr(4);
        auto colon = rest.rfind(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("image spacing: expected img:<path.pgm>:<h0>");
        spec.kind = Kind::image;
        spec.image_path = rest.substr(0, colon);
        double h0;
        if (!parse_number(rest.substr(colon + 1), h0) || !(h0 > 0))
            throw std::invalid_argument("image spacing: bad h0 in '" + text + "'");
        spec.h0 = h0;
        return spec;
    }
    double v;
    if (parse_number(text, v)) {
        if (!(v > 0)) throw std::invalid_argument("spacing: constant must be > 0");
        spec.kind = Kind::constant;
        spec.value = v;
        return spec;
    }
    Expression::parse(text);  // validate now, build later
    spec.kind = Kind::analytic;
    spec.expr = text;
    return spec;
}

std::string SpacingSpec::to_string() const {
    switch (kind) {
        case Kind::constant:
            return fmt_short(value);
        case Kind::analytic:
            return expr;
        case Kind::image:
            return "img:" + image_path + ":" + fmt_short(h0);
    }
    return {};
}

}  // namespace nodegen
