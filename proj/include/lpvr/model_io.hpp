#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lpvr/error.hpp"
#include "lpvr/model.hpp"

namespace lpvr {

// Model document format (JSON):
//
//   { "n_y": 1, "n_u": 1, "n_p": 1, "n_a": 1, "n_b": 2,
//     "domain": [[-5, 5]],                      // "inf" / "-inf" allowed
//     "A": [ [[entry]] ],                       // n_a matrices, list of rows
//     "B": [ [[entry]], [[entry]] ] }           // n_b matrices
//
// An entry is a number or {"num": [[coef, [e1, ...]], ...], "den": [...]}
// with "den" optional (defaults to 1).

namespace detail {

class DocReader {
public:
    explicit DocReader(std::size_t n_p) : n_p_(n_p) {}

    static std::size_t read_count(const nlohmann::json& doc, const char* key, bool positive) {
        if (!doc.contains(key)) {
            throw ParseError(std::string("missing field '") + key + "'");
        }
        const auto& v = doc.at(key);
        if (!v.is_number_integer() && !v.is_number_unsigned()) {
            throw ParseError(std::string("field '") + key + "' must be an integer");
        }
        const auto n = v.get<long long>();
        if (n < 0 || (positive && n == 0)) {
            throw ParseError(std::string("field '") + key + "' must be " + (positive ? "positive" : "non-negative"));
        }
        return static_cast<std::size_t>(n);
    }

    static double read_bound(const nlohmann::json& v, const std::string& path) {
        if (v.is_number()) {
            return v.get<double>();
        }
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "inf" || s == "+inf") {
                return std::numeric_limits<double>::infinity();
            }
            if (s == "-inf") {
                return -std::numeric_limits<double>::infinity();
            }
        }
        throw ParseError(path + ": bound must be a number, \"inf\" or \"-inf\"");
    }

    std::vector<LaurentTerm> read_terms(const nlohmann::json& v, const std::string& path) const {
        if (!v.is_array()) {
            throw ParseError(path + ": expected a list of [coef, [exponents]] terms");
        }
        std::vector<LaurentTerm> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto& t = v[i];
            const std::string tp = path + "[" + std::to_string(i) + "]";
            if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_array()) {
                throw ParseError(tp + ": malformed rational term, expected [coef, [e1, ...]]");
            }
            if (t[1].size() != n_p_) {
                throw ParseError(tp + ": exponent vector has length " + std::to_string(t[1].size()) + ", expected n_p = " +
                                 std::to_string(n_p_));
            }
            LaurentTerm term;
            term.coef = t[0].get<double>();
            for (const auto& e : t[1]) {
                if (!e.is_number_integer()) {
                    throw ParseError(tp + ": exponents must be integers");
                }
                term.exponents.push_back(e.get<int>());
            }
            out.push_back(std::move(term));
        }
        return out;
    }

    LaurentRational read_entry(const nlohmann::json& v, const std::string& path) const {
        if (v.is_number()) {
            return LaurentRational::constant(v.get<double>(), n_p_);
        }
        if (!v.is_object() || !v.contains("num")) {
            throw ParseError(path + ": entry must be a number or an object with \"num\"");
        }
        for (const auto& [key, _] : v.items()) {
            if (key != "num" && key != "den") {
                throw ParseError(path + ": unknown key '" + key + "'");
            }
        }
        auto num = read_terms(v.at("num"), path + ".num");
        std::vector<LaurentTerm> den;
        if (v.contains("den")) {
            den = read_terms(v.at("den"), path + ".den");
        } else {
            den.push_back(LaurentTerm{1.0, std::vector<int>(n_p_, 0)});
        }
        LaurentRational r(std::move(num), std::move(den));
        if (r.denominator().empty() || r.denominator_identically_zero()) {
            throw ParseError(path + ": denominator is identically zero");
        }
        return r;
    }

    CoefficientMatrix read_matrix(const nlohmann::json& v, std::size_t rows, std::size_t cols,
                                  const std::string& path) const {
        if (!v.is_array()) {
            throw ParseError(path + ": matrix must be a list of rows");
        }
        if (v.size() != rows) {
            throw DimensionError(path + ": has " + std::to_string(v.size()) + " rows, expected " + std::to_string(rows));
        }
        std::vector<LaurentRational> entries;
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& row = v[r];
            const std::string rp = path + "[" + std::to_string(r) + "]";
            if (!row.is_array()) {
                throw ParseError(rp + ": row must be a list");
            }
            if (row.size() != cols) {
                throw DimensionError(rp + ": has " + std::to_string(row.size()) + " columns, expected " +
                                     std::to_string(cols));
            }
            for (std::size_t c = 0; c < cols; ++c) {
                entries.push_back(read_entry(row[c], rp + "[" + std::to_string(c) + "]"));
            }
        }
        return {rows, cols, std::move(entries)};
    }

private:
    std::size_t n_p_;
};

inline nlohmann::ordered_json terms_to_json(const std::vector<LaurentTerm>& terms) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& t : terms) {
        out.push_back(nlohmann::ordered_json::array({t.coef, t.exponents}));
    }
    return out;
}

inline nlohmann::ordered_json entry_to_json(const LaurentRational& r) {
    if (r.is_plain_constant()) {
        return r.numerator()[0].coef;
    }
    nlohmann::ordered_json obj;
    obj["num"] = terms_to_json(r.numerator());
    const bool unit_den = r.denominator().size() == 1 && r.denominator()[0].coef == 1.0 &&
                          std::all_of(r.denominator()[0].exponents.begin(), r.denominator()[0].exponents.end(),
                                      [](int e) { return e == 0; });
    if (!unit_den) {
        obj["den"] = terms_to_json(r.denominator());
    }
    return obj;
}

inline std::string bound_to_text(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "\"inf\"" : "\"-inf\"";
    }
    return nlohmann::json(v).dump();
}

inline std::string matrix_to_text(const CoefficientMatrix& m) {
    std::string s = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(entry_to_json(m.at(r, c)));
        }
        s += (r > 0 ? ", " : "") + row.dump();
    }
    return s + "]";
}

inline std::string matrix_list_to_text(const std::vector<CoefficientMatrix>& list) {
    if (list.empty()) {
        return "[]";
    }
    std::string s = "[\n";
    for (std::size_t i = 0; i < list.size(); ++i) {
        s += "    " + matrix_to_text(list[i]) + (i + 1 < list.size() ? ",\n" : "\n");
    }
    return s + "  ]";
}

inline std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace detail

/// Parses and validates a model document. Throws ParseError (malformed
/// document, zero denominators, non-finite samples), DimensionError (shape
/// mismatch) or DegenerateOrderError (n_a = 0 and n_b = 1).
inline LpvIoModel parse_model(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = detail::line_and_column(text, e.byte);
        throw ParseError("malformed model document at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("model document must be a JSON object");
    }
    const auto n_y = detail::DocReader::read_count(doc, "n_y", true);
    const auto n_u = detail::DocReader::read_count(doc, "n_u", true);
    const auto n_p = detail::DocReader::read_count(doc, "n_p", true);
    const auto n_a = detail::DocReader::read_count(doc, "n_a", false);
    const auto n_b = detail::DocReader::read_count(doc, "n_b", true);
    if (n_a == 0 && n_b == 1) {
        throw DegenerateOrderError("n_a = 0 and n_b = 1: no dynamics to realize");
    }

    if (!doc.contains("domain") || !doc.at("domain").is_array()) {
        throw ParseError("missing or malformed field 'domain'");
    }
    const auto& dom = doc.at("domain");
    if (dom.size() != n_p) {
        throw DimensionError("domain: has " + std::to_string(dom.size()) + " intervals, expected n_p = " +
                             std::to_string(n_p));
    }
    Domain domain;
    for (std::size_t i = 0; i < n_p; ++i) {
        const std::string path = "domain[" + std::to_string(i) + "]";
        if (!dom[i].is_array() || dom[i].size() != 2) {
            throw ParseError(path + ": expected [lo, hi]");
        }
        Interval iv{detail::DocReader::read_bound(dom[i][0], path + "[0]"),
                    detail::DocReader::read_bound(dom[i][1], path + "[1]")};
        if (!(iv.lo <= iv.hi)) {
            throw ParseError(path + ": lo exceeds hi");
        }
        domain.push_back(iv);
    }

    detail::DocReader reader(n_p);
    auto read_list = [&](const char* key, std::size_t count, std::size_t cols) {
        if (!doc.contains(key) || !doc.at(key).is_array()) {
            throw ParseError(std::string("missing or malformed field '") + key + "'");
        }
        const auto& list = doc.at(key);
        if (list.size() != count) {
            throw DimensionError(std::string(key) + ": has " + std::to_string(list.size()) + " matrices, expected " +
                                 std::to_string(count));
        }
        std::vector<CoefficientMatrix> out;
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(reader.read_matrix(list[i], n_y, cols, std::string(key) + "[" + std::to_string(i) + "]"));
        }
        return out;
    };
    auto a = read_list("A", n_a, n_y);
    auto b = read_list("B", n_b, n_u);

    LpvIoModel model(n_y, n_u, n_p, std::move(a), std::move(b), std::move(domain));
    for (const auto& d : validate(model)) {
        if (d.severity == Severity::Error) {
            throw ParseError(d.code + ": " + d.message);
        }
    }
    return model;
}

/// Deterministic text form; `parse_model(serialize_model(m))` evaluates
/// bit-identically to `m`.
inline std::string serialize_model(const LpvIoModel& m) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"n_y\": " << m.n_y() << ",\n";
    os << "  \"n_u\": " << m.n_u() << ",\n";
    os << "  \"n_p\": " << m.n_p() << ",\n";
    os << "  \"n_a\": " << m.n_a() << ",\n";
    os << "  \"n_b\": " << m.n_b() << ",\n";
    os << "  \"domain\": [";
    for (std::size_t i = 0; i < m.domain().size(); ++i) {
        os << (i > 0 ? ", " : "") << "[" << detail::bound_to_text(m.domain()[i].lo) << ", "
           << detail::bound_to_text(m.domain()[i].hi) << "]";
    }
    os << "],\n";
    os << "  \"A\": " << detail::matrix_list_to_text(m.A_list()) << ",\n";
    os << "  \"B\": " << detail::matrix_list_to_text(m.B_list()) << "\n";
    os << "}\n";
    return os.str();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline LpvIoModel load_model_file(const std::string& path) {
    const auto text = read_text_file(path);
    try {
        return parse_model(text);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const DimensionError& e) {
        throw DimensionError(path + ": " + e.what());
    } catch (const DegenerateOrderError& e) {
        throw DegenerateOrderError(path + ": " + e.what());
    }
}

} // namespace lpvr
