#include "liftcheck/specfile.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace liftcheck {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool is_ident(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

struct Cursor {
    const std::string& name;
    size_t line = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << name << ":" << line << ": " << msg;
        throw SpecFileError(os.str());
    }
};

double parse_number(const std::string& tok, const Cursor& at) {
    const std::string t = trim(tok);
    if (t.empty()) at.fail("expected a number");
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v))
        at.fail("malformed number '" + t + "'");
    return v;
}

// key of the form base[idx] or base[idx][idx2]
struct IndexedKey {
    std::string base;
    std::vector<size_t> idx;
};

std::optional<IndexedKey> parse_indexed(const std::string& key, const Cursor& at,
                                        size_t dim) {
    size_t b = key.find('[');
    if (b == std::string::npos) return std::nullopt;
    IndexedKey out;
    out.base = trim(key.substr(0, b));
    size_t pos = b;
    while (pos < key.size()) {
        if (key[pos] != '[') at.fail("malformed key '" + key + "'");
        size_t close = key.find(']', pos);
        if (close == std::string::npos) at.fail("missing ']' in key '" + key + "'");
        std::string inner = trim(key.substr(pos + 1, close - pos - 1));
        if (inner.empty() ||
            inner.find_first_not_of("0123456789") != std::string::npos)
            at.fail("index must be a non-negative integer in '" + key + "'");
        size_t v = std::stoul(inner);
        if (v >= dim) {
            std::ostringstream os;
            os << "index " << v << " out of range for dimension " << dim;
            at.fail(os.str());
        }
        out.idx.push_back(v);
        pos = close + 1;
    }
    return out;
}

Expr parse_quoted_expr(const std::string& value,
                       const std::vector<std::string>& symbols, const Cursor& at) {
    std::string v = trim(value);
    if (v.size() < 2 || v.front() != '"' || v.back() != '"')
        at.fail("expression values must be double-quoted");
    std::string body = v.substr(1, v.size() - 2);
    try {
        return parse(body, symbols);
    } catch (const ParseError& e) {
        at.fail(std::string("in expression: ") + e.what());
    }
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) out.push_back(trim(cur));
    if (!s.empty() && s.back() == ',') out.push_back("");
    return out;
}

}  // namespace

ManifoldSpec parse_spec_text(const std::string& text, const std::string& name) {
    Cursor at{name, 0};

    enum class Section { None, Manifold, Metric, Domain, VectorField, OneForm };
    Section section = Section::None;
    std::string section_name;

    ManifoldSpec spec;
    bool have_dim = false, have_fiber = false;
    std::vector<std::vector<std::pair<Expr, size_t>>> metric_entries;  // expr, line
    std::vector<std::pair<Interval, bool>> domain_set;
    std::vector<size_t> coord_lines;

    // deferred per-section component maps
    struct FieldAccum {
        std::string name;
        bool is_form;
        std::vector<Expr> comp;
        std::vector<bool> given;
    };
    std::vector<FieldAccum> fields;

    std::istringstream is(text);
    std::string raw;
    while (std::getline(is, raw)) {
        ++at.line;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') at.fail("unterminated section header");
            std::string inner = trim(line.substr(1, line.size() - 2));
            if (inner == "manifold") {
                section = Section::Manifold;
            } else if (inner == "metric") {
                if (!have_dim) at.fail("[metric] must come after [manifold]");
                section = Section::Metric;
            } else if (inner == "domain") {
                if (!have_dim) at.fail("[domain] must come after [manifold]");
                section = Section::Domain;
            } else if (inner.rfind("vectorfield.", 0) == 0 ||
                       inner.rfind("oneform.", 0) == 0) {
                if (!have_dim)
                    at.fail("field sections must come after [manifold]");
                bool is_form = inner.rfind("oneform.", 0) == 0;
                std::string fname = inner.substr(is_form ? 8 : 12);
                if (!is_ident(fname)) at.fail("invalid field name '" + fname + "'");
                for (const auto& f : fields)
                    if (f.name == fname && f.is_form == is_form)
                        at.fail("duplicate field section '" + inner + "'");
                FieldAccum fa;
                fa.name = fname;
                fa.is_form = is_form;
                fa.comp.assign(spec.dim, lit(0.0));
                fa.given.assign(spec.dim, false);
                fields.push_back(std::move(fa));
                section = is_form ? Section::OneForm : Section::VectorField;
                section_name = fname;
            } else {
                at.fail("unknown section '" + inner + "'");
            }
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos) at.fail("expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) at.fail("empty key");
        if (value.empty()) at.fail("empty value for '" + key + "'");

        switch (section) {
            case Section::None:
                at.fail("key outside of any section");
            case Section::Manifold: {
                if (key == "name") {
                    spec.name = value;
                } else if (key == "dim") {
                    double dv = parse_number(value, at);
                    if (dv != std::floor(dv) || dv < 1 || dv > 4)
                        at.fail("dim must be an integer between 1 and 4");
                    spec.dim = static_cast<size_t>(dv);
                    have_dim = true;
                    metric_entries.assign(
                        spec.dim, std::vector<std::pair<Expr, size_t>>(
                                      spec.dim, {nullptr, 0}));
                    domain_set.assign(spec.dim, {Interval{}, false});
                } else if (key == "coords") {
                    spec.coords = split_commas(value);
                    for (const auto& c : spec.coords) {
                        if (!is_ident(c)) at.fail("invalid coordinate name '" + c + "'");
                        if (c == "pi") at.fail("'pi' is reserved");
                    }
                    for (size_t i = 0; i < spec.coords.size(); ++i)
                        for (size_t j = i + 1; j < spec.coords.size(); ++j)
                            if (spec.coords[i] == spec.coords[j])
                                at.fail("duplicate coordinate '" + spec.coords[i] + "'");
                } else {
                    at.fail("unknown key '" + key + "' in [manifold]");
                }
                break;
            }
            case Section::Metric: {
                if (spec.coords.size() != spec.dim)
                    at.fail("coords must be declared before [metric]");
                auto ik = parse_indexed(key, at, spec.dim);
                if (!ik || ik->base != "g" || ik->idx.size() != 2)
                    at.fail("metric keys look like g[j][i]");
                size_t j = ik->idx[0], i = ik->idx[1];
                if (metric_entries[j][i].first)
                    at.fail("duplicate metric entry g[" + std::to_string(j) + "][" +
                            std::to_string(i) + "]");
                if (j != i && metric_entries[i][j].first) {
                    std::ostringstream os;
                    os << "both g[" << j << "][" << i << "] and its mirror are "
                       << "given; declare one triangle only (mirror at line "
                       << metric_entries[i][j].second << ")";
                    at.fail(os.str());
                }
                metric_entries[j][i] = {parse_quoted_expr(value, spec.coords, at),
                                        at.line};
                break;
            }
            case Section::Domain: {
                auto parts = split_commas(value);
                if (parts.size() != 2) at.fail("domain entries look like 'lo, hi'");
                Interval iv{parse_number(parts[0], at), parse_number(parts[1], at)};
                if (!(iv.lo < iv.hi)) at.fail("interval needs lo < hi");
                if (key == "fiber") {
                    if (have_fiber) at.fail("duplicate fiber interval");
                    spec.fiber = iv;
                    have_fiber = true;
                } else {
                    if (spec.coords.size() != spec.dim)
                        at.fail("coords must be declared before [domain]");
                    bool found = false;
                    for (size_t c = 0; c < spec.dim; ++c)
                        if (spec.coords[c] == key) {
                            if (domain_set[c].second)
                                at.fail("duplicate domain for '" + key + "'");
                            domain_set[c] = {iv, true};
                            found = true;
                        }
                    if (!found) at.fail("'" + key + "' is not a coordinate");
                }
                break;
            }
            case Section::VectorField:
            case Section::OneForm: {
                const bool is_form = section == Section::OneForm;
                const char* base = is_form ? "w" : "X";
                auto ik = parse_indexed(key, at, spec.dim);
                if (!ik || ik->base != base || ik->idx.size() != 1) {
                    std::ostringstream os;
                    os << "component keys look like " << base << "[i]";
                    at.fail(os.str());
                }
                FieldAccum& fa = fields.back();
                size_t i = ik->idx[0];
                if (fa.given[i])
                    at.fail("duplicate component " + key + " for '" + fa.name + "'");
                fa.comp[i] = parse_quoted_expr(value, spec.coords, at);
                fa.given[i] = true;
                break;
            }
        }
    }

    at.line = 0;  // end-of-file diagnostics
    if (spec.name.empty()) at.fail("missing 'name' in [manifold]");
    if (!have_dim) at.fail("missing 'dim' in [manifold]");
    if (spec.coords.size() != spec.dim) {
        std::ostringstream os;
        os << "expected " << spec.dim << " coordinates, got " << spec.coords.size();
        at.fail(os.str());
    }
    if (!have_fiber) at.fail("missing 'fiber' interval in [domain]");
    for (size_t c = 0; c < spec.dim; ++c)
        if (!domain_set[c].second)
            at.fail("missing domain interval for '" + spec.coords[c] + "'");
    spec.domain.clear();
    for (size_t c = 0; c < spec.dim; ++c) spec.domain.push_back(domain_set[c].first);

    // symmetric completion of the declared triangle
    spec.metric.assign(spec.dim, std::vector<Expr>(spec.dim));
    for (size_t j = 0; j < spec.dim; ++j)
        for (size_t i = 0; i <= j; ++i) {
            Expr e = metric_entries[j][i].first ? metric_entries[j][i].first
                                                : metric_entries[i][j].first;
            if (!e) {
                if (j == i)
                    at.fail("missing diagonal metric entry g[" + std::to_string(j) +
                            "][" + std::to_string(j) + "]");
                e = lit(0.0);
            }
            spec.metric[j][i] = e;
            spec.metric[i][j] = e;
        }

    for (auto& fa : fields) {
        bool any = false;
        for (bool b : fa.given) any = any || b;
        if (!any)
            at.fail(std::string(fa.is_form ? "one-form '" : "vector field '") +
                    fa.name + "' has no components");
        auto& dst = fa.is_form ? spec.one_forms : spec.vector_fields;
        dst.emplace_back(fa.name, std::move(fa.comp));
    }

    // reject charts whose metric degenerates anywhere on the box corners
    std::vector<Expr> bound(spec.dim * spec.dim);
    for (size_t j = 0; j < spec.dim; ++j)
        for (size_t i = 0; i < spec.dim; ++i)
            bound[j * spec.dim + i] = bind_slots(spec.metric[j][i], spec.coords);
    for (size_t mask = 0; mask < (size_t{1} << spec.dim); ++mask) {
        Point x(spec.dim);
        for (size_t c = 0; c < spec.dim; ++c)
            x[c] = (mask >> c) & 1 ? spec.domain[c].hi : spec.domain[c].lo;
        Mat g(spec.dim, spec.dim);
        try {
            for (size_t j = 0; j < spec.dim; ++j)
                for (size_t i = 0; i < spec.dim; ++i)
                    g(j, i) = eval(bound[j * spec.dim + i], x);
        } catch (const EvalError& e) {
            at.fail(std::string("metric undefined at a domain corner: ") + e.what());
        }
        double det = 0.0;
        if (spec.dim == 1) {
            det = g(0, 0);
        } else if (spec.dim == 2) {
            det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
        } else {
            // LU with the absolute value of the pivot product
            Mat a = g;
            det = 1.0;
            for (size_t col = 0; col < spec.dim && det != 0.0; ++col) {
                size_t piv = col;
                for (size_t r = col + 1; r < spec.dim; ++r)
                    if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
                if (a(piv, col) == 0.0) {
                    det = 0.0;
                    break;
                }
                if (piv != col)
                    for (size_t cc = 0; cc < spec.dim; ++cc)
                        std::swap(a(piv, cc), a(col, cc));
                det *= a(col, col);
                for (size_t r = col + 1; r < spec.dim; ++r) {
                    double f = a(r, col) / a(col, col);
                    for (size_t cc = col; cc < spec.dim; ++cc)
                        a(r, cc) -= f * a(col, cc);
                }
            }
        }
        if (std::abs(det) <= 1e-12) {
            std::ostringstream os;
            os << "metric is singular on the domain (|det g| = " << std::abs(det)
               << " at corner";
            for (size_t c = 0; c < spec.dim; ++c)
                os << " " << spec.coords[c] << "=" << x[c];
            os << ")";
            at.fail(os.str());
        }
    }

    return spec;
}

ManifoldSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecFileError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec_text(buf.str(), path);
}

}  // namespace liftcheck
