#include "cesim/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace cesim::optics {

const char* element_kind_name(ElementKind k) {
    switch (k) {
        case ElementKind::Mask: return "mask";
        case ElementKind::Hwp: return "hwp";
        case ElementKind::Dove: return "dove";
        case ElementKind::Pbs: return "pbs";
        case ElementKind::Bs: return "bs";
        case ElementKind::Gp: return "gp";
        case ElementKind::Mirror: return "mirror";
        case ElementKind::Mzim: return "mzim";
        case ElementKind::Cnot: return "cnot";
    }
    return "?";
}

const char* netlist_error_kind_name(NetlistErrorKind k) {
    switch (k) {
        case NetlistErrorKind::SyntaxError: return "SyntaxError";
        case NetlistErrorKind::UnknownElement: return "UnknownElement";
        case NetlistErrorKind::DuplicateProducer: return "DuplicateProducer";
        case NetlistErrorKind::DuplicateConsumer: return "DuplicateConsumer";
        case NetlistErrorKind::UnknownPath: return "UnknownPath";
        case NetlistErrorKind::DanglingPath: return "DanglingPath";
        case NetlistErrorKind::DetectorNotTerminal: return "DetectorNotTerminal";
        case NetlistErrorKind::SourceError: return "SourceError";
    }
    return "?";
}

namespace {

std::string format_error(NetlistErrorKind kind, int line, int column,
                         const std::string& message) {
    std::ostringstream os;
    os << netlist_error_kind_name(kind) << " at line " << line << ", column "
       << column << ": " << message;
    return os.str();
}

} // namespace

NetlistError::NetlistError(NetlistErrorKind kind_, int line_, int column_,
                           const std::string& message)
    : std::runtime_error(format_error(kind_, line_, column_, message)),
      kind(kind_),
      line(line_),
      column(column_) {}

namespace {

struct Token {
    std::string text;
    int column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

bool valid_path_name(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

struct Statement {
    std::string kind;
    int line = 0;
    int kindColumn = 1;
    // key -> (value, column of token)
    std::vector<std::pair<std::string, Token>> params;

    const Token* find(const std::string& key) const {
        for (const auto& [k, v] : params)
            if (k == key) return &v;
        return nullptr;
    }
};

double parse_number(const Token& tok, int line, const std::string& key) {
    const std::string& v = tok.text;
    double value = 0.0;
    const char* begin = v.data();
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        throw NetlistError(NetlistErrorKind::SyntaxError, line, tok.column,
                           "invalid numeric value '" + v + "' for '" + key + "'");
    return value;
}

char parse_letter(const Token& tok, int line, const std::string& key,
                  char a, char b) {
    if (tok.text.size() == 1 && (tok.text[0] == a || tok.text[0] == b))
        return tok.text[0];
    throw NetlistError(NetlistErrorKind::SyntaxError, line, tok.column,
                       std::string("expected '") + a + "' or '" + b + "' for '" +
                           key + "', got '" + tok.text + "'");
}

std::vector<std::string> parse_path_list(const Token& tok, int line,
                                         const std::string& key) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= tok.text.size()) {
        const std::size_t comma = tok.text.find(',', pos);
        const std::string item = tok.text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const int itemColumn = tok.column + static_cast<int>(pos);
        if (!valid_path_name(item)) {
            if (item.rfind("${", 0) == 0)
                throw NetlistError(NetlistErrorKind::SyntaxError, line, itemColumn,
                                   "unresolved placeholder '" + item + "'");
            throw NetlistError(NetlistErrorKind::SyntaxError, line, itemColumn,
                               "invalid path name '" + item + "' in '" + key + "'");
        }
        out.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

Statement parse_statement(const std::string& line, int lineNo) {
    const std::vector<Token> tokens = tokenize(line);
    Statement st;
    st.line = lineNo;
    if (tokens.empty()) return st;
    st.kind = tokens[0].text;
    st.kindColumn = tokens[0].column;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const Token& tok = tokens[i];
        const std::size_t eq = tok.text.find('=');
        if (eq == std::string::npos)
            throw NetlistError(NetlistErrorKind::SyntaxError, lineNo, tok.column,
                               "expected key=value, got '" + tok.text + "'");
        const std::string key = tok.text.substr(0, eq);
        const std::string value = tok.text.substr(eq + 1);
        if (key.empty())
            throw NetlistError(NetlistErrorKind::SyntaxError, lineNo, tok.column,
                               "missing key before '='");
        if (value.empty())
            throw NetlistError(NetlistErrorKind::SyntaxError, lineNo, tok.column,
                               "missing value after '" + key + "='");
        if (value.rfind("${", 0) == 0)
            throw NetlistError(NetlistErrorKind::SyntaxError, lineNo,
                               tok.column + static_cast<int>(eq) + 1,
                               "unresolved placeholder '" + value + "'");
        static const char* known[] = {"theta", "ref", "phi", "mode", "pol", "id",
                                      "in", "out"};
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok)
            throw NetlistError(NetlistErrorKind::SyntaxError, lineNo, tok.column,
                               "unknown parameter '" + key + "'");
        Token valueTok{value, tok.column + static_cast<int>(eq) + 1};
        st.params.emplace_back(key, valueTok);
    }
    return st;
}

void require_ports(const Statement& st, std::size_t inMin, std::size_t inMax,
                   std::size_t outCount, const std::vector<std::string>& in,
                   const std::vector<std::string>& out) {
    if (in.size() < inMin || in.size() > inMax) {
        std::ostringstream os;
        os << "'" << st.kind << "' takes ";
        if (inMin == inMax)
            os << inMin;
        else
            os << inMin << ".." << inMax;
        os << " input path(s), got " << in.size();
        throw NetlistError(NetlistErrorKind::SyntaxError, st.line, st.kindColumn,
                           os.str());
    }
    if (out.size() != outCount) {
        std::ostringstream os;
        os << "'" << st.kind << "' takes " << outCount << " output path(s), got "
           << out.size();
        throw NetlistError(NetlistErrorKind::SyntaxError, st.line, st.kindColumn,
                           os.str());
    }
}

const Token& require_param(const Statement& st, const std::string& key) {
    const Token* tok = st.find(key);
    if (!tok)
        throw NetlistError(NetlistErrorKind::SyntaxError, st.line, st.kindColumn,
                           "'" + st.kind + "' requires parameter '" + key + "'");
    return *tok;
}

} // namespace

std::string substitute(const std::string& text,
                       const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t open = text.find("${", pos);
        if (open == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        out.append(text, pos, open - pos);
        const std::size_t close = text.find('}', open  + 2);
        if (close == std::string::npos) {
            out.append(text, open, std::string::npos);
            break;
        }
        const std::string name = text.substr(open + 2, close - open - 2);
        const auto it = values.find(name);
        if (it == values.end()) {
            out.append(text, open, close - open + 1);
        } else {
            out.append(it->second);
        }
        pos = close + 1;
    }
    return out;
}

CircuitIR parse_netlist(const std::string& text) {
    CircuitIR ir;
    bool haveSource = false;
    int seq = 0;

    enum class PathState { Live, Consumed };
    struct PathInfo {
        PathState state = PathState::Live;
        int producedLine = 0;
        bool hasDetector = false;
        int detectorLine = 0;
    };
    std::map<std::string, PathInfo> paths;

    auto declare_path = [&ir](const std::string& name) {
        if (ir.pathTable.find(name) == ir.pathTable.end()) {
            ir.pathTable.emplace(name, static_cast<int>(ir.pathNames.size()));
            ir.pathNames.push_back(name);
        }
    };

    auto produce = [&](const std::string& name, int line, int column,
                       const std::vector<std::string>* sameStatementIn) {
        auto it = paths.find(name);
        const bool inPlace =
            sameStatementIn &&
            std::find(sameStatementIn->begin(), sameStatementIn->end(), name) !=
                sameStatementIn->end();
        if (it != paths.end() && !inPlace)
            throw NetlistError(NetlistErrorKind::DuplicateProducer, line, column,
                               "path '" + name + "' already produced at line " +
                                   std::to_string(it->second.producedLine));
        paths[name] = PathInfo{PathState::Live, line, false, 0};
        declare_path(name);
    };

    auto consume = [&](const std::string& name, int line, int column) {
        auto it = paths.find(name);
        if (it == paths.end())
            throw NetlistError(NetlistErrorKind::UnknownPath, line, column,
                               "path '" + name + "' consumed before production");
        if (it->second.state == PathState::Consumed)
            throw NetlistError(NetlistErrorKind::DuplicateConsumer, line, column,
                               "path '" + name + "' already consumed");
        if (it->second.hasDetector)
            throw NetlistError(NetlistErrorKind::DetectorNotTerminal,
                               it->second.detectorLine, 1,
                               "detector path '" + name +
                                   "' is consumed again at line " +
                                   std::to_string(line));
        it->second.state = PathState::Consumed;
    };

    std::istringstream stream(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(stream, line)) {
        ++lineNo;
        Statement st = parse_statement(line, lineNo);
        if (st.kind.empty()) continue;

        std::vector<std::string> in, out;
        if (const Token* tok = st.find("in")) in = parse_path_list(*tok, lineNo, "in");
        if (const Token* tok = st.find("out"))
            out = parse_path_list(*tok, lineNo, "out");

        if (st.kind == "source") {
            require_ports(st, 0, 0, 1, in, out);
            if (haveSource)
                throw NetlistError(NetlistErrorKind::SourceError, lineNo,
                                   st.kindColumn,
                                   "a netlist declares exactly one source");
            haveSource = true;
            ir.prep.path = out[0];
            ir.prep.line = lineNo;
            ir.prep.seq = seq++;
            if (const Token* tok = st.find("pol"))
                ir.prep.pol = parse_letter(*tok, lineNo, "pol", 'H', 'V');
            if (const Token* tok = st.find("mode"))
                ir.prep.mode = parse_letter(*tok, lineNo, "mode", 'h', 'v');
            produce(out[0], lineNo, st.find("out")->column, nullptr);
            continue;
        }
        if (st.kind == "detector") {
            require_ports(st, 1, 1, 0, in, out);
            DetectorSpec det;
            det.id = require_param(st, "id").text;
            det.path = in[0];
            det.line = lineNo;
            det.seq = seq++;
            auto it = paths.find(det.path);
            const Token& inTok = *st.find("in");
            if (it == paths.end())
                throw NetlistError(NetlistErrorKind::UnknownPath, lineNo, inTok.column,
                                   "detector path '" + det.path +
                                       "' was never produced");
            if (it->second.state == PathState::Consumed)
                throw NetlistError(NetlistErrorKind::DetectorNotTerminal, lineNo,
                                   inTok.column,
                                   "detector path '" + det.path +
                                       "' is not terminal");
            if (it->second.hasDetector)
                throw NetlistError(NetlistErrorKind::DuplicateConsumer, lineNo,
                                   inTok.column,
                                   "path '" + det.path +
                                       "' already bound to a detector");
            it->second.hasDetector = true;
            it->second.detectorLine = lineNo;
            ir.detectors.push_back(det);
            continue;
        }

        Element el;
        el.line = lineNo;
        el.seq = seq++;
        if (st.kind == "mask") {
            el.kind = ElementKind::Mask;
            el.mode = parse_letter(require_param(st, "mode"), lineNo, "mode", 'h', 'v');
            require_ports(st, 1, 1, 1, in, out);
        } else if (st.kind == "hwp") {
            el.kind = ElementKind::Hwp;
            el.theta = parse_number(require_param(st, "theta"), lineNo, "theta");
            if (const Token* tok = st.find("ref"))
                el.ref = parse_letter(*tok, lineNo, "ref", 'H', 'V');
            require_ports(st, 1, 1, 1, in, out);
        } else if (st.kind == "dove") {
            el.kind = ElementKind::Dove;
            el.theta = parse_number(require_param(st, "theta"), lineNo, "theta");
            require_ports(st, 1, 1, 1, in, out);
        } else if (st.kind == "pbs") {
            el.kind = ElementKind::Pbs;
            require_ports(st, 1, 2, 2, in, out);
        } else if (st.kind == "bs") {
            el.kind = ElementKind::Bs;
            require_ports(st, 1, 2, 2, in, out);
        } else if (st.kind == "gp") {
            el.kind = ElementKind::Gp;
            el.phi = parse_number(require_param(st, "phi"), lineNo, "phi");
            require_ports(st, 1, 1, 1, in, out);
        } else if (st.kind == "mirror") {
            el.kind = ElementKind::Mirror;
            require_ports(st, 1, 1, 1, in, out);
        } else if (st.kind == "mzim") {
            el.kind = ElementKind::Mzim;
            require_ports(st, 1, 2, 2, in, out);
        } else if (st.kind == "cnot") {
            el.kind = ElementKind::Cnot;
            require_ports(st, 1, 1, 1, in, out);
        } else {
            throw NetlistError(NetlistErrorKind::UnknownElement, lineNo,
                               st.kindColumn,
                               "unknown element '" + st.kind + "'");
        }

        // in-place reuse is only legal when out repeats in exactly
        const bool inPlace = (in == out);
        if (!inPlace) {
            for (std::size_t i = 0; i < out.size(); ++i)
                for (std::size_t j = 0; j < in.size(); ++j)
                    if (out[i] == in[j])
                        throw NetlistError(
                            NetlistErrorKind::DuplicateProducer, lineNo,
                            st.find("out")->column,
                            "partial in-place reuse of path '" + out[i] +
                                "' (outputs must all be fresh or equal the inputs)");
            for (std::size_t i = 0; i < out.size(); ++i)
                for (std::size_t j = i + 1; j < out.size(); ++j)
                    if (out[i] == out[j])
                        throw NetlistError(NetlistErrorKind::DuplicateProducer,
                                           lineNo, st.find("out")->column,
                                           "output path '" + out[i] +
                                               "' listed twice");
        }
        const Token* inTok = st.find("in");
        for (const std::string& p : in) consume(p, lineNo, inTok ? inTok->column : 1);
        if (!inPlace) {
            const Token* outTok = st.find("out");
            for (const std::string& p : out)
                produce(p, lineNo, outTok ? outTok->column : 1, nullptr);
        } else {
            for (const std::string& p : out) paths[p].state = PathState::Live;
        }
        el.in = std::move(in);
        el.out = std::move(out);
        ir.elements.push_back(std::move(el));
    }

    if (!haveSource)
        throw NetlistError(NetlistErrorKind::SourceError, 1, 1,
                           "netlist has no source");

    for (const auto& [name, info] : paths)
        if (info.state == PathState::Live && !info.hasDetector)
            throw NetlistError(NetlistErrorKind::DanglingPath, info.producedLine, 1,
                               "path '" + name +
                                   "' is produced but never consumed "
                                   "(bind a detector or feed an element)");

    return ir;
}

std::string serialize(const CircuitIR& ir) {
    struct Row {
        int seq;
        std::string text;
    };
    std::vector<Row> rows;

    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += v[i];
        }
        return s;
    };

    auto fmt = [](double x) {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    };

    {
        std::ostringstream os;
        os << "source pol=" << ir.prep.pol << " mode=" << ir.prep.mode
           << " out=" << ir.prep.path;
        rows.push_back({ir.prep.seq, os.str()});
    }
    for (const Element& el : ir.elements) {
        std::ostringstream os;
        os << element_kind_name(el.kind);
        switch (el.kind) {
            case ElementKind::Mask: os << " mode=" << el.mode; break;
            case ElementKind::Hwp:
                os << " theta=" << fmt(el.theta) << " ref=" << el.ref;
                break;
            case ElementKind::Dove: os << " theta=" << fmt(el.theta); break;
            case ElementKind::Gp: os << " phi=" << fmt(el.phi); break;
            default: break;
        }
        os << " in=" << join(el.in) << " out=" << join(el.out);
        rows.push_back({el.seq, os.str()});
    }
    for (const DetectorSpec& det : ir.detectors) {
        std::ostringstream os;
        os << "detector id=" << det.id << " in=" << det.path;
        rows.push_back({det.seq, os.str()});
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.seq < b.seq; });
    std::string out;
    for (const Row& r : rows) {
        out += r.text;
        out += '\n';
    }
    return out;
}

bool same_circuit(const CircuitIR& a, const CircuitIR& b) {
    if (a.prep.pol != b.prep.pol || a.prep.mode != b.prep.mode ||
        a.prep.path != b.prep.path || a.prep.seq != b.prep.seq)
        return false;
    if (a.elements.size() != b.elements.size()) return false;
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
        const Element& x = a.elements[i];
        const Element& y = b.elements[i];
        if (x.kind != y.kind || x.theta != y.theta || x.ref != y.ref ||
            x.phi != y.phi || x.mode != y.mode || x.in != y.in || x.out != y.out ||
            x.seq != y.seq)
            return false;
    }
    if (a.detectors.size() != b.detectors.size()) return false;
    for (std::size_t i = 0; i < a.detectors.size(); ++i) {
        const DetectorSpec& x = a.detectors[i];
        const DetectorSpec& y = b.detectors[i];
        if (x.id != y.id || x.path != y.path || x.seq != y.seq) return false;
    }
    return a.pathNames == b.pathNames;
}

} // namespace cesim::optics
