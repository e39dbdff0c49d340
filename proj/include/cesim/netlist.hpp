#pragma once

// Line-oriented netlist language for single-photon linear-optics circuits.
//
//   <kind> [param=value ...] in=<path>[,<path>] out=<path>[,<path>]
//
// kinds: source, mask, hwp, dove, pbs, bs, gp, mirror, mzim, cnot, detector
// params: theta (degrees), ref (H|V), phi (radians), mode (h|v),
//         pol (H|V), id (detector name)
// '#' starts a comment; paths match [A-Za-z_][A-Za-z0-9_]*.
// ${name} placeholders are resolved by substitute() before parsing.
//
// Path flow is linear: every path is produced exactly once (by the source
// or an element output) and consumed exactly once (by an element input or
// a detector). An element may reuse its own input labels as outputs
// (in-place), but any other re-production is rejected. Detector paths are
// terminal.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cesim::optics {

enum class ElementKind { Mask, Hwp, Dove, Pbs, Bs, Gp, Mirror, Mzim, Cnot };

const char* element_kind_name(ElementKind k);

struct Element {
    ElementKind kind = ElementKind::Mirror;
    double theta = 0.0;  // degrees (hwp, dove)
    char ref = 'V';      // hwp reference axis, 'H' or 'V'
    double phi = 0.0;    // radians (gp)
    char mode = 'h';     // mask target mode, 'h' or 'v'
    std::vector<std::string> in;
    std::vector<std::string> out;
    int line = 0;
    int seq = 0;  // statement order in the source text
};

struct SourceSpec {
    char pol = 'V';
    char mode = 'h';
    std::string path;
    int line = 0;
    int seq = 0;
};

struct DetectorSpec {
    std::string id;
    std::string path;
    int line = 0;
    int seq = 0;
};

struct CircuitIR {
    std::vector<Element> elements;
    SourceSpec prep;
    std::vector<DetectorSpec> detectors;
    std::map<std::string, int> pathTable;  // label -> index, declaration order
    std::vector<std::string> pathNames;    // index -> label
};

enum class NetlistErrorKind {
    SyntaxError,
    UnknownElement,
    DuplicateProducer,
    DuplicateConsumer,
    UnknownPath,
    DanglingPath,
    DetectorNotTerminal,
    SourceError,
};

const char* netlist_error_kind_name(NetlistErrorKind k);

struct NetlistError : std::runtime_error {
    NetlistError(NetlistErrorKind kind, int line, int column, const std::string& message);
    NetlistErrorKind kind;
    int line;    // 1-based
    int column;  // 1-based
};

/// Parse and validate. Throws NetlistError.
CircuitIR parse_netlist(const std::string& text);

/// Replace ${name} placeholders. Unknown placeholders are left in place
/// (the parser then reports them as SyntaxError).
std::string substitute(const std::string& text,
                       const std::map<std::string, std::string>& values);

/// Canonical text form; parse(serialize(ir)) reproduces an equal IR.
std::string serialize(const CircuitIR& ir);

/// Structural equality ignoring line numbers.
bool same_circuit(const CircuitIR& a, const CircuitIR& b);

} // namespace cesim::optics
