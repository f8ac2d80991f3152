#pragma once

#include <stdexcept>
#include <string>

namespace rforge {

// induced: the embedding machinery enforces induced-goodness (closure depth 2,
// conflict-graph stage); plain: goodness only (closure depth 1).
enum class Mode { induced, plain };

// even: all subdivision lengths even, 6-cycle gadget; general: arbitrary
// lengths, 5-cycle (induced) or short odd cycle (plain) gadget.
enum class CaseKind { even, general };

inline std::string to_string(Mode m) { return m == Mode::induced ? "induced" : "plain"; }
inline std::string to_string(CaseKind c) { return c == CaseKind::even ? "even" : "general"; }

inline Mode parse_mode(const std::string& s) {
    if (s == "induced") return Mode::induced;
    if (s == "plain") return Mode::plain;
    throw std::invalid_argument("unknown mode: " + s);
}

inline CaseKind parse_case(const std::string& s) {
    if (s == "even") return CaseKind::even;
    if (s == "general") return CaseKind::general;
    throw std::invalid_argument("unknown case: " + s);
}

// closure depth used by availability tests: cl_2 in induced mode, cl_1 in plain
inline int closure_depth(Mode m) { return m == Mode::induced ? 2 : 1; }

}  // namespace rforge
