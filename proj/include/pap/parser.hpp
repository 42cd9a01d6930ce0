#pragma once

#include <string>
#include <variant>

#include "pap/model.hpp"
#include "pap/state.hpp"

namespace pap {

struct SourceSpan {
    std::string file;
    int line = 1;
    int col = 1;
};

struct ParseError : PapError {
    SourceSpan span;
    ParseError(const std::string& msg, SourceSpan s)
        : PapError(s.file + ":" + std::to_string(s.line) + ":" + std::to_string(s.col) + ": " +
                   msg),
          span(std::move(s)) {}
};

// Program files (.pap): rules, action blocks, action constraints, integrity
// constraints. `default_strategy` applies to unannotated condition groups.
Program parse_program(const std::string& text, const std::string& file = "<input>",
                      Strategy default_strategy = Strategy::Ig);

// State files (.pst): `domain.fn(args) = { rv{obj:prob,...}, ... }` entries.
ProbState parse_state(const std::string& text, const std::string& file = "<input>");

// A single annotated condition or a single status atom.
using Query = std::variant<AnnotatedCondition, StatusAtom>;
Query parse_query(const std::string& text, const std::string& file = "<input>",
                  Strategy default_strategy = Strategy::Ig);

// Status-set files: ground status atoms separated by commas/newlines.
StatusSet parse_status_set(const std::string& text, const std::string& file = "<input>");

// Ground action invocation, e.g. `erase(t80)`.
GroundAction parse_action_invocation(const std::string& text,
                                     const std::string& file = "<input>");

}  // namespace pap
