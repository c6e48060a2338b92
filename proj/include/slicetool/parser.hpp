#pragma once

#include "slicetool/errors.hpp"
#include "slicetool/ir.hpp"

#include <string_view>

namespace slicetool {

// Parses and validates a SLIR file. Throws SyntaxError on grammar
// violations and ValidationError on model invariant violations.
Program parse_program(std::string_view text);

// Parses a canonical `<C: ret name(p1,p2)>` signature.
MethodSig parse_sig(std::string_view text);

} // namespace slicetool
