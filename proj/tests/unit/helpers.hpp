#pragma once

#include "../oracles.hpp"

#include "slicetool/parser.hpp"

#include <doctest.h>

namespace testutil {

inline slicetool::Program corpus_program(const std::string &name) {
  return slicetool::parse_program(oracle::slurp(oracle::corpus_dir() / name));
}

inline slicetool::Analysis corpus_analysis(const std::string &name, const slicetool::SliceOptions &opts = {}) {
  std::filesystem::path p(name);
  return slicetool::analyze(p.stem().string(), oracle::slurp(oracle::corpus_dir() / name),
                            slicetool::Datasets::bundled(), opts);
}

// Flattened index of a method by rendered signature.
inline int method_index(const slicetool::Program &p, const std::string &sig) {
  return p.find(slicetool::parse_sig(sig));
}

} // namespace testutil
