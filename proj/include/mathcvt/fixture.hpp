#pragma once

#include <map>
#include <string>

#include "mathcvt/pipeline.hpp"

namespace mathcvt {

/// Bundled benchmark data. The dictionary/taxonomy/rule files are embedded
/// verbatim; the gold files are produced by running the pipeline on the
/// semantic TeX of each entry, so gold self-evaluation is zero by
/// construction.
std::string fixture_lexicon_text();
std::string fixture_taxonomy_text();
std::string fixture_shortcuts_text();
std::string fixture_equivalence_text();
std::string fixture_registry_text();

/// Registry (core + special content macros + bundled extensions) and lexicon
/// wired into a ready-to-use pipeline.
Pipeline fixture_pipeline();

/// filename -> content for every bundled fixture file, gold files included.
/// Deterministic: repeated calls produce identical bytes.
std::map<std::string, std::string> generate_fixtures();

/// Writes all fixture files into `dir` (which must exist).
void write_fixtures(const std::string& dir);

}  // namespace mathcvt
