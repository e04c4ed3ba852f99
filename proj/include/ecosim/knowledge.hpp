#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecosim/emulator.hpp"
#include "ecosim/serialize.hpp"

namespace ecosim {

/// Directories searched for `<name>.eco`, in order: explicit directories
/// (colon-separated, e.g. from --lib-path), then ECOSIM_LIB_PATH, then the
/// libraries shipped with the build.
std::vector<std::string> library_search_path(const std::optional<std::string>& explicit_dirs);

/// Path of `<name>.eco` on the search path; throws LibraryNotFound.
std::string find_library(const std::string& name, const std::vector<std::string>& search_path);

/// Folds every statement of the named libraries into `base`, provenance
/// Compiled. Loading a library twice throws DuplicateLibrary.
Emulator load_prelude(const std::vector<std::string>& names,
                      const std::vector<std::string>& search_path,
                      const Emulator& base = base_emulator());

/// Loads one library's source text (already read) under `name`.
Emulator load_library_text(const Emulator& base, const std::string& name, const std::string& text,
                           const std::string& origin);

/// Appends the generic source of each Situation rule to `library_file` under
/// an exclusive lock and returns the lines written.
std::vector<std::string> promote(const Emulator& em, const std::vector<int>& rule_ids,
                                 const std::string& library_file);

/// Rules that `promote` would accept: Situation provenance, Generic scope.
std::vector<int> promotable_rules(const Emulator& em);

Json rule_to_json(const AffordanceRule& rule);
Json list_rules(const Emulator& em, std::optional<Provenance> filter = std::nullopt);

}  // namespace ecosim
