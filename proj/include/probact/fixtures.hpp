#pragma once

#include <string>
#include <vector>

#include "probact/io.hpp"

namespace probact {

// Bundled warehouse-robot example models, built in code so tests and the
// shipped data files share one source of truth.
std::vector<std::string> fixture_names();

// Canonical file name for a fixture (name plus the extension of its kind).
std::string fixture_filename(const std::string& name);

// Throws ModelError for an unknown fixture name.
ParsedModel load_fixture(const std::string& name);

}  // namespace probact
