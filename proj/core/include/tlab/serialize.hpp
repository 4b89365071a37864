#pragma once

#include <string>

#include "tlab/generators.hpp"

namespace tlab {

/// Recipes serialize to JSON (version, deltas, epsilon schedule, per-stage
/// frequency/coefficient arrays, stage errors, grid metadata). Writes are
/// atomic: temp file then rename.
std::string recipe_to_json(const GeneratorRecipe& recipe);
GeneratorRecipe recipe_from_json(const std::string& text);
void save_recipe(const GeneratorRecipe& recipe, const std::string& path);
GeneratorRecipe load_recipe(const std::string& path);

std::string pair_to_json(const PairRecipe& recipe);
PairRecipe pair_from_json(const std::string& text);
void save_pair(const PairRecipe& recipe, const std::string& path);
PairRecipe load_pair(const std::string& path);

/// Atomic text write used for every file the library emits.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace tlab
