#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dataset/model.hpp"
#include "domainlang/signature.hpp"

namespace dataset {

enum class LoadMode {
    Strict,   // invalid records abort the load
    Lenient,  // invalid records are skipped with a warning
};

struct LoadOptions {
    LoadMode mode = LoadMode::Strict;
    const domainlang::DomainSignature* sig = nullptr;  // enables WellForm validation
    std::vector<std::string>* warnings = nullptr;
};

std::vector<ElementaryExample> loadElementary(const std::filesystem::path& path,
                                              const LoadOptions& opts = {});
std::vector<ComplexExample> loadComplex(const std::filesystem::path& path,
                                        const LoadOptions& opts = {});

void saveElementary(const std::filesystem::path& path,
                    const std::vector<ElementaryExample>& examples);
void saveComplex(const std::filesystem::path& path, const std::vector<ComplexExample>& examples);

// Validation used by the loaders, exposed for reuse; returns an error message
// or empty string.
std::string validateElementary(const ElementaryExample& e,
                               const domainlang::DomainSignature* sig);
std::string validateComplex(const ComplexExample& e, const domainlang::DomainSignature* sig);

}  // namespace dataset
