#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "emocpm/data/corpus.hpp"

namespace emocpm::data {

struct KappaResult {
  double kappa = 0.0;
  double observed = 0.0;  // p_o
  double expected = 0.0;  // p_e
  // False when p_e == 1: both annotators used one identical label throughout.
  // kappa is then reported as 1.
  bool defined = true;
};

// Cohen's kappa for two binary annotation vectors. Empty or unequal-length
// input is a DataError.
KappaResult cohen_kappa(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

// Paired component annotations of two annotators over the same instances.
struct AgreementRecord {
  std::vector<std::string> ids;
  std::array<std::vector<std::uint8_t>, kNumComponents> first, second;
};

// Pairs two annotation files by id. Files use the corpus record layout but
// only id and cpm are required.
AgreementRecord load_agreement(const std::filesystem::path& first,
                               const std::filesystem::path& second);

std::array<KappaResult, kNumComponents> component_kappas(const AgreementRecord& record);

}  // namespace emocpm::data
