#pragma once

#include <cstdint>
#include <vector>

namespace sbox::detail {

struct ConwayEntry {
  std::uint32_t p;
  std::uint32_t n;
  std::vector<std::uint32_t> coeffs;  // little-endian, monic
};

const std::vector<ConwayEntry>& conway_table();

}  // namespace sbox::detail
