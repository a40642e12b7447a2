// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file shape.hpp
 * @brief Lattice shapes, Majorana mode indices and the library error types.
 *
 * A system has V sites with p fermionic modes each. Site j carries the 2p
 * Majorana operators m_j^1 ... m_j^{2p}; the pair (m^{2a-1}, m^{2a}) encodes
 * mode a. Indices are 1-based throughout the public interface.
 */

#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace fermicert {

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a request exceeds the configured dense-numerics mode cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultModeCap = 12;
inline constexpr const char* kModeCapEnv = "FERMICERT_MODE_CAP";

/// Maximum number of fermionic modes (pV) accepted by the dense routines.
/// Overridable through the FERMICERT_MODE_CAP environment variable.
inline int mode_cap() {
  if (const char* env = std::getenv(kModeCapEnv)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0 && v <= 30) return static_cast<int>(v);
  }
  return kDefaultModeCap;
}

struct SystemShape {
  int sites = 1;           // V
  int modes_per_site = 1;  // p

  SystemShape() = default;
  SystemShape(int v, int p) : sites(v), modes_per_site(p) {
    if (v < 1 || p < 1) throw DomainError("SystemShape: sites and modes_per_site must be positive");
    if (2 * v * p > 64) throw DomainError("SystemShape: at most 64 Majorana operators are supported");
  }

  int num_modes() const { return sites * modes_per_site; }
  int num_majoranas() const { return 2 * sites * modes_per_site; }
  int majoranas_per_site() const { return 2 * modes_per_site; }

  /// Fock dimension 2^{pV}; throws ResourceError beyond the mode cap.
  std::size_t fock_dim() const {
    if (num_modes() > mode_cap())
      throw ResourceError("Fock dimension 2^" + std::to_string(num_modes()) + " exceeds mode cap of " +
                          std::to_string(mode_cap()) + " modes (set " + kModeCapEnv + " to override)");
    return std::size_t{1} << num_modes();
  }

  bool operator==(const SystemShape&) const = default;

  std::string str() const { return "(V=" + std::to_string(sites) + ", p=" + std::to_string(modes_per_site) + ")"; }
};

/// Majorana m_site^majorana, ordered lexicographically by (site, majorana).
struct ModeIndex {
  int site = 1;
  int majorana = 1;

  auto operator<=>(const ModeIndex&) const = default;
};

/// Bit position of a Majorana inside a word bitmask: (site-1)*2p + (majorana-1).
inline int bit_position(const ModeIndex& x, const SystemShape& shape) {
  if (x.site < 1 || x.site > shape.sites || x.majorana < 1 || x.majorana > shape.majoranas_per_site())
    throw DomainError("Majorana index (" + std::to_string(x.site) + "," + std::to_string(x.majorana) +
                      ") out of range for shape " + shape.str());
  return (x.site - 1) * shape.majoranas_per_site() + (x.majorana - 1);
}

inline ModeIndex mode_index_at(int bit, const SystemShape& shape) {
  return {bit / shape.majoranas_per_site() + 1, bit % shape.majoranas_per_site() + 1};
}

/// Fermionic mode (0-based, site-major) that carries a given Majorana bit.
inline int mode_of_bit(int bit) { return bit / 2; }

}  // namespace fermicert
