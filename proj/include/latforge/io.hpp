#pragma once

#include <string>

#include "latforge/measured.hpp"

namespace latforge {

/// Parsed measured-structure file: the value lattice D (zero convention),
/// the partial lattice, and the measured structure built from the phi
/// table. Pairs x <= y may be omitted from phi (default 0 of D); all
/// other pairs are required.
struct MeasuredFile {
  DistLattice D;
  PartialLattice P;
  MeasuredPL M;
};

MeasuredFile parse_measured_text(const std::string& text);
MeasuredFile parse_measured_file(const std::string& path);

/// Serializes in the same schema; omits phi entries for comparable pairs.
std::string serialize_measured(const MeasuredFile& f);

/// Hasse diagram in DOT (transitive reduction only).
std::string poset_dot(const FinitePoset& p, const std::string& name);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace latforge
