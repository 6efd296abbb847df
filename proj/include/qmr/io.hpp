#pragma once

#include <string>

#include "qmr/ensembles.hpp"

namespace qmr {

/// Binary instance container, little-endian throughout:
///
///   magic   "QMRB"                      4 bytes
///   version u32 (currently 1)
///   kind    u32   domain u32
///   p u64   n u64   d u64
///   sigma f64   noise_sigma f64   seed u64
///   truth   f64 x working_dim
///   b       f64 x n
///   mats    f64 x n*d*d (row-major per matrix)
void save_instance(const MeasurementSet& set, const std::string& path);
MeasurementSet load_instance(const std::string& path);

}  // namespace qmr
