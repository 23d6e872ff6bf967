#pragma once

#include <filesystem>

#include "tokenprune/tensor.hpp"

namespace tokenprune {

// =========================================================================
// npy v1.0 subset used for all tensor artifacts
//
//   magic   : "\x93NUMPY"
//   version : 0x01 0x00
//   hlen    : uint16, little-endian
//   header  : python dict literal, space-padded so the total preamble
//             (10 + hlen bytes) is a multiple of 64, '\n'-terminated
//             {'descr': '<f4'|'<f8', 'fortran_order': False, 'shape': (..)}
//   payload : little-endian IEEE-754, C order
//
// Anything else (other versions, big-endian or integer descr,
// fortran_order=True, payload size not matching the shape) is rejected with
// MalformedHeaderError. Values are widened to float64 in memory; save_tensor
// writes back in the tensor's recorded dtype, which keeps float32 round
// trips bit-exact.
// =========================================================================

// Reads a tensor, checking rank against expected_rank.
// Errors: FileNotFoundError, MalformedHeaderError, WrongRankError,
// NonFiniteError.
Tensor load_tensor(const std::filesystem::path& path, std::size_t expected_rank);

// Writes tensor in its recorded dtype. Errors: NonFiniteError,
// UnwritablePathError.
void save_tensor(const Tensor& tensor, const std::filesystem::path& path);

}  // namespace tokenprune
