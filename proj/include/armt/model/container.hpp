// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Weight container file.
//
//   "ARMT"                       4-byte magic
//   u32 version                  currently 1
//   config                       u32 x 9: n_layers d_model n_heads d_ff vocab_size
//                                         segment_size num_mem_tokens d_mem dpfp_nu
//                                f64 x 4: eps_assoc_f32 eps_assoc_f64 eps_norm rope_theta
//                                u64 seed
//   u32 tensor_count
//   manifest entries             u16 name_len, name bytes, u8 dtype (1=f32, 2=f64),
//                                u8 rank, u64 dims[rank], u64 byte offset into payload
//   payload                      contiguous tensors in manifest order
//
// Every integer and float is little-endian.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "armt/model/config.hpp"
#include "armt/model/weights.hpp"

namespace armt::model {

inline constexpr std::uint32_t kContainerVersion = 1;

struct ManifestEntry {
    std::string name;
    DType dtype = DType::F64;
    Shape shape;
    std::uint64_t offset = 0;
};

struct Container {
    ModelConfig config;
    DType dtype = DType::F64;
    std::vector<ManifestEntry> manifest;
    // Exactly one of these is populated, matching `dtype`.
    GroupedWeights<float> f32;
    GroupedWeights<double> f64;
};

template <Real T>
std::vector<std::uint8_t> encode_container(const ModelConfig& config,
                                           const GroupedWeights<T>& weights);

/// Throws InputError on malformed bytes, DimensionError on shape/config disagreement.
Container decode_container(std::span<const std::uint8_t> bytes);

/// Weights converted to T; bit-exact when T matches the stored dtype.
template <Real T>
GroupedWeights<T> weights_as(const Container& container);

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

template <Real T>
void save_container(const std::filesystem::path& path, const ModelConfig& config,
                    const GroupedWeights<T>& weights) {
    write_file(path, encode_container(config, weights));
}

inline Container load_container(const std::filesystem::path& path) {
    return decode_container(read_file(path));
}

}  // namespace armt::model
