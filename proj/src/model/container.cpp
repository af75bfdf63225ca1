// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/model/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace armt::model {
namespace {

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    template <typename U>
    void uint(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
    void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
    std::vector<std::uint8_t> take() { return std::move(out_); }
    std::size_t size() const { return out_.size(); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::span<const std::uint8_t> bytes(std::size_t n) {
        if (n > in_.size() - pos_) {
            throw InputError("weight container truncated at byte " + std::to_string(pos_));
        }
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    template <typename U>
    U uint() {
        auto b = bytes(sizeof(U));
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            v |= static_cast<U>(static_cast<U>(b[i]) << (8 * i));
        }
        return v;
    }
    double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return in_.size() - pos_; }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

void write_config(Writer& w, const ModelConfig& c) {
    for (std::size_t v : {c.n_layers, c.d_model, c.n_heads, c.d_ff, c.vocab_size, c.segment_size,
                          c.num_mem_tokens, c.d_mem, c.dpfp_nu}) {
        w.uint(static_cast<std::uint32_t>(v));
    }
    w.f64(c.eps_assoc_f32);
    w.f64(c.eps_assoc_f64);
    w.f64(c.eps_norm);
    w.f64(c.rope_theta);
    w.uint(c.seed);
}

ModelConfig read_config(Reader& r) {
    ModelConfig c;
    for (std::size_t* field : {&c.n_layers, &c.d_model, &c.n_heads, &c.d_ff, &c.vocab_size,
                               &c.segment_size, &c.num_mem_tokens, &c.d_mem, &c.dpfp_nu}) {
        *field = r.uint<std::uint32_t>();
    }
    c.eps_assoc_f32 = r.f64();
    c.eps_assoc_f64 = r.f64();
    c.eps_norm = r.f64();
    c.rope_theta = r.f64();
    c.seed = r.uint<std::uint64_t>();
    return c;
}

template <Real T>
void read_payload(std::span<const std::uint8_t> raw, Tensor<T>& t) {
    auto& data = t.storage();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto* b = raw.data() + i * sizeof(T);
        if constexpr (sizeof(T) == 4) {
            std::uint32_t v = 0;
            for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
            data[i] = std::bit_cast<float>(v);
        } else {
            std::uint64_t v = 0;
            for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
            data[i] = std::bit_cast<double>(v);
        }
    }
}

template <Real T>
void decode_tensors(Reader& r, const std::vector<ManifestEntry>& manifest, const ModelConfig& config,
                    GroupedWeights<T>& weights) {
    const std::size_t payload_start = r.pos();
    auto payload = r.bytes(r.remaining());
    std::size_t index = 0;
    weights.for_each_mut([&](const std::string& name, Tensor<T>& t) {
        if (index >= manifest.size()) {
            throw InputError("weight container is missing tensor '" + name + "'");
        }
        const ManifestEntry& e = manifest[index++];
        if (e.name != name) {
            throw InputError("weight container has '" + e.name + "' where '" + name +
                             "' was expected");
        }
        const Shape want = expected_shape(config, name);
        if (e.shape != want) {
            throw DimensionError("weight '" + name + "' stored as " + shape_string(e.shape) +
                                 ", config requires " + shape_string(want));
        }
        const std::size_t nbytes = shape_numel(e.shape) * sizeof(T);
        if (e.offset > payload.size() || nbytes > payload.size() - e.offset) {
            throw InputError("tensor '" + name + "' payload exceeds file (offset " +
                             std::to_string(payload_start + e.offset) + ")");
        }
        t = Tensor<T>(e.shape);
        read_payload<T>(payload.subspan(e.offset, nbytes), t);
    });
    if (index != manifest.size()) {
        throw InputError("weight container has " + std::to_string(manifest.size() - index) +
                         " unexpected extra tensors");
    }
}

}  // namespace

template <Real T>
std::vector<std::uint8_t> encode_container(const ModelConfig& config,
                                           const GroupedWeights<T>& weights) {
    config.validate();
    check_shapes(config, weights);

    Writer w;
    w.bytes("ARMT", 4);
    w.uint(kContainerVersion);
    write_config(w, config);

    std::uint32_t count = 0;
    weights.for_each([&](const std::string&, const Tensor<T>&) { ++count; });
    w.uint(count);

    std::uint64_t offset = 0;
    weights.for_each([&](const std::string& name, const Tensor<T>& t) {
        w.uint(static_cast<std::uint16_t>(name.size()));
        w.bytes(name.data(), name.size());
        w.uint(static_cast<std::uint8_t>(dtype_of<T>()));
        w.uint(static_cast<std::uint8_t>(t.rank()));
        for (auto d : t.shape()) w.uint(static_cast<std::uint64_t>(d));
        w.uint(offset);
        offset += t.numel() * sizeof(T);
    });
    weights.for_each([&](const std::string&, const Tensor<T>& t) {
        for (T v : t.storage()) {
            if constexpr (sizeof(T) == 4) {
                w.f32(v);
            } else {
                w.f64(v);
            }
        }
    });
    return w.take();
}

Container decode_container(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), "ARMT", 4) != 0) {
        throw InputError("not an ARMT weight container (bad magic)");
    }
    const auto version = r.uint<std::uint32_t>();
    if (version != kContainerVersion) {
        throw InputError("unsupported weight container version " + std::to_string(version));
    }
    Container c;
    c.config = read_config(r);
    c.config.validate();

    const auto count = r.uint<std::uint32_t>();
    for (std::uint32_t i = 0; i < count; ++i) {
        ManifestEntry e;
        const auto name_len = r.uint<std::uint16_t>();
        auto name = r.bytes(name_len);
        e.name.assign(name.begin(), name.end());
        const auto code = r.uint<std::uint8_t>();
        if (code != static_cast<std::uint8_t>(DType::F32) &&
            code != static_cast<std::uint8_t>(DType::F64)) {
            throw InputError("tensor '" + e.name + "' has unknown dtype code " +
                             std::to_string(code));
        }
        e.dtype = static_cast<DType>(code);
        const auto rank = r.uint<std::uint8_t>();
        for (std::uint8_t k = 0; k < rank; ++k) {
            e.shape.push_back(static_cast<std::size_t>(r.uint<std::uint64_t>()));
        }
        e.offset = r.uint<std::uint64_t>();
        c.manifest.push_back(std::move(e));
    }
    if (c.manifest.empty()) {
        throw InputError("weight container has no tensors");
    }
    c.dtype = c.manifest.front().dtype;
    for (const auto& e : c.manifest) {
        if (e.dtype != c.dtype) {
            throw InputError("mixed tensor dtypes in one container are not supported");
        }
    }
    if (c.dtype == DType::F32) {
        decode_tensors(r, c.manifest, c.config, c.f32);
    } else {
        decode_tensors(r, c.manifest, c.config, c.f64);
    }
    return c;
}

template <Real T>
GroupedWeights<T> weights_as(const Container& c) {
    if (c.dtype == DType::F32) {
        if constexpr (std::is_same_v<T, float>) return c.f32;
        else return cast_weights<T>(c.f32);
    }
    if constexpr (std::is_same_v<T, double>) return c.f64;
    else return cast_weights<T>(c.f64);
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot open '" + path.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw InputError("failed writing '" + path.string() + "'");
    }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template std::vector<std::uint8_t> encode_container<float>(const ModelConfig&,
                                                           const GroupedWeights<float>&);
template std::vector<std::uint8_t> encode_container<double>(const ModelConfig&,
                                                            const GroupedWeights<double>&);
template GroupedWeights<float> weights_as<float>(const Container&);
template GroupedWeights<double> weights_as<double>(const Container&);

}  // namespace armt::model
