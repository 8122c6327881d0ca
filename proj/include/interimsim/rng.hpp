#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace interimsim {

/*
 * Counter-based random stream (Philox4x32-10).
 *
 * The 64-bit seed is the Philox key; the 128-bit counter is split into
 * (stream_id, substream, block). Any (seed, stream_id, substream) triple is
 * addressable directly, so replicate k never depends on replicates < k.
 * Satisfies UniformRandomBitGenerator, so it can drive <random> distributions.
 */
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t substream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /* Uniform on the open interval (0, 1) with 53 bits of resolution. */
    double uniform();

    /* Fresh stream sharing seed and stream id, with its own substream index. */
    RngStream substream(std::uint32_t index) const { return RngStream(seed_, stream_id_, index); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::uint32_t substream_index() const { return substream_; }

    /* Raw block function, exposed for known-answer tests. */
    static std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                                      std::array<std::uint32_t, 2> key);

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint32_t substream_;
    std::uint32_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 2;  // 64-bit words consumed from buffer_ (2 per block)
};

}  // namespace interimsim
