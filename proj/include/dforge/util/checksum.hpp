#pragma once

#include <boost/crc.hpp>

#include <cstddef>
#include <cstdint>

namespace dforge::util {

// CRC-64/XZ. Weight-file trailer checksum and in-memory fingerprints.
class Checksum64 {
public:
    void update(const void* data, std::size_t size) noexcept { crc_.process_bytes(data, size); }
    std::uint64_t digest() const noexcept { return crc_.checksum(); }

private:
    boost::crc_optimal<64, 0x42F0E1EBA9EA3693ULL, 0xFFFFFFFFFFFFFFFFULL, 0xFFFFFFFFFFFFFFFFULL, true, true> crc_;
};

inline std::uint64_t checksum64(const void* data, std::size_t size) noexcept {
    Checksum64 c;
    c.update(data, size);
    return c.digest();
}

}  // namespace dforge::util
