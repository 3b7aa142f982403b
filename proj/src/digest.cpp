#include "anep/digest.hpp"

#include <openssl/evp.h>

#include "anep/errors.hpp"

namespace anep {

std::string sha256_hex(std::span<const uint8_t> data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &md_len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256: EVP_Digest failed");
    static const char hex[] = "0123456789abcdef";
    std::string out(md_len * 2, '0');
    for (unsigned int i = 0; i < md_len; ++i) {
        out[2 * i] = hex[md[i] >> 4];
        out[2 * i + 1] = hex[md[i] & 0xF];
    }
    return out;
}

std::string sha256_hex(const std::string& data) {
    return sha256_hex(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(data.data()), data.size()));
}

}  // namespace anep
