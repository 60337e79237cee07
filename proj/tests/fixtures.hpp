#pragma once

// Toy exchange with p = 5303, rowsA = 3, columnsA = 2, t = 2. The private
// matrices are injected verbatim; several entries sit below (p-1)/2, so
// they could not have come from sample_matrix.

#include <string>
#include <vector>

#include "rkex/bytes.hpp"
#include "rkex/kep.hpp"

namespace fixtures {

using rkex::ParamSet;
using rkex::PartySecret;
using rkex::PrimeModulus;
using rkex::PublicShare;
using rkex::ZpMatrix;

inline const PrimeModulus kToyP{5303};

inline ParamSet toy_params() { return ParamSet(kToyP, 3, 2, 2); }

inline ZpMatrix mat(std::size_t r, std::size_t c, std::vector<std::uint64_t> e) {
  return ZpMatrix(r, c, kToyP, std::move(e));
}

inline PartySecret alice_secret() {
  return PartySecret(toy_params(), {{mat(3, 2, {1123, 341, 14, 238, 1041, 13}),
                                     mat(2, 3, {1525, 1019, 1561, 1561, 716, 862})},
                                    {mat(3, 2, {665, 1338, 622, 38, 505, 1617}),
                                     mat(2, 3, {925, 1412, 598, 364, 463, 409})}});
}

inline PartySecret bob_secret() {
  return PartySecret(toy_params(), {{mat(3, 2, {802, 2435, 1206, 3408, 707, 3723}),
                                     mat(2, 3, {1174, 2805, 1242, 3110, 814, 550})},
                                    {mat(3, 2, {656, 13, 1900, 107, 611, 1537}),
                                     mat(2, 3, {2192, 1270, 845, 820, 1022, 2194})}});
}

inline PublicShare alice_share() {
  return PublicShare(toy_params(), {mat(3, 3, {1707, 4410, 5290, 446, 4372, 4284, 1009, 4184, 2883}),
                                    mat(3, 3, {4436, 4695, 978, 549, 4954, 379, 416, 3406, 3500})});
}

inline PublicShare bob_share() {
  return PublicShare(toy_params(), {mat(3, 3, {3083, 5209, 2014, 3429, 159, 4847, 4831, 2322, 3791}),
                                    mat(3, 3, {893, 3229, 4815, 4837, 3429, 117, 1182, 2858, 1374})});
}

inline const std::vector<std::uint64_t> kComponents = {3207, 2121};

inline const std::string kKeyHex =
    "0c3322f92446b51e3372d2a7bd2b81265bb96f32fa38562e4c02414e3c73d85c"
    "a4b358363b8792461d4033c1d7623589c0f6c07ab01e33b6a7294019e125c779";

inline const std::string kPlaintext = "This is a secret communication.";

inline const std::vector<std::uint8_t> kCipherD = {
    88,  91,  75,  138, 4,   47,  198, 62,  82,  82,  161, 194, 222, 89,  228, 82,
    123, 218, 0,   95,  151, 77,  56,  71,  47,  99,  53,  39,  83,  29,  246, 124,
    132, 147, 120, 22,  27,  167, 178, 102, 61,  96,  19,  225, 247, 66,  21,  169,
    224, 214, 224, 90,  144, 62,  19,  150, 135, 9,   96,  57,  193, 5,   231, 89};

}  // namespace fixtures
