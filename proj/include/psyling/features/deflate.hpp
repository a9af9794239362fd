#pragma once

#include <string_view>
#include <vector>

#include <zlib.h>

#include "psyling/error.hpp"

namespace psyling {

/// Size of the raw Deflate (RFC 1951) encoding of `stream` divided by its
/// length. Highly repetitive input goes towards 0; incompressible input sits
/// slightly above 1.
inline double deflate_complexity(std::string_view stream) {
  if (stream.empty()) return 0.0;
  z_stream zs{};
  // Negative window bits: raw Deflate, no zlib header or checksum.
  if (deflateInit2(&zs, 9, Z_DEFLATED, -15, 9, Z_DEFAULT_STRATEGY) != Z_OK)
    throw NumericalError("deflateInit2 failed");
  std::vector<unsigned char> out(deflateBound(&zs, static_cast<uLong>(stream.size())) + 16);
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(stream.data()));
  zs.avail_in = static_cast<uInt>(stream.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw NumericalError("deflate did not finish");
  return static_cast<double>(produced) / static_cast<double>(stream.size());
}

}  // namespace psyling
