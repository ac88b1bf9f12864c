#pragma once

#include <string>

namespace jacobi {

// Persistent memo of local brute-force dimensions: a version header, then one record per line
// "p k1 a1 has_second k2 a2 e1 e2 k3 dim checksum". A file that fails any check is ignored whole.
struct CacheLoad {
    bool ok = false;
    size_t records = 0;
    std::string warning;  // empty when ok or when the file does not exist
};

inline constexpr const char* kCacheHeader = "jacobi1-local-dims v1";

std::string cache_file(const std::string& dir);
CacheLoad load_local_cache(const std::string& path);
// Appends the memo entries the file lacks; a file with a bad header is moved aside first.
size_t save_local_cache(const std::string& path);

}  // namespace jacobi
