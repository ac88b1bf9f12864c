#include "jacobi/cache.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "jacobi/errors.hpp"
#include "jacobi/invariants.hpp"

namespace jacobi {

namespace {

// FNV-1a, so the checksum is the same on every platform
u64 fnv1a(const std::string& s) {
    u64 h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string record_body(const LocalSpec& s, int dim) {
    std::ostringstream os;
    os << s.p << ' ' << s.k1 << ' ' << s.a1 << ' ' << int(s.has_second) << ' ' << s.k2 << ' ' << s.a2 << ' ' << s.e1
       << ' ' << s.e2 << ' ' << s.k3 << ' ' << dim;
    return os.str();
}

struct Parsed {
    bool ok = false;
    std::string warning;
    std::vector<std::pair<LocalSpec, int>> records;
    std::set<std::string> bodies;
};

Parsed parse(const std::string& path) {
    Parsed out;
    std::ifstream in(path);
    if (!in) {
        out.ok = true;  // nothing yet
        return out;
    }
    std::string line;
    if (!std::getline(in, line) || line != kCacheHeader) {
        out.warning = "cache " + path + " has no valid header; ignored";
        return out;
    }
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cut = line.rfind(' ');
        std::string body = cut == std::string::npos ? "" : line.substr(0, cut);
        std::string sum = cut == std::string::npos ? "" : line.substr(cut + 1);
        std::ostringstream want;
        want << std::hex << fnv1a(body);
        LocalSpec s;
        int has2 = 0, dim = -1;
        std::istringstream is(body);
        std::string extra;
        bool parsed = static_cast<bool>(is >> s.p >> s.k1 >> s.a1 >> has2 >> s.k2 >> s.a2 >> s.e1 >> s.e2 >> s.k3 >> dim) &&
                      !(is >> extra);
        s.has_second = has2 != 0;
        bool sane = parsed && sum == want.str() && dim >= 0 && (has2 == 0 || has2 == 1);
        if (sane) {
            try {
                validate(s);
                sane = canonical(s) == s;
            } catch (const Error&) {
                sane = false;
            }
        }
        if (!sane) {
            out.warning = "cache " + path + " is corrupt at line " + std::to_string(lineno) + "; ignored";
            out.records.clear();
            return out;
        }
        out.records.emplace_back(s, dim);
        out.bodies.insert(body);
    }
    out.ok = true;
    return out;
}

}  // namespace

std::string cache_file(const std::string& dir) { return (std::filesystem::path(dir) / "local_dims.txt").string(); }

CacheLoad load_local_cache(const std::string& path) {
    Parsed p = parse(path);
    CacheLoad r;
    r.ok = p.ok;
    r.warning = p.warning;
    if (!p.ok) return r;
    for (auto& [s, d] : p.records) local_cache_seed(s, d);
    r.records = p.records.size();
    return r;
}

size_t save_local_cache(const std::string& path) {
    namespace fs = std::filesystem;
    Parsed p = parse(path);
    if (!p.ok) fs::rename(path, path + ".corrupt");
    bool fresh = !p.ok || !fs::exists(path);
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write cache " + path);
    if (fresh) out << kCacheHeader << '\n';
    size_t added = 0;
    for (auto& [s, d] : local_cache_entries()) {
        std::string body = record_body(s, d);
        if (p.bodies.count(body)) continue;
        std::ostringstream sum;
        sum << std::hex << fnv1a(body);
        out << body << ' ' << sum.str() << '\n';
        ++added;
    }
    return added;
}

}  // namespace jacobi
