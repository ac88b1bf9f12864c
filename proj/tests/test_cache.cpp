#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "jacobi/cache.hpp"
#include "jacobi/invariants.hpp"

using namespace jacobi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("j1cache-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("round trip through the cache file") {
    TempDir dir;
    std::string f = cache_file(dir.path.string());
    CHECK(load_local_cache(f).ok);  // absent file is fine
    CHECK(load_local_cache(f).warning.empty());

    LocalSpec s;
    s.p = 3;
    s.k1 = 2;
    s.a1 = 1;
    s.k2 = 1;
    s.a2 = 2;
    s.k3 = 2;
    s.e1 = -1;
    int d = local_dim_bruteforce(s);
    size_t written = save_local_cache(f);
    CHECK(written >= 1);
    CHECK(slurp(f).rfind(std::string(kCacheHeader) + "\n", 0) == 0);
    CHECK(save_local_cache(f) == 0);  // nothing new

    auto r = load_local_cache(f);
    CHECK(r.ok);
    CHECK(r.records == written);
    CHECK(local_dim_bruteforce(s) == d);
}

TEST_CASE("a damaged file is ignored whole") {
    TempDir dir;
    std::string f = cache_file(dir.path.string());
    {
        std::ofstream out(f);
        out << kCacheHeader << "\n3 1 1 1 1 1 1 1 1 0 deadbeef\n";
    }
    auto r = load_local_cache(f);
    CHECK(!r.ok);
    CHECK(r.records == 0);
    CHECK(r.warning.find("corrupt") != std::string::npos);

    {
        std::ofstream out(f);
        out << "some other format\n";
    }
    r = load_local_cache(f);
    CHECK(!r.ok);
    CHECK(!r.warning.empty());
    save_local_cache(f);
    CHECK(fs::exists(f + ".corrupt"));
    CHECK(load_local_cache(f).ok);
}

TEST_CASE("records must be canonical") {
    TempDir dir;
    std::string f = cache_file(dir.path.string());
    // a1 = 4 is not a square-class representative mod 3
    std::ofstream out(f);
    out << kCacheHeader << "\n3 1 4 1 0 1 1 1 0 1 0\n";
    out.close();
    CHECK(!load_local_cache(f).ok);
}

TEST_CASE("seeding rejects nonsense") {
    LocalSpec s;
    s.p = 4;
    CHECK_THROWS(local_cache_seed(s, 1));
    LocalSpec full;
    full.full = true;
    CHECK_THROWS(local_cache_seed(full, 1));
}
