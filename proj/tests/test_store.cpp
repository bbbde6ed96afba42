#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "rav/store.hpp"

using namespace rav;
using namespace rav::store;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rav_store_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

} // namespace

TEST_CASE("missing keys return nothing") {
    TempDir dir;
    Store store(dir.path);
    CHECK_FALSE(store.get("charstring", "n=5").has_value());
}

TEST_CASE("put then get round-trips the payload") {
    TempDir dir;
    Store store(dir.path);
    const BitVec payload = BitVec::from_string("101100111000101");
    store.put(make_entry("charstring", "n=5,s=2,scheme=micro", payload));
    const auto entry = store.get("charstring", "n=5,s=2,scheme=micro");
    REQUIRE(entry.has_value());
    CHECK(entry->bits() == payload);
    CHECK(entry->bit_length == 15);
}

TEST_CASE("puts are idempotent for identical payloads") {
    TempDir dir;
    Store store(dir.path);
    const BitVec payload = BitVec::from_string("1010");
    store.put(make_entry("witness-table", "n=4", payload));
    CHECK_NOTHROW(store.put(make_entry("witness-table", "n=4", payload)));
}

TEST_CASE("a different payload under an existing key is a divergence fault") {
    TempDir dir;
    Store store(dir.path);
    store.put(make_entry("charstring", "n=4", BitVec::from_string("1010")));
    CHECK_THROWS_AS(store.put(make_entry("charstring", "n=4", BitVec::from_string("1011"))),
                    DivergenceError);
    // The development escape hatch overwrites.
    CHECK_NOTHROW(store.put(make_entry("charstring", "n=4", BitVec::from_string("1011")), true));
    CHECK(store.get("charstring", "n=4")->bits() == BitVec::from_string("1011"));
}

TEST_CASE("corrupted files fail their checksum") {
    TempDir dir;
    Store store(dir.path);
    store.put(make_entry("charstring", "n=4", BitVec::from_string("1010")));
    // Flip a byte in the stored file.
    fs::path file;
    for (const auto& e : fs::recursive_directory_iterator(dir.path)) {
        if (e.path().extension() == ".json") {
            file = e.path();
        }
    }
    REQUIRE_FALSE(file.empty());
    std::fstream f(file, std::ios::in | std::ios::out);
    f.seekp(12);
    f.put('~');
    f.close();
    CHECK_THROWS_AS(store.get("charstring", "n=4"), IoError);

    const auto report = store.verify();
    CHECK(report.checked == 1);
    CHECK(report.corrupt.size() == 1);
}

TEST_CASE("entries survive a process restart") {
    TempDir dir;
    const BitVec payload = BitVec::from_string("0110");
    {
        Store first(dir.path);
        first.put(make_entry("charstring", "n=2", payload));
    }
    Store second(dir.path);
    const auto entry = second.get("charstring", "n=2");
    REQUIRE(entry.has_value());
    CHECK(entry->bits() == payload);
}

TEST_CASE("list sees every kind") {
    TempDir dir;
    Store store(dir.path);
    store.put(make_entry("charstring", "n=2", BitVec::from_string("01")));
    store.put(make_entry("witness-table", "n=3", BitVec::from_string("111")));
    CHECK(store.list().size() == 2);
    CHECK(store.verify().corrupt.empty());
}

TEST_CASE("empty payloads are rejected") {
    TempDir dir;
    Store store(dir.path);
    CHECK_THROWS_AS(store.put(make_entry("charstring", "n=0", BitVec())), ContractError);
}
