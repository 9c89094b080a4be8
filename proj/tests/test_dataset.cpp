#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "levyx/dataset.hpp"
#include "levyx/rng.hpp"

namespace fs = std::filesystem;

namespace {

levyx::BurstDataset make_ds(int dim, std::size_t n, std::uint64_t seed = 3) {
  levyx::BurstDataset ds;
  ds.t_star = 0.001;
  ds.dim = dim;
  ds.seed = seed;
  levyx::Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 2 * dim; ++k)
      (k < dim ? ds.z : ds.x).push_back(rng.uniform(-5.0, 5.0) * std::exp(rng.uniform(-8.0, 8.0)));
  return ds;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("levyx_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("dataset round-trips through CSV with full precision") {
  TempDir tmp;
  for (int dim : {1, 2, 3}) {
    const auto ds = make_ds(dim, 257);
    const auto path = tmp.file("ds" + std::to_string(dim) + ".csv");
    levyx::save_dataset(ds, path);
    const auto back = levyx::load_dataset(path);
    REQUIRE(back.dim == ds.dim);
    REQUIRE(back.t_star == ds.t_star);
    REQUIRE(back.seed == ds.seed);
    REQUIRE(back.z == ds.z);  // bitwise equality
    REQUIRE(back.x == ds.x);
  }
}

TEST_CASE("header mismatch is a schema error") {
  TempDir tmp;
  const auto ds = make_ds(2, 5);
  const auto path = tmp.file("ds.csv");
  levyx::save_dataset(ds, path);
  // Corrupt the header but keep the sidecar.
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  content.replace(0, 3, "a_1");
  std::ofstream out(path, std::ios::trunc);
  out << content;
  out.close();
  CHECK_THROWS_AS(levyx::load_dataset(path), levyx::SchemaError);
}

TEST_CASE("empty record section is a schema error") {
  TempDir tmp;
  const auto path = tmp.file("empty.csv");
  {
    std::ofstream out(path);
    out << "z_1,x_1\n";
    std::ofstream mout(path + ".meta.json");
    mout << R"({"t_star": 0.001, "dim": 1, "seed": 0, "aborted_trajectories": 0})";
  }
  CHECK_THROWS_AS(levyx::load_dataset(path), levyx::SchemaError);
}

TEST_CASE("malformed line reports its line number") {
  TempDir tmp;
  const auto path = tmp.file("bad.csv");
  {
    std::ofstream out(path);
    out << "z_1,x_1\n1.0,2.0\n1.0,oops\n";
    std::ofstream mout(path + ".meta.json");
    mout << R"({"t_star": 0.001, "dim": 1, "seed": 0, "aborted_trajectories": 0})";
  }
  try {
    levyx::load_dataset(path);
    FAIL("expected ParseError");
  } catch (const levyx::ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("missing sidecar is an io error") {
  TempDir tmp;
  const auto path = tmp.file("nometa.csv");
  std::ofstream out(path);
  out << "z_1,x_1\n1.0,2.0\n";
  out.close();
  CHECK_THROWS_AS(levyx::load_dataset(path), levyx::IoError);
}

TEST_CASE("wrong column count is a parse error") {
  TempDir tmp;
  const auto path = tmp.file("cols.csv");
  {
    std::ofstream out(path);
    out << "z_1,z_2,x_1,x_2\n1.0,2.0,3.0\n";
    std::ofstream mout(path + ".meta.json");
    mout << R"({"t_star": 0.5, "dim": 2, "seed": 0, "aborted_trajectories": 0})";
  }
  CHECK_THROWS_AS(levyx::load_dataset(path), levyx::ParseError);
}
