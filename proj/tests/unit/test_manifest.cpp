#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "manifest.hpp"

using namespace sidebp::cli;

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(RunManifest, JsonRoundTrip) {
  RunManifest m;
  m.command = "density g";
  m.parameters = {{"p", 0.5}, {"preset", "noisy:0.85"}};
  m.seed = 18446744073709551615ULL;
  m.tool_version = "1.2.3";
  m.wall_time_seconds = 0.25;
  m.outputs = {{"-", sha256_hex("x")}};
  EXPECT_EQ(RunManifest::from_json(m.to_json()), m);
  m.seed.reset();
  const auto j = m.to_json();
  EXPECT_TRUE(j.at("seed").is_null());
  EXPECT_EQ(RunManifest::from_json(j), m);
}

TEST(RunManifest, VerifiesFilesOnDisk) {
  const auto dir = std::filesystem::temp_directory_path() / "sidebp_manifest_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "result.csv");
    out << "a,b\n1,2\n";
  }
  RunManifest m;
  m.command = "eval figure";
  m.outputs = {{"result.csv", sha256_file(dir / "result.csv")}, {"-", sha256_hex("")}};
  EXPECT_EQ(m.outputs[0].sha256, sha256_hex("a,b\n1,2\n"));
  EXPECT_TRUE(verify_outputs(m, dir));
  {
    std::ofstream out(dir / "result.csv", std::ios::app);
    out << "3,4\n";
  }
  EXPECT_FALSE(verify_outputs(m, dir));
  std::filesystem::remove_all(dir);
  EXPECT_FALSE(verify_outputs(m, dir));
}
