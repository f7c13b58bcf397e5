// Prints one PASS/FAIL line per criterion. Exit status is nonzero if any selected criterion fails.
#include <bucket_trees/verify.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  using namespace bucket_trees;
  CLI::App app{"acceptance criteria"};
  std::vector<int> ids;
  std::uint64_t seed = 20240601;
  bool quick = false, verbose = false;
  std::string json_out;
  app.add_option("--criterion", ids, "criterion ids (default: all)")->check(CLI::Range(1, 8));
  app.add_option("--seed", seed);
  app.add_flag("--quick", quick, "reduced bounds");
  app.add_flag("-v,--verbose", verbose, "print every check");
  app.add_option("--json", json_out, "write the report as JSON");
  CLI11_PARSE(app, argc, argv);
  if (ids.empty())
    for (int i = 1; i <= 8; ++i) ids.push_back(i);

  const auto report = verify_suite(quick ? VerifyLevel::Quick : VerifyLevel::Full, seed, ids);
  for (const auto& c : report.criteria) {
    std::printf("criterion %d %s: %s (%.1f s)\n", c.id, c.pass ? "PASS" : "FAIL", c.title.c_str(), c.seconds);
    for (const auto& k : c.checks)
      if (verbose || !k.pass)
        std::printf("    [%s] %s%s%s\n", k.pass ? "ok" : "FAIL", k.name.c_str(), k.detail.empty() ? "" : " : ",
                    k.detail.c_str());
  }
  if (!json_out.empty()) std::ofstream(json_out) << to_json(report).dump(2) << "\n";
  return report.pass() ? 0 : 1;
}
